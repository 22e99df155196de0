//! Sample ingestion and export.
//!
//! CSV: header `j,re,im`, rows `j = 0..M-1` in order, grid point `e^{2πij/M}`
//! implied. JSON: `{ "grid_size": M, "values": [[re, im], ...] }`.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::BoundarySamples;

#[derive(Serialize, Deserialize)]
struct SamplesDocument {
    grid_size: usize,
    values: Vec<[f64; 2]>,
}

pub fn read_csv<R: Read>(reader: R) -> Result<BoundarySamples> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers().map_err(|e| csv_error(e, 1))?.clone();
    let names: Vec<&str> = headers.iter().collect();
    if names != ["j", "re", "im"] {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header `j,re,im`, found `{}`", names.join(",")),
        });
    }
    let mut values = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let line = row + 2;
        let record = record.map_err(|e| csv_error(e, line))?;
        let line = record.position().map_or(line, |p| p.line() as usize);
        if record.len() != 3 {
            return Err(Error::Parse {
                line,
                message: format!("expected 3 fields, found {}", record.len()),
            });
        }
        let field = |i: usize, what: &str| -> Result<f64> {
            record[i].parse::<f64>().map_err(|e| Error::Parse {
                line,
                message: format!("bad {what} `{}`: {e}", &record[i]),
            })
        };
        let j: usize = record[0].parse().map_err(|e| Error::Parse {
            line,
            message: format!("bad index `{}`: {e}", &record[0]),
        })?;
        if j != row {
            return Err(Error::Parse {
                line,
                message: format!("expected index {row}, found {j}"),
            });
        }
        values.push(Complex64::new(field(1, "real part")?, field(2, "imaginary part")?));
    }
    BoundarySamples::new(values)
}

fn csv_error(e: csv::Error, fallback_line: usize) -> Error {
    let line = e
        .position()
        .map_or(fallback_line, |p| p.line() as usize);
    Error::Parse {
        line,
        message: e.to_string(),
    }
}

pub fn read_json<R: Read>(reader: R) -> Result<BoundarySamples> {
    let doc: SamplesDocument = serde_json::from_reader(reader).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    if doc.values.len() != doc.grid_size {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "grid_size {} disagrees with {} values",
                doc.grid_size,
                doc.values.len()
            ),
        });
    }
    BoundarySamples::new(doc.values.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
}

pub fn write_csv<W: Write>(samples: &BoundarySamples, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["j", "re", "im"]).map_err(csv_write_error)?;
    for (j, v) in samples.values().iter().enumerate() {
        w.write_record([j.to_string(), v.re.to_string(), v.im.to_string()])
            .map_err(csv_write_error)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_write_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

pub fn to_json(samples: &BoundarySamples) -> Result<String> {
    let doc = SamplesDocument {
        grid_size: samples.grid_size(),
        values: samples.values().iter().map(|v| [v.re, v.im]).collect(),
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_roundtrip() {
        let s = BoundarySamples::sample(|z| z * z + 0.25, 8).unwrap();
        let mut buf = Vec::new();
        write_csv(&s, &mut buf).unwrap();
        assert!(buf.starts_with(b"j,re,im\n"));
        assert_eq!(read_csv(buf.as_slice()).unwrap(), s);
    }

    #[test]
    fn json_roundtrip() {
        let s = BoundarySamples::sample(|z| 1.0 / (z - 0.5), 16).unwrap();
        let text = to_json(&s).unwrap();
        assert_eq!(read_json(text.as_bytes()).unwrap(), s);
    }

    #[test]
    fn csv_errors_carry_line_numbers() {
        let text = "j,re,im\n0,1,0\n1,1,0\n2,oops,0\n3,1,0\n";
        match read_csv(text.as_bytes()) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 4);
                assert!(message.contains("oops"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let out_of_order = "j,re,im\n0,1,0\n2,1,0\n1,1,0\n3,1,0\n";
        assert!(matches!(read_csv(out_of_order.as_bytes()), Err(Error::Parse { line: 3, .. })));
        let bad_header = "k,re,im\n0,1,0\n";
        assert!(matches!(read_csv(bad_header.as_bytes()), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn json_errors_carry_line_numbers() {
        let text = "{\n  \"grid_size\": 4,\n  \"values\": [[1,0],[1,0],\n  [1,\"x\"],[1,0]]\n}";
        assert!(matches!(read_json(text.as_bytes()), Err(Error::Parse { line: 4, .. })));
        let mismatch = r#"{"grid_size": 5, "values": [[1,0],[1,0],[1,0],[1,0]]}"#;
        assert!(matches!(read_json(mismatch.as_bytes()), Err(Error::Parse { .. })));
    }
}
