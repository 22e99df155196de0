//! Built-in boundary functions described by short strings.
//!
//! | spec                    | function                                   |
//! |-------------------------|--------------------------------------------|
//! | `pole:a[^k][,b[^k]...]` | `Σ 1/(z - a)^k`                            |
//! | `poly:<terms>`          | Laurent polynomial, e.g. `z^3+2`, `z^-2`   |
//! | `lacunary:<k>`          | `Σ_{j=1..k} 2^{-j} z^{-3^j}`               |
//! | `conj-rational:<spec>`  | complex conjugate of another generator     |
//! | `paper-6`               | `z/(z - 1/2)`                              |
//! | `rational:<path>`       | rational test case in JSON                 |
//!
//! Complex literals accept `0.3`, `-0.5i`, `0.3+0.2i`, `i`; a Laurent
//! coefficient with both parts goes in parentheses, `(1+2i)z^2`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::oracle::RationalFunction;

/// Largest `k` accepted by `lacunary:k`; `3^k` must fit comfortably in `i32`.
pub const MAX_LACUNARY_TERMS: u32 = 18;

#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    Poles(Vec<(Complex64, u32)>),
    Laurent(Vec<(i32, Complex64)>),
    Lacunary(u32),
    Conjugate(Box<Generator>),
    Rational(RationalFunction),
}

impl Generator {
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec == "paper-6" {
            return Ok(Generator::Rational(RationalFunction::new(
                vec![(Complex64::new(0.0, 0.0), 1)],
                vec![(Complex64::new(0.5, 0.0), 1)],
                Complex64::new(1.0, 0.0),
            )?));
        }
        let (kind, body) = spec
            .split_once(':')
            .ok_or_else(|| Error::InvalidInput(format!("generator `{spec}` has no `kind:` prefix")))?;
        match kind {
            "pole" => body.split(',').map(parse_pole).collect::<Result<_>>().map(Generator::Poles),
            "poly" => parse_laurent(body).map(Generator::Laurent),
            "lacunary" => {
                let k: u32 = body
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("lacunary count `{body}` is not a nonnegative integer")))?;
                if k > MAX_LACUNARY_TERMS {
                    return Err(Error::InvalidInput(format!("lacunary count {k} exceeds {MAX_LACUNARY_TERMS}")));
                }
                Ok(Generator::Lacunary(k))
            }
            "conj-rational" => Ok(Generator::Conjugate(Box::new(Generator::parse(body)?))),
            "rational" => {
                let text = std::fs::read_to_string(body.trim())?;
                Ok(Generator::Rational(serde_json::from_str(&text)?))
            }
            other => Err(Error::InvalidInput(format!("unknown generator kind `{other}`"))),
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            Generator::Poles(poles) => poles.iter().map(|&(a, k)| (z - a).powi(-(k as i32))).sum(),
            Generator::Laurent(terms) => terms.iter().map(|&(n, c)| c * z.powi(n)).sum(),
            Generator::Lacunary(k) => (1..=*k)
                .map(|j| 0.5f64.powi(j as i32) * z.powi(-(3i32.pow(j))))
                .sum(),
            Generator::Conjugate(inner) => inner.eval(z).conj(),
            Generator::Rational(r) => r.eval(z),
        }
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Generator::parse(s)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Poles(p) => {
                let parts: Vec<String> = p.iter().map(|(a, k)| format!("{a}^{k}")).collect();
                write!(f, "pole:{}", parts.join(","))
            }
            Generator::Laurent(t) => {
                let parts: Vec<String> = t.iter().map(|(n, c)| format!("({c})z^{n}")).collect();
                write!(f, "poly:{}", parts.join("+"))
            }
            Generator::Lacunary(k) => write!(f, "lacunary:{k}"),
            Generator::Conjugate(g) => write!(f, "conj-rational:{g}"),
            Generator::Rational(r) => write!(f, "rational:{}", serde_json::to_string(r).map_err(|_| fmt::Error)?),
        }
    }
}

fn parse_pole(item: &str) -> Result<(Complex64, u32)> {
    let (loc, order) = match item.rsplit_once('^') {
        Some((l, k)) => (
            l,
            k.trim()
                .parse::<u32>()
                .map_err(|_| Error::InvalidInput(format!("pole order `{k}` is not a positive integer")))?,
        ),
        None => (item, 1),
    };
    if order == 0 {
        return Err(Error::InvalidInput("pole order must be at least 1".into()));
    }
    let a = parse_complex(loc)?;
    if (a.norm() - 1.0).abs() < 1e-9 {
        return Err(Error::InvalidInput(format!("pole {a} lies on the circle")));
    }
    Ok((a, order))
}

/// Parses `3`, `-0.5`, `2i`, `-i`, `0.3+0.2i`, `1e-3-2i`, and any of those in
/// parentheses.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s = text.trim();
    let s = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(s).trim();
    let bad = || Error::InvalidInput(format!("`{text}` is not a complex number"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Ok(x) = s.parse::<f64>() {
        return Ok(Complex64::new(x, 0.0));
    }
    let body = s.strip_suffix('i').ok_or_else(bad)?;
    let split = body
        .char_indices()
        .rev()
        .find(|&(k, ch)| k > 0 && (ch == '+' || ch == '-') && !matches!(body.as_bytes()[k - 1], b'e' | b'E'))
        .map(|(k, _)| k);
    let (re, im) = match split {
        Some(k) => (body[..k].parse::<f64>().map_err(|_| bad())?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => t.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

/// Comma-separated coefficients, lowest degree first.
pub fn parse_coefficients(text: &str) -> Result<Vec<Complex64>> {
    text.split(',').map(parse_complex).collect()
}

fn parse_laurent(body: &str) -> Result<Vec<(i32, Complex64)>> {
    let mut terms = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    let bytes = body.as_bytes();
    for (k, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 && k > start && !matches!(bytes[k - 1], b'^' | b'e' | b'E') => {
                terms.push(&body[start..k]);
                start = k;
            }
            _ => {}
        }
    }
    terms.push(&body[start..]);
    let mut out: Vec<(i32, Complex64)> = Vec::new();
    for term in terms {
        let (n, c) = parse_term(term)?;
        match out.iter_mut().find(|(m, _)| *m == n) {
            Some(entry) => entry.1 += c,
            None => out.push((n, c)),
        }
    }
    Ok(out)
}

fn parse_term(term: &str) -> Result<(i32, Complex64)> {
    let t: String = term.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::InvalidInput(format!("`{term}` is not a Laurent term"));
    let Some(zpos) = t.rfind('z') else {
        return Ok((0, parse_complex(&t)?));
    };
    let coef = t[..zpos].trim_end_matches('*');
    let coef = match coef {
        "" | "+" => Complex64::new(1.0, 0.0),
        "-" => Complex64::new(-1.0, 0.0),
        c => match c.strip_prefix('-') {
            Some(rest) if rest.starts_with('(') => -parse_complex(rest)?,
            _ => parse_complex(c.strip_prefix('+').unwrap_or(c))?,
        },
    };
    let rest = &t[zpos + 1..];
    let n = if rest.is_empty() {
        1
    } else {
        rest.strip_prefix('^').ok_or_else(bad)?.parse::<i32>().map_err(|_| bad())?
    };
    Ok((n, coef))
}
