//! Plain-text persistence of modular polynomials.
//!
//! Format (UTF-8, LF): a header line `tripoly N=<N>` or `bipoly N=<N>`,
//! then one monomial per line, `i j k : num/den` (tri) or `i j : num/den`
//! (bi), exponents space-separated, monomials sorted lexicographically by
//! exponent tuple descending, no zero coefficients, `/den` omitted when the
//! denominator is 1.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use rug::{Integer, Rational};

use super::{BiPolynomial, ModPolyError, TriPolynomial};
use crate::exactalg::Rat;

/// A polynomial file: either a two-variable Phi_N or three-variable Psi_N,
/// tagged with its level.
#[derive(Clone, Debug, PartialEq)]
pub enum PolyFile {
    Bi { n: u64, poly: BiPolynomial },
    Tri { n: u64, poly: TriPolynomial },
}

impl PolyFile {
    pub fn level(&self) -> u64 {
        match self {
            PolyFile::Bi { n, .. } => *n,
            PolyFile::Tri { n, .. } => *n,
        }
    }
}

fn format_rat(c: &Rat) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Serialise to the canonical text form.
pub fn render_poly(p: &PolyFile) -> String {
    let mut out = String::new();
    match p {
        PolyFile::Bi { n, poly } => {
            out.push_str(&format!("bipoly N={n}\n"));
            for (&(i, j), c) in poly.terms.iter().rev() {
                out.push_str(&format!("{i} {j} : {}\n", format_rat(c)));
            }
        }
        PolyFile::Tri { n, poly } => {
            out.push_str(&format!("tripoly N={n}\n"));
            for (&(i, j, k), c) in poly.terms.iter().rev() {
                out.push_str(&format!("{i} {j} {k} : {}\n", format_rat(c)));
            }
        }
    }
    out
}

/// Write the polynomial to `path` in the canonical text form.
pub fn save_poly(p: &PolyFile, path: &Path) -> Result<(), ModPolyError> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    fs::write(path, render_poly(p))?;
    Ok(())
}

fn parse_rat(s: &str, line: usize) -> Result<Rat, ModPolyError> {
    let err = |msg: String| ModPolyError::ParseError { line, msg };
    let r = match s.split_once('/') {
        Some((num, den)) => {
            let n = Integer::from_str(num.trim())
                .map_err(|e| err(format!("bad numerator {num:?}: {e}")))?;
            let d = Integer::from_str(den.trim())
                .map_err(|e| err(format!("bad denominator {den:?}: {e}")))?;
            if d <= 0 {
                return Err(err(format!("denominator must be positive, got {d}")));
            }
            Rat(Rational::from((n, d)))
        }
        None => {
            let n = Integer::from_str(s.trim())
                .map_err(|e| err(format!("bad coefficient {s:?}: {e}")))?;
            Rat(Rational::from(n))
        }
    };
    if r.is_zero() {
        return Err(err("stored zero coefficient".into()));
    }
    Ok(r)
}

fn parse_exponent(s: &str, line: usize) -> Result<u32, ModPolyError> {
    s.parse::<u32>().map_err(|e| ModPolyError::ParseError {
        line,
        msg: format!("bad exponent {s:?}: {e}"),
    })
}

/// Read a polynomial file, reporting the offending line on failure.
pub fn load_poly(path: &Path) -> Result<PolyFile, ModPolyError> {
    let text = fs::read_to_string(path)?;
    parse_poly(&text)
}

pub fn parse_poly(text: &str) -> Result<PolyFile, ModPolyError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(ModPolyError::ParseError {
        line: 1,
        msg: "empty file".into(),
    })?;
    let header = header.trim();
    let (kind, level) = header.split_once(" N=").ok_or(ModPolyError::ParseError {
        line: 1,
        msg: format!("bad header {header:?}"),
    })?;
    let n: u64 = level.trim().parse().map_err(|e| ModPolyError::ParseError {
        line: 1,
        msg: format!("bad level {level:?}: {e}"),
    })?;
    let arity = match kind {
        "bipoly" => 2,
        "tripoly" => 3,
        other => {
            return Err(ModPolyError::ParseError {
                line: 1,
                msg: format!("unknown polynomial kind {other:?}"),
            })
        }
    };

    let mut bi = BiPolynomial::zero();
    let mut tri = TriPolynomial::zero();
    for (idx, raw) in lines {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let (exps, coeff) = raw.split_once(':').ok_or(ModPolyError::ParseError {
            line,
            msg: "missing ':' separator".into(),
        })?;
        let exps: Vec<&str> = exps.split_whitespace().collect();
        if exps.len() != arity {
            return Err(ModPolyError::ParseError {
                line,
                msg: format!("expected {arity} exponents, found {}", exps.len()),
            });
        }
        let c = parse_rat(coeff.trim(), line)?;
        if arity == 2 {
            let key = (
                parse_exponent(exps[0], line)?,
                parse_exponent(exps[1], line)?,
            );
            if !bi.coeff(key).is_zero() {
                return Err(ModPolyError::ParseError {
                    line,
                    msg: format!("duplicate monomial {key:?}"),
                });
            }
            bi.insert(key, c);
        } else {
            let key = (
                parse_exponent(exps[0], line)?,
                parse_exponent(exps[1], line)?,
                parse_exponent(exps[2], line)?,
            );
            if !tri.coeff(key).is_zero() {
                return Err(ModPolyError::ParseError {
                    line,
                    msg: format!("duplicate monomial {key:?}"),
                });
            }
            tri.insert(key, c);
        }
    }
    Ok(if arity == 2 {
        PolyFile::Bi { n, poly: bi }
    } else {
        PolyFile::Tri { n, poly: tri }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi1_renders_exactly() {
        // X - Z
        let mut poly = TriPolynomial::zero();
        poly.insert((1, 0, 0), Rat::one());
        poly.insert((0, 0, 1), -Rat::one());
        let text = render_poly(&PolyFile::Tri { n: 1, poly });
        assert_eq!(text, "tripoly N=1\n1 0 0 : 1\n0 0 1 : -1\n");
    }

    #[test]
    fn roundtrip_with_fractions() {
        let mut poly = TriPolynomial::zero();
        poly.insert((3, 0, 1), Rat::new(22, 7));
        poly.insert((0, 2, 0), Rat::from_int(-9));
        let file = PolyFile::Tri { n: 4, poly };
        let parsed = parse_poly(&render_poly(&file)).unwrap();
        assert_eq!(parsed, file);
    }

    #[test]
    fn malformed_line_reports_position() {
        let text = "tripoly N=2\n3 0 0 : 1\n1 0 : 3\n";
        match parse_poly(text) {
            Err(ModPolyError::ParseError { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn bipoly_roundtrip() {
        let mut poly = BiPolynomial::zero();
        poly.insert((1, 0), Rat::one());
        poly.insert((0, 1), -Rat::one());
        let file = PolyFile::Bi { n: 1, poly };
        let text = render_poly(&file);
        assert_eq!(text, "bipoly N=1\n1 0 : 1\n0 1 : -1\n");
        assert_eq!(parse_poly(&text).unwrap(), file);
    }
}
