//! Text and JSON file formats.
//!
//! Matrix files:
//!
//! ```text
//! # comment
//! spins 1
//! 0 1
//! 1 0.5-0.5i
//! ```
//!
//! Sequence files, one pulse per line in time order:
//!
//! ```text
//! spins 2
//! # phase 0.785398163397448
//! R 2 y -1.5707963267949
//! J 1 2 -1.5707963267949
//! ```

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::generator::GeneratorExpansion;
use crate::linalg::ComplexMatrix;
use crate::pauli::PauliString;
use crate::reduce::{PulseOp, PulseSequence, RotationAxis};
use crate::MAX_SPINS;

/// Significant digits for angles in sequence files.
pub const ANGLE_DIGITS: usize = 15;

/// Significant digits for expansion coefficients.
pub const COEFF_DIGITS: usize = 12;

/// Decimal rendering with `digits` significant digits, trailing zeros
/// trimmed; scientific notation outside `1e-5 ..= 10^digits`.
pub fn format_sig(x: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn format_real(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else if x.abs() < 1e-5 || x.abs() >= 1e16 {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// `a`, `bi` or `a+bi`; exact round trip through [`parse_complex`].
pub fn format_complex(z: Complex64) -> String {
    match (z.re == 0.0, z.im == 0.0) {
        (_, true) => format_real(z.re),
        (true, false) => format!("{}i", format_real(z.im)),
        (false, false) => {
            let sign = if z.im < 0.0 { '-' } else { '+' };
            format!("{}{}{}i", format_real(z.re), sign, format_real(z.im.abs()))
        }
    }
}

pub fn parse_complex(tok: &str) -> Option<Complex64> {
    let tok = tok.trim();
    let Some(body) = tok.strip_suffix('i') else {
        return tok.parse().ok().map(|re| Complex64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |s: &str| -> Option<f64> {
        match s {
            "" | "+" => Some(1.0),
            "-" => Some(-1.0),
            _ => s.parse().ok(),
        }
    };
    match split {
        Some(k) => Some(Complex64::new(body[..k].parse().ok()?, imag(&body[k..])?)),
        None => Some(Complex64::new(0.0, imag(body)?)),
    }
}

/// Non-empty, non-comment lines with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_spins_header(line: usize, text: &str) -> Result<usize> {
    let mut words = text.split_whitespace();
    match (words.next(), words.next(), words.next()) {
        (Some("spins"), Some(n), None) => {
            let n: usize = n
                .parse()
                .map_err(|_| Error::parse(line, format!("bad spin count '{n}'")))?;
            if n == 0 || n > MAX_SPINS {
                return Err(Error::SpinCount(n, MAX_SPINS));
            }
            Ok(n)
        }
        _ => Err(Error::parse(line, "expected 'spins N'")),
    }
}

pub fn write_matrix(m: &ComplexMatrix) -> String {
    let spins = m.spins().expect("matrix dimension must be a power of two");
    let mut out = format!("spins {spins}\n");
    for r in 0..m.dim() {
        let row: Vec<String> = m.row(r).iter().map(|&z| format_complex(z)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty matrix file"))?;
    let spins = parse_spins_header(hline, header)?;
    let dim = 1usize << spins;
    let mut rows = Vec::with_capacity(dim);
    for (line, l) in lines {
        if rows.len() == dim {
            return Err(Error::parse(line, format!("more than {dim} rows")));
        }
        let row = l
            .split_whitespace()
            .map(|t| {
                parse_complex(t)
                    .ok_or_else(|| Error::parse(line, format!("bad complex entry '{t}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != dim {
            return Err(Error::parse(
                line,
                format!("expected {dim} entries, got {}", row.len()),
            ));
        }
        rows.push(row);
    }
    if rows.len() != dim {
        return Err(Error::parse(
            0,
            format!("expected {dim} rows, got {}", rows.len()),
        ));
    }
    ComplexMatrix::from_rows(&rows)
}

pub fn write_sequence(seq: &PulseSequence) -> String {
    let mut out = format!("spins {}\n", seq.spins);
    if seq.global_phase != 0.0 {
        out.push_str(&format!(
            "# phase {}\n",
            format_sig(seq.global_phase, ANGLE_DIGITS)
        ));
    }
    for op in &seq.ops {
        match *op {
            PulseOp::Rotation { spin, axis, angle } => out.push_str(&format!(
                "R {spin} {} {}\n",
                axis.symbol(),
                format_sig(angle, ANGLE_DIGITS)
            )),
            PulseOp::Coupling { i, j, angle } => {
                out.push_str(&format!("J {i} {j} {}\n", format_sig(angle, ANGLE_DIGITS)))
            }
        }
    }
    out
}

pub fn parse_sequence(text: &str) -> Result<PulseSequence> {
    let mut global_phase = 0.0;
    for (k, l) in text.lines().enumerate() {
        if let Some(rest) = l.trim().strip_prefix('#') {
            let mut words = rest.split_whitespace();
            if let (Some("phase"), Some(v)) = (words.next(), words.next()) {
                global_phase = v
                    .parse()
                    .map_err(|_| Error::parse(k + 1, format!("bad phase '{v}'")))?;
            }
        }
    }

    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty sequence file"))?;
    let spins = parse_spins_header(hline, header)?;
    let mut ops = Vec::new();
    for (line, l) in lines {
        let words: Vec<&str> = l.split_whitespace().collect();
        let index = |s: &str| -> Result<usize> {
            s.parse()
                .map_err(|_| Error::parse(line, format!("bad spin index '{s}'")))
        };
        let angle = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .ok()
                .filter(|a| a.is_finite())
                .ok_or_else(|| Error::parse(line, format!("bad angle '{s}'")))
        };
        let op = match words.as_slice() {
            ["R", spin, axis, a] => {
                let axis = match *axis {
                    "x" => RotationAxis::X,
                    "y" => RotationAxis::Y,
                    "z" => RotationAxis::Z,
                    other => return Err(Error::parse(line, format!("bad axis '{other}'"))),
                };
                PulseOp::Rotation {
                    spin: index(spin)?,
                    axis,
                    angle: angle(a)?,
                }
            }
            ["J", i, j, a] => {
                let (i, j) = (index(i)?, index(j)?);
                if i == j {
                    return Err(Error::parse(line, "coupling needs two distinct spins"));
                }
                PulseOp::j(i, j, angle(a)?)
            }
            _ => {
                return Err(Error::parse(
                    line,
                    format!("expected 'R spin axis angle' or 'J i j angle', got '{l}'"),
                ))
            }
        };
        op.validate(spins)
            .map_err(|e| Error::parse(line, e.to_string()))?;
        ops.push(op);
    }
    Ok(PulseSequence {
        spins,
        ops,
        global_phase,
    })
}

pub fn sequence_to_json(seq: &PulseSequence) -> String {
    serde_json::to_string_pretty(seq).expect("sequence serializes")
}

pub fn sequence_from_json(text: &str) -> Result<PulseSequence> {
    let seq: PulseSequence =
        serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
    seq.validate()?;
    Ok(seq)
}

/// Reads either format, choosing JSON when the text starts with `{`.
pub fn parse_sequence_any(text: &str) -> Result<PulseSequence> {
    if text.trim_start().starts_with('{') {
        sequence_from_json(text)
    } else {
        parse_sequence(text)
    }
}

/// One line per term, `<string> <coefficient>`, in basis order. The
/// identity line carries the coefficient of the unit matrix `E`.
pub fn render_expansion(exp: &GeneratorExpansion) -> String {
    let mut out = String::new();
    if exp.identity_coeff != 0.0 {
        out.push_str(&format!(
            "{} {}\n",
            PauliString::identity(exp.spins),
            format_sig(exp.identity_coeff, COEFF_DIGITS)
        ));
    }
    for (s, b) in exp.terms() {
        out.push_str(&format!("{s} {}\n", format_sig(b, COEFF_DIGITS)));
    }
    out
}

/// Inverse of [`render_expansion`].
pub fn parse_expansion(text: &str) -> Result<GeneratorExpansion> {
    let mut out: Option<GeneratorExpansion> = None;
    for (line, l) in content_lines(text) {
        let (s, b) = l
            .split_once(char::is_whitespace)
            .ok_or_else(|| Error::parse(line, "expected '<string> <coefficient>'"))?;
        let s: PauliString = s
            .parse()
            .map_err(|_| Error::parse(line, format!("bad pauli string '{s}'")))?;
        let b: f64 = b
            .trim()
            .parse()
            .map_err(|_| Error::parse(line, format!("bad coefficient '{b}'")))?;
        let exp = out.get_or_insert_with(|| GeneratorExpansion::new(s.spins()));
        if s.spins() != exp.spins {
            return Err(Error::parse(line, "inconsistent spin count"));
        }
        if s.is_identity() {
            exp.identity_coeff += b;
        } else {
            exp.add(s, b);
        }
    }
    out.ok_or_else(|| Error::parse(0, "empty expansion"))
}
