//! Text formats for functions.
//!
//! Truth table: header `n m`, then `2^n` hexadecimal outputs (whitespace
//! separated, any line layout) for inputs `0..2^n`.
//!
//! Univariate: header `n modulus_hex`, then sparse `j:coeff_hex` terms.
//! Lines starting with `#` are ignored in both.

use std::fmt::Write as _;

use crate::boolfn::{UnivariateForm, VectorialFunction};
use crate::error::{Error, Result};
use crate::field::{format_modulus_hex, parse_modulus_hex, FieldCtx, FieldElement};

fn tokens(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim_start().starts_with('#'))
        .flat_map(|(i, l)| l.split_whitespace().map(move |t| (i + 1, t)))
}

fn parse_u32(tok: &str, line: usize, what: &str) -> Result<u32> {
    tok.parse().map_err(|_| Error::Parse(format!("line {line}: bad {what} {tok:?}")))
}

fn parse_hex(tok: &str, line: usize) -> Result<u32> {
    let t = tok.trim_start_matches("0x").trim_start_matches("0X");
    u32::from_str_radix(t, 16).map_err(|_| Error::Parse(format!("line {line}: bad hex value {tok:?}")))
}

pub fn parse_truth_table(text: &str) -> Result<VectorialFunction> {
    let mut it = tokens(text);
    let (l, t) = it.next().ok_or_else(|| Error::Parse("empty truth table".into()))?;
    let n = parse_u32(t, l, "n")?;
    let (l, t) = it.next().ok_or_else(|| Error::Parse(format!("line {l}: header needs \"n m\"")))?;
    let m = parse_u32(t, l, "m")?;
    if n > 24 {
        return Err(Error::Parse(format!("n = {n} is too large for a truth table")));
    }
    let values = it.map(|(l, t)| parse_hex(t, l)).collect::<Result<Vec<u32>>>()?;
    if values.len() != 1 << n {
        return Err(Error::Parse(format!("expected {} values, found {}", 1u64 << n, values.len())));
    }
    VectorialFunction::new(n, m, values).map_err(|e| Error::Parse(e.to_string()))
}

pub fn write_truth_table(f: &VectorialFunction) -> String {
    let mut s = format!("{} {}\n", f.n(), f.m());
    for row in f.table().chunks(16) {
        let line: Vec<String> = row.iter().map(|v| format!("{v:x}")).collect();
        let _ = writeln!(s, "{}", line.join(" "));
    }
    s
}

/// Parses a univariate polynomial; `modulus` overrides the header modulus
/// when given.
pub fn parse_univariate(text: &str, modulus: Option<u64>) -> Result<UnivariateForm> {
    let mut it = tokens(text);
    let (l, t) = it.next().ok_or_else(|| Error::Parse("empty polynomial file".into()))?;
    let n = parse_u32(t, l, "n")?;
    let (l, t) = it.next().ok_or_else(|| Error::Parse(format!("line {l}: header needs \"n modulus_hex\"")))?;
    let header_mod = parse_modulus_hex(t).map_err(|e| Error::Parse(format!("line {l}: {e}")))?;
    let ctx = FieldCtx::new(n, Some(modulus.unwrap_or(header_mod)))?;
    let mut coeffs = vec![FieldElement::ZERO; ctx.size() as usize];
    for (l, t) in it {
        let (j, c) = t.split_once(':').ok_or_else(|| Error::Parse(format!("line {l}: expected j:coeff, got {t:?}")))?;
        let j = parse_u32(j, l, "exponent")? as usize;
        let c = FieldElement(parse_hex(c, l)?);
        let slot = coeffs
            .get_mut(j)
            .ok_or_else(|| Error::Parse(format!("line {l}: exponent {j} exceeds 2^{n} - 1")))?;
        if !ctx.contains(c) {
            return Err(Error::Parse(format!("line {l}: coefficient {c:?} outside GF(2^{n})")));
        }
        *slot += c;
    }
    UnivariateForm::new(&ctx, coeffs)
}

pub fn write_univariate(u: &UnivariateForm) -> String {
    let mut s = format!("{} {}\n", u.ctx.n(), format_modulus_hex(u.ctx.modulus()));
    for (j, c) in u.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        let _ = writeln!(s, "{j}:{:x}", c.value());
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truth_table_round_trip() {
        let ctx = FieldCtx::new(5, None).unwrap();
        let f = VectorialFunction::inverse(&ctx);
        let text = write_truth_table(&f);
        assert_eq!(parse_truth_table(&text).unwrap(), f);
        let g = parse_truth_table("# comment\n2 1\n0 1\n1 0\n").unwrap();
        assert_eq!(g.table(), &[0, 1, 1, 0]);
    }

    #[test]
    fn truth_table_errors() {
        assert!(matches!(parse_truth_table(""), Err(Error::Parse(_))));
        assert!(matches!(parse_truth_table("2 1\n0 1 1"), Err(Error::Parse(_))));
        assert!(matches!(parse_truth_table("2 1\n0 1 1 2"), Err(Error::Parse(_))));
        assert!(matches!(parse_truth_table("2 1\n0 1 1 zz"), Err(Error::Parse(_))));
    }

    #[test]
    fn univariate_round_trip() {
        let ctx = FieldCtx::new(4, None).unwrap();
        let u = UnivariateForm::monomial(&ctx, 3, FieldElement(1)).unwrap();
        let text = write_univariate(&u);
        let back = parse_univariate(&text, None).unwrap();
        assert_eq!(back.to_table(), u.to_table());
        let p = parse_univariate("4 0x13\n3:1\n", None).unwrap();
        assert_eq!(p.to_table(), VectorialFunction::power(&ctx, 3));
        assert!(parse_univariate("4 0x13\n16:1\n", None).is_err());
        assert!(parse_univariate("4 0x13\n3\n", None).is_err());
        assert!(parse_univariate("4 0x15\n3:1\n", None).is_err());
    }
}
