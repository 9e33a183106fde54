//! Text form of field elements and series: `g^3*pi^-2 + 2 + pi + O(pi^5)`.
//!
//! Field elements print as integers when they lie in `F_p` and as powers
//! `g^j` of the field's generator otherwise.

use super::field::{Fq, ResidueField};
use super::series::LaurentSeries;
use crate::error::{Error, Result};

impl ResidueField {
    pub fn format_elem(&self, a: Fq) -> String {
        if self.in_prime_field(a) {
            return a.0.to_string();
        }
        match self.log(a).expect("nonzero") {
            1 => "g".to_string(),
            j => format!("g^{j}"),
        }
    }

    pub fn parse_elem(&self, s: &str) -> Result<Fq> {
        let s = s.trim();
        let bad = || Error::invalid(format!("bad field element {s:?}"));
        if let Some(rest) = s.strip_prefix('g') {
            if rest.is_empty() {
                return Ok(self.generator());
            }
            let j: i64 = rest.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())?;
            return Ok(self.gen_pow(j));
        }
        if let Some(rest) = s.strip_prefix("-g") {
            let e = self.parse_elem(&format!("g{rest}"))?;
            return Ok(self.neg(e));
        }
        s.parse::<i64>().map(|n| self.from_int(n)).map_err(|_| bad())
    }
}

pub fn format_series(s: &LaurentSeries) -> String {
    let f = s.field();
    let mut parts: Vec<String> = s
        .terms()
        .map(|(k, c)| {
            let coef = f.format_elem(c);
            let pi = match k {
                1 => "pi".to_string(),
                _ => format!("pi^{k}"),
            };
            match (k, c == Fq::ONE) {
                (0, _) => coef,
                (_, true) => pi,
                _ => format!("{coef}*{pi}"),
            }
        })
        .collect();
    if let Some(p) = s.prec() {
        parts.push(format!("O(pi^{p})"));
    }
    if parts.is_empty() {
        return "0".to_string();
    }
    parts.join(" + ")
}

/// Parses the output of [`format_series`]. Terms may also be separated by
/// `-`, and repeated exponents are summed.
pub fn parse_series(field: &'static ResidueField, text: &str) -> Result<LaurentSeries> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::invalid("empty series"));
    }
    let bytes = s.as_bytes();
    let mut pieces: Vec<(bool, &str)> = vec![];
    let mut begin = 0;
    let mut negative = false;
    for i in 0..=bytes.len() {
        let at_sep = i == bytes.len() || ((bytes[i] == b'+' || bytes[i] == b'-') && i > 0 && bytes[i - 1] != b'^' && bytes[i - 1] != b'(' && bytes[i - 1] != b'*');
        if i == 0 && i < bytes.len() && (bytes[0] == b'-' || bytes[0] == b'+') {
            negative = bytes[0] == b'-';
            begin = 1;
            continue;
        }
        if at_sep {
            pieces.push((negative, &s[begin..i]));
            if i < bytes.len() {
                negative = bytes[i] == b'-';
                begin = i + 1;
            }
        }
    }

    let mut terms = vec![];
    let mut prec = None;
    for (neg, piece) in pieces {
        let bad = || Error::invalid(format!("bad series term {piece:?} in {text:?}"));
        if piece.is_empty() {
            return Err(bad());
        }
        if let Some(inner) = piece.strip_prefix("O(").and_then(|r| r.strip_suffix(')')) {
            let k = parse_pi(inner).ok_or_else(bad)?;
            if prec.is_some() {
                return Err(bad());
            }
            prec = Some(k);
            continue;
        }
        let (coef, k) = if let Some(k) = parse_pi(piece) {
            (Fq::ONE, k)
        } else if let Some((c, pi)) = piece.split_once('*') {
            (field.parse_elem(c)?, parse_pi(pi).ok_or_else(bad)?)
        } else {
            (field.parse_elem(piece)?, 0)
        };
        terms.push((k, if neg { field.neg(coef) } else { coef }));
    }
    if s == "0" {
        return Ok(LaurentSeries::zero(field));
    }
    Ok(LaurentSeries::from_terms(field, &terms, prec))
}

fn parse_pi(s: &str) -> Option<i64> {
    let rest = s.strip_prefix("pi")?;
    if rest.is_empty() {
        return Some(1);
    }
    rest.strip_prefix('^')?.parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_notation() {
        let f = ResidueField::new(3, 2).unwrap();
        assert_eq!(f.format_elem(Fq(2)), "2");
        assert_eq!(f.format_elem(f.generator()), "g");
        assert_eq!(f.format_elem(f.gen_pow(3)), "g^3");
        for a in f.elements() {
            assert_eq!(f.parse_elem(&f.format_elem(a)).unwrap(), a);
        }
        assert_eq!(f.parse_elem("-1").unwrap(), Fq(2));
        assert_eq!(f.parse_elem("g^-1").unwrap(), f.gen_pow(7));
        assert!(f.parse_elem("h").is_err());
    }

    #[test]
    fn series_round_trip() {
        let f = ResidueField::new(3, 2).unwrap();
        for s in ["0", "pi^-3", "g*pi^-3 + 2*pi^-1 + g^5 + pi + O(pi^7)", "O(pi^4)", "1"] {
            let x = parse_series(f, s).unwrap();
            assert_eq!(format_series(&x), s);
        }
    }

    #[test]
    fn series_with_minus_signs() {
        let f = ResidueField::new(3, 2).unwrap();
        let x = parse_series(f, "pi^-3 - pi^-1").unwrap();
        assert_eq!(format_series(&x), "pi^-3 + 2*pi^-1");
        let y = parse_series(f, "-g*pi^-2").unwrap();
        assert_eq!(y.lead(), Some((-2, f.neg(f.generator()))));
        assert!(parse_series(f, "pi^x").is_err());
        assert!(parse_series(f, "1 + + 2").is_err());
    }
}
