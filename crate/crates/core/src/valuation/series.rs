use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use super::field::{Fq, ResidueField};
use super::ExtRational;
use crate::error::{Error, Result};

/// Default number of coefficients produced by [`LaurentSeries::inv`] for an
/// exact input.
pub const DEFAULT_WINDOW: i64 = 512;

/// A truncated Laurent series over `F_q` in the uniformizer `pi`.
///
/// Coefficients of exponent `< prec` are known; everything from `prec` on is
/// unknown. `prec == None` means the series is an exact Laurent polynomial.
/// Stored coefficients are dense from the first to the last nonzero term.
#[derive(Clone)]
pub struct LaurentSeries {
    field: &'static ResidueField,
    start: i64,
    coeffs: Vec<Fq>,
    prec: Option<i64>,
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl LaurentSeries {
    fn build(field: &'static ResidueField, start: i64, coeffs: Vec<Fq>, prec: Option<i64>) -> Self {
        let mut s = LaurentSeries { field, start, coeffs, prec };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        if let Some(p) = self.prec {
            let keep = (p - self.start).clamp(0, self.coeffs.len() as i64) as usize;
            self.coeffs.truncate(keep);
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(self.coeffs.len());
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.start += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.start = 0;
        }
    }

    /// The exact zero.
    pub fn zero(field: &'static ResidueField) -> Self {
        LaurentSeries { field, start: 0, coeffs: vec![], prec: None }
    }

    /// `O(pi^prec)`: a value known only to vanish below `prec`.
    pub fn imprecise_zero(field: &'static ResidueField, prec: i64) -> Self {
        LaurentSeries { field, start: 0, coeffs: vec![], prec: Some(prec) }
    }

    pub fn one(field: &'static ResidueField) -> Self {
        Self::constant(field, Fq::ONE)
    }

    pub fn constant(field: &'static ResidueField, c: Fq) -> Self {
        Self::monomial(field, c, 0)
    }

    /// `c * pi^k`, exact.
    pub fn monomial(field: &'static ResidueField, c: Fq, k: i64) -> Self {
        Self::build(field, k, vec![c], None)
    }

    /// `pi^k`, exact.
    pub fn pi_pow(field: &'static ResidueField, k: i64) -> Self {
        Self::monomial(field, Fq::ONE, k)
    }

    /// Sum of `(exponent, coefficient)` terms; terms at or above `prec` are
    /// discarded and repeated exponents are added.
    pub fn from_terms(field: &'static ResidueField, terms: &[(i64, Fq)], prec: Option<i64>) -> Self {
        if terms.is_empty() {
            return Self { field, start: 0, coeffs: vec![], prec };
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![Fq::ZERO; (hi - lo + 1) as usize];
        for &(k, c) in terms {
            let slot = &mut coeffs[(k - lo) as usize];
            *slot = field.add(*slot, c);
        }
        Self::build(field, lo, coeffs, prec)
    }

    /// Dense constructor: `coeffs[i]` is the coefficient of `pi^(start + i)`.
    pub fn from_dense(field: &'static ResidueField, start: i64, coeffs: Vec<Fq>, prec: Option<i64>) -> Self {
        Self::build(field, start, coeffs, prec)
    }

    pub fn field(&self) -> &'static ResidueField {
        self.field
    }

    pub fn prec(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// No known nonzero coefficient (exactly zero or an imprecise zero).
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.prec.is_none()
    }

    pub fn coeff(&self, k: i64) -> Fq {
        let i = k - self.start;
        if i < 0 || i >= self.coeffs.len() as i64 {
            Fq::ZERO
        } else {
            self.coeffs[i as usize]
        }
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Fq)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, &c)| (self.start + i as i64, c))
    }

    /// Exponent and coefficient of the lowest nonzero term.
    pub fn lead(&self) -> Option<(i64, Fq)> {
        self.coeffs.first().map(|&c| (self.start, c))
    }

    /// Highest exponent carrying a nonzero coefficient.
    pub fn top_exponent(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then(|| self.start + self.coeffs.len() as i64 - 1)
    }

    /// The `pi`-adic valuation. Fails on an imprecise zero, whose valuation
    /// is not determined.
    pub fn valuation(&self) -> Result<ExtRational> {
        match (self.lead(), self.prec) {
            (Some((k, _)), _) => Ok(ExtRational::from(k)),
            (None, None) => Ok(ExtRational::Infinity),
            (None, Some(p)) => Err(Error::precision(format!("series is O(pi^{p}); valuation unknown"))),
        }
    }

    /// Integer valuation of a series with a known nonzero term.
    pub fn val(&self) -> Result<i64> {
        match self.lead() {
            Some((k, _)) => Ok(k),
            None if self.prec.is_none() => Err(Error::invalid("valuation of exact zero is infinite")),
            None => Err(Error::precision(format!("series is O(pi^{}); valuation unknown", self.prec.unwrap()))),
        }
    }

    /// Lower bound for the valuation: the lead exponent, the precision for an
    /// imprecise zero, `None` for exact zero.
    fn val_floor(&self) -> Option<i64> {
        self.lead().map(|l| l.0).or(self.prec)
    }

    /// Drops everything at or above `prec`.
    pub fn truncate(&self, prec: i64) -> Self {
        Self::build(self.field, self.start, self.coeffs.clone(), min_prec(self.prec, Some(prec)))
    }

    /// Multiplication that refuses imprecise-zero operands, whose products
    /// cannot certify a valuation.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        for s in [self, other] {
            if s.is_zero() && !s.is_exact() {
                return Err(Error::precision("multiplication by an imprecise zero"));
            }
        }
        Ok(self * other)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        assert_eq!(self.field, other.field, "series over different fields");
        let f = self.field;
        let prec = match (self.val_floor(), other.val_floor()) {
            (None, _) | (_, None) => return Self::zero(f),
            (Some(va), Some(vb)) => min_prec(self.prec.map(|p| p + vb), other.prec.map(|p| p + va)),
        };
        if self.is_zero() || other.is_zero() {
            return Self::imprecise_zero(f, prec.expect("imprecise operand gives finite precision"));
        }
        let start = self.start + other.start;
        let mut len = self.coeffs.len() + other.coeffs.len() - 1;
        if let Some(p) = prec {
            len = len.min((p - start).max(0) as usize);
        }
        let mut out = vec![Fq::ZERO; len];
        f.convolve_into(&mut out, &self.coeffs, &other.coeffs);
        Self::build(f, start, out, prec)
    }

    fn add_impl(&self, other: &Self, negate_other: bool) -> Self {
        assert_eq!(self.field, other.field, "series over different fields");
        let f = self.field;
        let prec = min_prec(self.prec, other.prec);
        if other.is_zero() {
            return self.truncate_opt(prec);
        }
        if self.is_zero() {
            let o = if negate_other { -other } else { other.clone() };
            return o.truncate_opt(prec);
        }
        let lo = self.start.min(other.start);
        let mut hi = (self.start + self.coeffs.len() as i64).max(other.start + other.coeffs.len() as i64);
        if let Some(p) = prec {
            hi = hi.min(p);
        }
        if hi <= lo {
            return Self { field: f, start: 0, coeffs: vec![], prec };
        }
        let mut out = vec![Fq::ZERO; (hi - lo) as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let k = (self.start - lo) as usize + i;
            if k < out.len() {
                out[k] = c;
            }
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            let k = (other.start - lo) as usize + i;
            if k < out.len() {
                out[k] = if negate_other { f.sub(out[k], c) } else { f.add(out[k], c) };
            }
        }
        Self::build(f, lo, out, prec)
    }

    fn truncate_opt(&self, prec: Option<i64>) -> Self {
        match prec {
            Some(p) => self.truncate(p),
            None => self.clone(),
        }
    }

    /// `c * self`.
    pub fn scale(&self, c: Fq) -> Self {
        if c.is_zero() {
            return Self::zero(self.field);
        }
        let coeffs = self.coeffs.iter().map(|&x| self.field.mul(x, c)).collect();
        Self { field: self.field, start: self.start, coeffs, prec: self.prec }
    }

    /// `pi^k * self`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            field: self.field,
            start: if self.coeffs.is_empty() { 0 } else { self.start + k },
            coeffs: self.coeffs.clone(),
            prec: self.prec.map(|p| p + k),
        }
    }

    /// Multiplicative inverse with the default window.
    pub fn inv(&self) -> Result<Self> {
        self.inv_with_window(DEFAULT_WINDOW)
    }

    /// Multiplicative inverse, producing at most `window` coefficients past
    /// the leading term. The result's precision is limited by both `window`
    /// and the relative precision of `self`.
    pub fn inv_with_window(&self, window: i64) -> Result<Self> {
        let f = self.field;
        let Some((v, c)) = self.lead() else {
            return Err(match self.prec {
                None => Error::invalid("inverse of zero"),
                Some(p) => Error::precision(format!("inverse of O(pi^{p})")),
            });
        };
        let rel = match self.prec {
            Some(p) => (p - v).min(window),
            None => window,
        }
        .max(1) as usize;
        let c_inv = f.inv(c).expect("lead coefficient is nonzero");
        let b = &self.coeffs;
        let mut s = vec![Fq::ZERO; rel];
        s[0] = c_inv;
        for k in 1..rel {
            let mut acc = Fq::ZERO;
            for i in 1..=k.min(b.len() - 1) {
                acc = f.add(acc, f.mul(b[i], s[k - i]));
            }
            s[k] = f.neg(f.mul(c_inv, acc));
        }
        Ok(Self::build(f, -v, s, Some(-v + rel as i64)))
    }

    /// The Frobenius `x -> x^p`, applied coefficientwise with exponents
    /// multiplied by `p`.
    pub fn frobenius(&self) -> Self {
        let p = self.field.p() as i64;
        let f = self.field;
        let mut coeffs = vec![Fq::ZERO; if self.coeffs.is_empty() { 0 } else { (self.coeffs.len() - 1) * p as usize + 1 }];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * p as usize] = f.frob(c);
        }
        Self::build(f, self.start * p, coeffs, self.prec.map(|x| x * p))
    }

    /// `k`-fold Frobenius, `x -> x^(p^k)`.
    pub fn frobenius_pow(&self, k: u32) -> Self {
        (0..k).fold(self.clone(), |acc, _| acc.frobenius())
    }

    /// `self^e` by repeated squaring.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }
}

impl PartialEq for LaurentSeries {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.start == other.start && self.coeffs == other.coeffs && self.prec == other.prec
    }
}

impl Eq for LaurentSeries {}

impl std::hash::Hash for LaurentSeries {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.p().hash(state);
        self.field.modulus().hash(state);
        self.start.hash(state);
        self.coeffs.hash(state);
        self.prec.hash(state);
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::format_series(self))
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::format_series(self))
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        let coeffs = self.coeffs.iter().map(|&c| self.field.neg(c)).collect();
        LaurentSeries { field: self.field, start: self.start, coeffs, prec: self.prec }
    }
}

impl Neg for LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        -&self
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&LaurentSeries> for &LaurentSeries {
            type Output = LaurentSeries;
            fn $m(self, rhs: &LaurentSeries) -> LaurentSeries {
                $body(self, rhs)
            }
        }
        impl $tr<LaurentSeries> for LaurentSeries {
            type Output = LaurentSeries;
            fn $m(self, rhs: LaurentSeries) -> LaurentSeries {
                $body(&self, &rhs)
            }
        }
        impl $tr<&LaurentSeries> for LaurentSeries {
            type Output = LaurentSeries;
            fn $m(self, rhs: &LaurentSeries) -> LaurentSeries {
                $body(&self, rhs)
            }
        }
        impl $tr<LaurentSeries> for &LaurentSeries {
            type Output = LaurentSeries;
            fn $m(self, rhs: LaurentSeries) -> LaurentSeries {
                $body(self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a: &LaurentSeries, b: &LaurentSeries| a.add_impl(b, false));
binop!(Sub, sub, |a: &LaurentSeries, b: &LaurentSeries| a.add_impl(b, true));
binop!(Mul, mul, |a: &LaurentSeries, b: &LaurentSeries| a.mul_impl(b));

impl AddAssign<&LaurentSeries> for LaurentSeries {
    fn add_assign(&mut self, rhs: &LaurentSeries) {
        *self = self.add_impl(rhs, false);
    }
}

impl SubAssign<&LaurentSeries> for LaurentSeries {
    fn sub_assign(&mut self, rhs: &LaurentSeries) {
        *self = self.add_impl(rhs, true);
    }
}
