//! The Artin-Schreier map `X^p - X`, the second Witt addition polynomial
//! `D(X, Y) = (X^p + Y^p - (X + Y)^p) / p`, and the conditions defining
//! reduced Artin-Schreier constants.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ramification::require_odd_prime;
use crate::valuation::{ExtRational, Fq, LaurentSeries, Rat, ResidueField};

/// A commutative ring of characteristic `p`, used to evaluate the
/// Artin-Schreier and Witt polynomials on series and on tower elements
/// alike.
pub trait CharPRing {
    type Elem: Clone;

    fn char_p(&self) -> u64;
    fn one(&self) -> Self::Elem;
    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `k * a` for an integer `k`, read mod `p`.
    fn scale_int(&self, a: &Self::Elem, k: i64) -> Self::Elem;

    fn pow(&self, a: &Self::Elem, e: u64) -> Self::Elem {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }
}

/// Laurent series over a fixed residue field, as a [`CharPRing`].
#[derive(Clone, Copy, Debug)]
pub struct SeriesRing(pub &'static ResidueField);

impl CharPRing for SeriesRing {
    type Elem = LaurentSeries;

    fn char_p(&self) -> u64 {
        self.0.p()
    }
    fn one(&self) -> LaurentSeries {
        LaurentSeries::one(self.0)
    }
    fn zero(&self) -> LaurentSeries {
        LaurentSeries::zero(self.0)
    }
    fn add(&self, a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
        a + b
    }
    fn sub(&self, a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
        a - b
    }
    fn mul(&self, a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
        a * b
    }
    fn scale_int(&self, a: &LaurentSeries, k: i64) -> LaurentSeries {
        a.scale(self.0.from_int(k))
    }
    fn pow(&self, a: &LaurentSeries, e: u64) -> LaurentSeries {
        a.pow(e)
    }
}

/// `x^p - x`.
pub fn wp<R: CharPRing>(ring: &R, x: &R::Elem) -> R::Elem {
    ring.sub(&ring.pow(x, ring.char_p()), x)
}

fn binomial(n: u64, k: u64) -> i128 {
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// Integer coefficients of `D`: entry `(i, c)` is the coefficient `c` of
/// `X^i Y^(p-i)`, for `1 <= i <= p - 1`. Each `c = -binom(p, i) / p`.
pub fn witt_d_coeffs(p: u64) -> Vec<(u32, i128)> {
    (1..p).map(|i| (i as u32, -binomial(p, i) / p as i128)).collect()
}

/// `D(x, y)` evaluated in a ring of characteristic `p`.
pub fn witt_d<R: CharPRing>(ring: &R, x: &R::Elem, y: &R::Elem) -> R::Elem {
    let p = ring.char_p();
    let mut xpow = vec![ring.one()];
    let mut ypow = vec![ring.one()];
    for i in 1..p as usize {
        xpow.push(ring.mul(&xpow[i - 1], x));
        ypow.push(ring.mul(&ypow[i - 1], y));
    }
    let mut acc = ring.zero();
    for (i, c) in witt_d_coeffs(p) {
        let term = ring.mul(&xpow[i as usize], &ypow[p as usize - i as usize]);
        acc = ring.add(&acc, &ring.scale_int(&term, (c % p as i128) as i64));
    }
    acc
}

/// Second coordinate of the Witt vector sum `(x0, x1) + (y0, y1)`.
pub fn witt_s1<R: CharPRing>(ring: &R, x0: &R::Elem, x1: &R::Elem, y0: &R::Elem, y1: &R::Elem) -> R::Elem {
    ring.add(&ring.add(x1, y1), &witt_d(ring, x0, y0))
}

/// One Artin-Schreier constant described by its valuation and leading
/// residue coefficient, e.g. `{"val": -1, "lead": "g"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AsConstant {
    pub val: i64,
    pub lead: String,
}

/// Constants `a_1, .., a_k` of a field with absolute ramification index
/// `e0` (`inf` in characteristic `p`) and residue field `F_{p^d}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AsConstantSpec {
    pub p: u64,
    pub d: u32,
    pub e0: ExtRational,
    pub constants: Vec<AsConstant>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Fails,
    Vacuous,
}

impl Status {
    fn from_bool(b: bool) -> Self {
        if b {
            Status::Holds
        } else {
            Status::Fails
        }
    }

    /// Holds or vacuous.
    pub fn ok(self) -> bool {
        self != Status::Fails
    }
}

/// Outcome of the four conditions on `a_1, .., a_k`:
///
/// * `ordered`: `-p e0 / (p - 1) < v(a_k) <= .. <= v(a_1) < 0`, with
///   `lower_bound` reporting the first inequality on its own;
/// * `prime_to_p`: `p` divides no `v(a_i)`;
/// * `independent_leads`: within each run of equal valuations the leading
///   coefficients are `F_p`-linearly independent;
/// * `cross_term`: `v(p^p a_k^(p-1) a_(k-1)) > 0`.
///
/// With `e0 = inf` the lower bound and the cross term are vacuous.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AsReport {
    pub ordered: Status,
    pub lower_bound: Status,
    pub prime_to_p: Status,
    pub independent_leads: Status,
    pub cross_term: Status,
    pub notes: Vec<String>,
}

impl AsReport {
    pub fn all_hold(&self) -> bool {
        [self.ordered, self.lower_bound, self.prime_to_p, self.independent_leads, self.cross_term].iter().all(|s| s.ok())
    }
}

/// Checks whether constants with the given valuations and leading
/// coefficients (in `field`) are reduced Artin-Schreier constants.
pub fn validate_reduced_as_with(
    p: u64,
    e0: ExtRational,
    field: &ResidueField,
    vals: &[i64],
    leads: &[Fq],
) -> Result<AsReport> {
    require_odd_prime(p)?;
    if field.p() != p {
        return Err(Error::invalid("residue field characteristic differs from p"));
    }
    if vals.is_empty() || vals.len() != leads.len() {
        return Err(Error::invalid("need at least one constant and one lead per constant"));
    }
    if leads.iter().any(|c| c.is_zero()) {
        return Err(Error::invalid("leading coefficients must be nonzero"));
    }
    let k = vals.len();
    let mut notes = vec![];

    let ordered = vals.windows(2).all(|w| w[1] <= w[0]) && vals[0] < 0;
    if !ordered {
        notes.push("valuations must satisfy v(a_k) <= .. <= v(a_1) < 0".to_string());
    }
    let i_lower = match e0 {
        ExtRational::Infinity => Status::Vacuous,
        ExtRational::Finite(e) => {
            let bound = -Rat::from_integer(p as i128) * e / Rat::from_integer(p as i128 - 1);
            let ok = bound < Rat::from_integer(vals[k - 1] as i128);
            if !ok {
                notes.push(format!("v(a_k) = {} is not above -p e0/(p-1) = {}", vals[k - 1], bound));
            }
            Status::from_bool(ok)
        }
    };
    let i = Status::from_bool(ordered && i_lower.ok());

    let divisible: Vec<i64> = vals.iter().copied().filter(|v| v.rem_euclid(p as i64) == 0).collect();
    if !divisible.is_empty() {
        notes.push(format!("p divides valuations  {divisible:?}"));
    }
    let ii = Status::from_bool(divisible.is_empty());

    let mut iii_ok = true;
    let mut start = 0;
    while start < k {
        let mut end = start;
        while end + 1 < k && vals[end + 1] == vals[start] {
            end += 1;
        }
        let run = &leads[start..=end];
        if field.rank_over_prime_field(run) != run.len() {
            iii_ok = false;
            notes.push(format!("leads of a_{}..a_{} are F_p-dependent", start + 1, end + 1));
        }
        start = end + 1;
    }
    let iii = Status::from_bool(iii_ok);

    let iv = match e0 {
        _ if k == 1 => Status::Vacuous,
        ExtRational::Infinity => Status::Vacuous,
        ExtRational::Finite(e) => {
            let lhs = Rat::from_integer(p as i128) * e
                + Rat::from_integer((p as i128 - 1) * vals[k - 1] as i128 + vals[k - 2] as i128);
            let ok = lhs > Rat::from_integer(0);
            if !ok {
                notes.push(format!("v(p^p a_k^(p-1) a_(k-1)) = {lhs} is not positive"));
            }
            Status::from_bool(ok)
        }
    };
    Ok(AsReport {
        ordered: i,
        lower_bound: i_lower,
        prime_to_p: ii,
        independent_leads: iii,
        cross_term: iv,
        notes,
    })
}

/// [`validate_reduced_as_with`] on a parsed [`AsConstantSpec`], using the
/// default modulus for `F_{p^d}`.
pub fn validate_reduced_as(spec: &AsConstantSpec) -> Result<AsReport> {
    let field = ResidueField::new(spec.p, spec.d)?;
    let vals: Vec<i64> = spec.constants.iter().map(|c| c.val).collect();
    let leads = spec
        .constants
        .iter()
        .map(|c| field.parse_elem(&c.lead))
        .collect::<Result<Vec<_>>>()?;
    validate_reduced_as_with(spec.p, spec.e0, field, &vals, &leads)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d_coefficients() {
        assert_eq!(witt_d_coeffs(3), vec![(1, -1), (2, -1)]);
        let c5 = witt_d_coeffs(5);
        assert_eq!(c5[1], (2, -2));
        assert_eq!(c5.iter().find(|c| c.0 == 2).unwrap().1.rem_euclid(5), 3);
    }

    #[test]
    fn wp_on_series() {
        let f = ResidueField::new(3, 2).unwrap();
        let r = SeriesRing(f);
        assert!(wp(&r, &r.one()).is_exact_zero());
        let x = LaurentSeries::pi_pow(f, -1);
        assert_eq!(wp(&r, &x), LaurentSeries::pi_pow(f, -3) - LaurentSeries::pi_pow(f, -1));
    }

    #[test]
    fn d_vanishes_when_one_argument_is_zero() {
        let f = ResidueField::new(5, 1).unwrap();
        let r = SeriesRing(f);
        let x = LaurentSeries::from_terms(f, &[(-2, Fq(3)), (1, Fq(1))], None);
        assert!(witt_d(&r, &x, &r.zero()).is_exact_zero());
        assert!(witt_d(&r, &r.zero(), &x).is_exact_zero());
    }

    #[test]
    fn d_for_p3_is_minus_x2y_minus_xy2() {
        let f = ResidueField::new(3, 2).unwrap();
        let r = SeriesRing(f);
        let x = LaurentSeries::from_terms(f, &[(-1, Fq(4)), (2, Fq(1))], None);
        let y = LaurentSeries::from_terms(f, &[(0, Fq(7)), (3, Fq(2))], None);
        let expected = -(&(&x * &x) * &y) - &(&x * &(&y * &y));
        assert_eq!(witt_d(&r, &x, &y), expected);
    }

    fn spec(e0: &str, consts: &[(i64, &str)]) -> AsConstantSpec {
        AsConstantSpec {
            p: 3,
            d: 2,
            e0: e0.parse().unwrap(),
            constants: consts.iter().map(|&(val, lead)| AsConstant { val, lead: lead.into() }).collect(),
        }
    }

    #[test]
    fn independent_equal_valuations_pass() {
        let r = validate_reduced_as(&spec("inf", &[(-1, "1"), (-1, "g")])).unwrap();
        assert!(r.all_hold());
        assert_eq!(r.lower_bound, Status::Vacuous);
        assert_eq!(r.cross_term, Status::Vacuous);
        assert_eq!(r.independent_leads, Status::Holds);
    }

    #[test]
    fn dependent_leads_fail_iii() {
        let r = validate_reduced_as(&spec("inf", &[(-1, "1"), (-1, "2")])).unwrap();
        assert_eq!(r.independent_leads, Status::Fails);
        assert_eq!(r.prime_to_p, Status::Holds);
    }

    #[test]
    fn valuation_divisible_by_p_fails_ii() {
        let r = validate_reduced_as(&spec("10", &[(-3, "1"), (-1, "1")])).unwrap();
        assert_eq!(r.prime_to_p, Status::Fails);
    }

    #[test]
    fn finite_e0_bounds() {
        // -p e0/(p-1) = -3 for e0 = 2
        let r = validate_reduced_as(&spec("2", &[(-1, "1"), (-2, "1")])).unwrap();
        assert_eq!(r.ordered, Status::Holds);
        // 3*2 + 2*(-2) + (-1) = 1 > 0
        assert_eq!(r.cross_term, Status::Holds);
        let r = validate_reduced_as(&spec("1", &[(-1, "1"), (-2, "1")])).unwrap();
        assert_eq!(r.lower_bound, Status::Fails);
        assert_eq!(r.cross_term, Status::Fails);
    }

    #[test]
    fn spec_json_shape() {
        let s = spec("inf", &[(-1, "1"), (-1, "g")]);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(
            json,
            r#"{"p":3,"d":2,"e0":"inf","constants":[{"val":-1,"lead":"1"},{"val":-1,"lead":"g"}]}"#
        );
        let back: AsConstantSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
}
