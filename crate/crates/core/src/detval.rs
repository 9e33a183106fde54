//! Frobenius-twist matrices `(beta_i^(p^(j-1)))`: Moore determinants over
//! `F_q`, the closed-form valuation of their determinants over `F_q((pi))`,
//! and the cofactor valuations `v_0(t_i)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::artin_schreier::CharPRing;
use crate::error::{Error, Result};
use crate::ramification::require_odd_prime;
use crate::valuation::{ExtRational, Fq, LaurentSeries, ResidueField};

/// All permutations of `0..k` with their signs.
pub fn permutations(k: usize) -> Vec<(Vec<usize>, i64)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut perms = vec![];
    rec(&mut vec![], &mut vec![false; k], &mut perms);
    perms
        .into_iter()
        .map(|s| {
            let inversions = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).filter(|&(i, j)| s[i] > s[j]).count();
            let sign = if inversions % 2 == 0 { 1 } else { -1 };
            (s, sign)
        })
        .collect()
}

/// Determinant by the Leibniz expansion, in any [`CharPRing`].
pub fn leibniz_det<R: CharPRing>(ring: &R, m: &[Vec<R::Elem>]) -> R::Elem {
    let k = m.len();
    let mut acc = ring.zero();
    for (perm, sign) in permutations(k) {
        let mut term = ring.one();
        for (i, &j) in perm.iter().enumerate() {
            term = ring.mul(&term, &m[i][j]);
        }
        acc = if sign > 0 { ring.add(&acc, &term) } else { ring.sub(&acc, &term) };
    }
    acc
}

/// Leibniz expansion over Laurent series with the `k!` terms evaluated in
/// parallel. Returns the determinant and the valuation of the smallest
/// term.
pub fn leibniz_det_series(m: &[Vec<LaurentSeries>]) -> (LaurentSeries, ExtRational) {
    let k = m.len();
    let field = m.first().and_then(|r| r.first()).map(|x| x.field()).expect("nonempty matrix");
    let terms: Vec<LaurentSeries> = permutations(k)
        .into_par_iter()
        .map(|(perm, sign)| {
            let mut term = LaurentSeries::one(field);
            for (i, &j) in perm.iter().enumerate() {
                term = &term * &m[i][j];
            }
            if sign > 0 {
                term
            } else {
                -term
            }
        })
        .collect();
    let min_term = terms.iter().filter_map(|t| t.valuation().ok()).min().unwrap_or(ExtRational::Infinity);
    let det = terms.iter().fold(LaurentSeries::zero(field), |acc, t| &acc + t);
    (det, min_term)
}

/// Determinant of a square matrix over `F_q` by Gaussian elimination.
pub fn det_fq(field: &ResidueField, m: &[Vec<Fq>]) -> Fq {
    let k = m.len();
    let mut a: Vec<Vec<Fq>> = m.to_vec();
    let mut det = Fq::ONE;
    for col in 0..k {
        let Some(piv) = (col..k).find(|&r| !a[r][col].is_zero()) else {
            return Fq::ZERO;
        };
        if piv != col {
            a.swap(piv, col);
            det = field.neg(det);
        }
        det = field.mul(det, a[col][col]);
        let inv = field.inv(a[col][col]).expect("pivot is nonzero");
        for r in col + 1..k {
            let f = field.mul(a[r][col], inv);
            if f.is_zero() {
                continue;
            }
            for c in col..k {
                let t = field.mul(f, a[col][c]);
                a[r][c] = field.sub(a[r][c], t);
            }
        }
    }
    det
}

/// The Moore determinant `det(mu_i^(p^(j-1)))`, nonzero exactly when the
/// `mu_i` are linearly independent over `F_p`.
pub fn moore_det(field: &ResidueField, mus: &[Fq]) -> Fq {
    let rows: Vec<Vec<Fq>> = mus
        .iter()
        .map(|&mu| {
            let mut row = Vec::with_capacity(mus.len());
            let mut x = mu;
            for _ in 0..mus.len() {
                row.push(x);
                x = field.frob(x);
            }
            row
        })
        .collect();
    det_fq(field, &rows)
}

/// The matrix with rows `(beta_i, beta_i^p, .., beta_i^(p^(k-1)))`.
#[derive(Clone, Debug)]
pub struct FrobMatrix {
    pub betas: Vec<LaurentSeries>,
}

impl FrobMatrix {
    pub fn new(betas: Vec<LaurentSeries>) -> Result<Self> {
        if betas.is_empty() {
            return Err(Error::invalid("empty Frobenius matrix"));
        }
        let f = betas[0].field();
        if betas.iter().any(|b| b.field() != f) {
            return Err(Error::invalid("entries over different fields"));
        }
        for b in &betas {
            b.val()?;
        }
        Ok(FrobMatrix { betas })
    }

    pub fn k(&self) -> usize {
        self.betas.len()
    }

    pub fn field(&self) -> &'static ResidueField {
        self.betas[0].field()
    }

    /// The full matrix of Frobenius powers.
    pub fn entries(&self) -> Vec<Vec<LaurentSeries>> {
        self.betas
            .iter()
            .map(|b| {
                let mut row = vec![b.clone()];
                for _ in 1..self.k() {
                    let next = row.last().unwrap().frobenius();
                    row.push(next);
                }
                row
            })
            .collect()
    }

    /// Checks that `r_i = -v(beta_i)` is nondecreasing and that leading
    /// coefficients are `F_p`-independent within every run of equal `r_i`.
    pub fn check_hypotheses(&self) -> Result<Vec<i64>> {
        let r: Vec<i64> = self.betas.iter().map(|b| b.val().map(|v| -v)).collect::<Result<_>>()?;
        if r.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::hypothesis(format!("pole orders {r:?} are not nondecreasing")));
        }
        let f = self.field();
        let mut s = 0;
        while s < r.len() {
            let e = (s..r.len()).take_while(|&j| r[j] == r[s]).last().unwrap();
            let leads: Vec<Fq> = self.betas[s..=e].iter().map(|b| b.lead().unwrap().1).collect();
            if f.rank_over_prime_field(&leads) != leads.len() {
                return Err(Error::hypothesis(format!(
                    "leading coefficients of beta_{}..beta_{} (pole order {}) are F_p-dependent",
                    s + 1,
                    e + 1,
                    r[s]
                )));
            }
            s = e + 1;
        }
        Ok(r)
    }

    /// Brute-force determinant over Laurent series.
    pub fn brute_force_det(&self) -> LaurentSeries {
        leibniz_det_series(&self.entries()).0
    }
}

/// `v(det M) = -(r_1 + p r_2 + .. + p^(k-1) r_k)`, computed without forming
/// the determinant.
pub fn tval_valuation(fm: &FrobMatrix) -> Result<ExtRational> {
    let r = fm.check_hypotheses()?;
    let p = fm.field().p() as i128;
    let mut acc = 0i128;
    for (i, &ri) in r.iter().enumerate() {
        acc += p.pow(i as u32) * ri as i128;
    }
    Ok(ExtRational::int(-acc))
}

/// Formula valuation and brute-force valuation side by side.
pub fn tval_cross_check(fm: &FrobMatrix) -> Result<(ExtRational, ExtRational)> {
    let formula = tval_valuation(fm)?;
    let brute = fm.brute_force_det().valuation()?;
    Ok((formula, brute))
}

/// Cofactor valuations `v_0(t_i)` for pole orders `m_1 <= .. <= m_(2n+1)`:
/// `v_0(t_i) = -(sum_{j<i} p^(j-1) m_j + sum_{j>i} p^(j-2) m_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TiValuations {
    pub p: u64,
    pub n: usize,
    pub m: Vec<i64>,
    pub v0_t: Vec<i128>,
}

impl TiValuations {
    /// `v_(2n+1)(t_j) - v_(2n+1)(t_i) = p^(2n+1) (v_0(t_j) - v_0(t_i))`,
    /// with 1-based indices.
    pub fn top_diff(&self, i: usize, j: usize) -> i128 {
        (self.p as i128).pow(2 * self.n as u32 + 1) * (self.v0_t[j - 1] - self.v0_t[i - 1])
    }
}

pub fn ti_valuations(p: u64, n: usize, m: &[i64]) -> Result<TiValuations> {
    require_odd_prime(p)?;
    if n == 0 || m.len() != 2 * n + 1 {
        return Err(Error::invalid(format!("expected {} pole orders, got {}", 2 * n + 1, m.len())));
    }
    if m.windows(2).any(|w| w[1] < w[0]) || m[0] < 0 {
        return Err(Error::invalid("pole orders must be nonnegative and nondecreasing"));
    }
    let pp = p as i128;
    let v0_t = (1..=m.len())
        .map(|i| {
            let mut acc = 0i128;
            for j in 1..=m.len() {
                if j < i {
                    acc += pp.pow(j as u32 - 1) * m[j - 1] as i128;
                } else if j > i {
                    acc += pp.pow(j as u32 - 2) * m[j - 1] as i128;
                }
            }
            -acc
        })
        .collect();
    Ok(TiValuations { p, n, m: m.to_vec(), v0_t })
}

/// Both sides of `det(phi(A)) = phi(det(A))`, which agree exactly in
/// characteristic `p`.
#[derive(Clone, Debug)]
pub struct PhidetReport {
    pub equal: bool,
    pub det_of_frobenius: LaurentSeries,
    pub frobenius_of_det: LaurentSeries,
    /// Valuation of the smallest Leibniz term of `det(A)`.
    pub gamma_valuation: ExtRational,
}

pub fn phidet_check(a: &[Vec<LaurentSeries>]) -> Result<PhidetReport> {
    let k = a.len();
    if k == 0 || k > 4 || a.iter().any(|r| r.len() != k) {
        return Err(Error::invalid("phidet_check needs a square matrix of size 1..=4"));
    }
    let (det, gamma_valuation) = leibniz_det_series(a);
    det.valuation()?;
    let phi_a: Vec<Vec<LaurentSeries>> = a.iter().map(|r| r.iter().map(|x| x.frobenius()).collect()).collect();
    let (det_phi, _) = leibniz_det_series(&phi_a);
    let frob_det = det.frobenius();
    let equal = match (det_phi.prec(), frob_det.prec()) {
        (None, None) => det_phi == frob_det,
        (x, y) => {
            let cut = x.unwrap_or(i64::MAX).min(y.unwrap_or(i64::MAX));
            det_phi.truncate(cut) == frob_det.truncate(cut)
        }
    };
    Ok(PhidetReport { equal, det_of_frobenius: det_phi, frobenius_of_det: frob_det, gamma_valuation })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> &'static ResidueField {
        ResidueField::new(3, 2).unwrap()
    }

    #[test]
    fn moore_examples() {
        let f = f9();
        let g = f.generator();
        assert_eq!(moore_det(f, &[g]), g);
        assert_eq!(moore_det(f, &[Fq::ONE, g]), f.sub(f.frob(g), g));
        assert!(!moore_det(f, &[Fq::ONE, g]).is_zero());
        assert!(moore_det(f, &[Fq::ONE, Fq(2)]).is_zero());
    }

    #[test]
    fn tval_examples() {
        let f = f9();
        let g = f.generator();
        let fm = FrobMatrix::new(vec![LaurentSeries::pi_pow(f, -1), LaurentSeries::pi_pow(f, -2)]).unwrap();
        assert_eq!(tval_cross_check(&fm).unwrap(), (ExtRational::int(-7), ExtRational::int(-7)));
        assert_eq!(
            fm.brute_force_det(),
            LaurentSeries::pi_pow(f, -7) - LaurentSeries::pi_pow(f, -5)
        );

        let fm = FrobMatrix::new(vec![LaurentSeries::pi_pow(f, -1), LaurentSeries::monomial(f, g, -1)]).unwrap();
        assert_eq!(tval_valuation(&fm).unwrap(), ExtRational::int(-4));
        assert_eq!(fm.brute_force_det(), LaurentSeries::monomial(f, f.sub(f.frob(g), g), -4));

        let fm = FrobMatrix::new(vec![LaurentSeries::pi_pow(f, -5)]).unwrap();
        assert_eq!(tval_valuation(&fm).unwrap(), ExtRational::int(-5));
    }

    #[test]
    fn tval_refuses_dependent_run() {
        let f = f9();
        let fm = FrobMatrix::new(vec![LaurentSeries::pi_pow(f, -1), LaurentSeries::monomial(f, Fq(2), -1)]).unwrap();
        assert!(matches!(tval_valuation(&fm), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn ti_examples() {
        let t = ti_valuations(3, 1, &[0, 0, 1]).unwrap();
        assert_eq!(t.v0_t, vec![-3, -3, 0]);
        assert_eq!(t.top_diff(1, 3), 81);
        assert_eq!(ti_valuations(3, 1, &[0, 0, 0]).unwrap().v0_t, vec![0, 0, 0]);
        assert!(ti_valuations(3, 1, &[0, 1]).is_err());
    }

    #[test]
    fn phidet_small_cases() {
        let f = f9();
        let x = LaurentSeries::from_terms(f, &[(-2, Fq(4)), (1, Fq(1))], None);
        let r = phidet_check(&[vec![x.clone()]]).unwrap();
        assert!(r.equal);
        assert_eq!(r.det_of_frobenius, x.pow(3));

        let one = LaurentSeries::one(f);
        let zero = LaurentSeries::zero(f);
        let r = phidet_check(&[vec![one.clone(), zero.clone()], vec![zero, one.clone()]]).unwrap();
        assert!(r.equal);
        assert_eq!(r.frobenius_of_det, one);
    }

    #[test]
    fn permutation_signs() {
        let perms = permutations(3);
        assert_eq!(perms.len(), 6);
        assert_eq!(perms.iter().map(|p| p.1).sum::<i64>(), 0);
    }
}
