use std::fmt;

use crate::artin_schreier::CharPRing;
use crate::error::{Error, Result};
use crate::valuation::{ExtRational, Fq, LaurentSeries, Rat, ResidueField};

/// An iterated Artin-Schreier algebra
/// `K_L = K_0[alpha_1, .., alpha_L]` with `alpha_k^p = alpha_k + rhs_k` and
/// `rhs_k` in `K_(k-1)`, over `K_0 = F_q((pi))`.
///
/// Elements are coefficient vectors of length `p^L`: index
/// `e_1 + e_2 p + .. + e_L p^(L-1)` holds the coefficient of
/// `alpha_1^e_1 .. alpha_L^e_L`. The block `[j p^(k-1), (j+1) p^(k-1))` of
/// a level-`k` vector is the `K_(k-1)`-coefficient of `alpha_k^j`.
#[derive(Clone, Debug)]
pub struct AsAlgebra {
    field: &'static ResidueField,
    p: usize,
    rhs: Vec<Vec<LaurentSeries>>,
}

/// An element of an [`AsAlgebra`], always in reduced form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TowerElement {
    coeffs: Vec<LaurentSeries>,
}

impl TowerElement {
    pub fn coeffs(&self) -> &[LaurentSeries] {
        &self.coeffs
    }

    /// Coefficient of the monomial with exponent vector `e`.
    pub fn coeff(&self, e: &[usize], p: usize) -> &LaurentSeries {
        let idx = e.iter().rev().fold(0, |acc, &x| acc * p + x);
        &self.coeffs[idx]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_exact_zero())
    }

    /// The element lies in `K_0`.
    pub fn is_scalar(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_exact_zero())
    }
}

impl fmt::Debug for TowerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_exact_zero())).finish()
    }
}

fn all_exact_zero(v: &[LaurentSeries]) -> bool {
    v.iter().all(|c| c.is_exact_zero())
}

impl AsAlgebra {
    /// `rhs[k]` is the right-hand side for `alpha_(k+1)`, a vector of length
    /// `p^k`.
    pub fn new(field: &'static ResidueField, rhs: Vec<Vec<LaurentSeries>>) -> Result<Self> {
        let p = field.p() as usize;
        for (k, r) in rhs.iter().enumerate() {
            if r.len() != p.pow(k as u32) {
                return Err(Error::invalid(format!("relation {} has {} coefficients, expected {}", k + 1, r.len(), p.pow(k as u32))));
            }
            if r.iter().any(|c| c.field() != field) {
                return Err(Error::invalid("relation over a different residue field"));
            }
        }
        Ok(AsAlgebra { field, p, rhs })
    }

    pub fn field(&self) -> &'static ResidueField {
        self.field
    }

    /// Text form such as `(pi^-1)*a1 + (g)*a1^2*a3`.
    pub fn format(&self, x: &TowerElement) -> String {
        let mut parts = vec![];
        for (i, c) in x.coeffs.iter().enumerate() {
            if c.is_exact_zero() {
                continue;
            }
            let mut mono = vec![];
            let mut rest = i;
            for level in 1..=self.levels() {
                let e = rest % self.p;
                rest /= self.p;
                match e {
                    0 => {}
                    1 => mono.push(format!("a{level}")),
                    _ => mono.push(format!("a{level}^{e}")),
                }
            }
            parts.push(if mono.is_empty() { format!("({c})") } else { format!("({c})*{}", mono.join("*")) });
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn levels(&self) -> usize {
        self.rhs.len()
    }

    /// Dimension `p^L` over `K_0`.
    pub fn degree(&self) -> usize {
        self.p.pow(self.levels() as u32)
    }

    /// The relation right-hand side for `alpha_k` (1-based), embedded.
    pub fn relation_rhs(&self, k: usize) -> TowerElement {
        self.embed(&self.rhs[k - 1])
    }

    /// The sub-algebra `K_k` generated by the first `k` generators.
    pub fn truncate_levels(&self, k: usize) -> AsAlgebra {
        AsAlgebra { field: self.field, p: self.p, rhs: self.rhs[..k].to_vec() }
    }

    pub fn zero(&self) -> TowerElement {
        TowerElement { coeffs: vec![LaurentSeries::zero(self.field); self.degree()] }
    }

    pub fn one(&self) -> TowerElement {
        self.from_series(LaurentSeries::one(self.field))
    }

    pub fn from_series(&self, s: LaurentSeries) -> TowerElement {
        let mut x = self.zero();
        x.coeffs[0] = s;
        x
    }

    pub fn from_int(&self, k: i64) -> TowerElement {
        self.from_series(LaurentSeries::constant(self.field, self.field.from_int(k)))
    }

    /// Pads a coefficient vector from a lower level.
    pub fn embed(&self, lower: &[LaurentSeries]) -> TowerElement {
        assert!(lower.len() <= self.degree());
        let mut x = self.zero();
        x.coeffs[..lower.len()].clone_from_slice(lower);
        x
    }

    pub fn from_coeffs(&self, coeffs: Vec<LaurentSeries>) -> Result<TowerElement> {
        if coeffs.len() != self.degree() {
            return Err(Error::invalid(format!("expected {} coefficients, got {}", self.degree(), coeffs.len())));
        }
        Ok(TowerElement { coeffs })
    }

    /// The generator `alpha_k` (1-based).
    pub fn gen(&self, k: usize) -> TowerElement {
        assert!(k >= 1 && k <= self.levels(), "generator index out of range");
        let mut x = self.zero();
        x.coeffs[self.p.pow(k as u32 - 1)] = LaurentSeries::one(self.field);
        x
    }

    pub fn add(&self, a: &TowerElement, b: &TowerElement) -> TowerElement {
        TowerElement { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect() }
    }

    pub fn sub(&self, a: &TowerElement, b: &TowerElement) -> TowerElement {
        TowerElement { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect() }
    }

    pub fn neg(&self, a: &TowerElement) -> TowerElement {
        TowerElement { coeffs: a.coeffs.iter().map(|x| -x).collect() }
    }

    pub fn scale(&self, a: &TowerElement, s: &LaurentSeries) -> TowerElement {
        TowerElement { coeffs: a.coeffs.iter().map(|x| x * s).collect() }
    }

    pub fn scale_fq(&self, a: &TowerElement, c: Fq) -> TowerElement {
        TowerElement { coeffs: a.coeffs.iter().map(|x| x.scale(c)).collect() }
    }

    pub fn mul(&self, a: &TowerElement, b: &TowerElement) -> TowerElement {
        TowerElement { coeffs: self.mul_level(self.levels(), &a.coeffs, &b.coeffs) }
    }

    pub fn pow(&self, a: &TowerElement, mut e: u64) -> TowerElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Product of two level-`k` vectors, reduced by the relations.
    fn mul_level(&self, k: usize, a: &[LaurentSeries], b: &[LaurentSeries]) -> Vec<LaurentSeries> {
        if k == 0 {
            return vec![&a[0] * &b[0]];
        }
        if all_exact_zero(&b[1..]) {
            return a.iter().map(|x| x * &b[0]).collect();
        }
        if all_exact_zero(&a[1..]) {
            return b.iter().map(|x| &a[0] * x).collect();
        }
        let p = self.p;
        let s = p.pow(k as u32 - 1);
        let blocks = |v: &'_ [LaurentSeries]| -> Vec<Option<Vec<LaurentSeries>>> {
            (0..p)
                .map(|j| {
                    let blk = &v[j * s..(j + 1) * s];
                    (!all_exact_zero(blk)).then(|| blk.to_vec())
                })
                .collect()
        };
        let ab = blocks(a);
        let bb = blocks(b);
        let mut c: Vec<Option<Vec<LaurentSeries>>> = vec![None; 2 * p - 1];
        for (i, ai) in ab.iter().enumerate() {
            let Some(ai) = ai else { continue };
            for (j, bj) in bb.iter().enumerate() {
                let Some(bj) = bj else { continue };
                let prod = self.mul_level(k - 1, ai, bj);
                accumulate(&mut c[i + j], &prod);
            }
        }
        let rhs = &self.rhs[k - 1];
        for t in (p..=2 * p - 2).rev() {
            let Some(ct) = c[t].take() else { continue };
            // alpha^t = alpha^(t-p+1) + rhs * alpha^(t-p)
            accumulate(&mut c[t - p + 1], &ct);
            let shifted = self.mul_level(k - 1, rhs, &ct);
            accumulate(&mut c[t - p], &shifted);
        }
        let mut out = Vec::with_capacity(p * s);
        for blk in c.into_iter().take(p) {
            match blk {
                Some(v) => out.extend(v),
                None => out.extend(std::iter::repeat_n(LaurentSeries::zero(self.field), s)),
            }
        }
        out
    }

    /// `N_(K_k / K_(k-1))` of a level-`k` vector: the product of its images
    /// under `alpha_k -> alpha_k + j`, `j = 0 .. p-1`.
    fn norm_step(&self, k: usize, x: &[LaurentSeries]) -> Result<Vec<LaurentSeries>> {
        let p = self.p;
        let s = p.pow(k as u32 - 1);
        let mut acc: Vec<LaurentSeries> = x.to_vec();
        for j in 1..p {
            let shifted = self.shift_top(k, x, j as i64);
            acc = self.mul_level(k, &acc, &shifted);
        }
        if acc[s..].iter().any(|c| !c.is_zero()) {
            return Err(Error::consistency("norm does not lie in the base field"));
        }
        acc.truncate(s);
        Ok(acc)
    }

    /// Substitutes `alpha_k -> alpha_k + j` in a level-`k` vector.
    fn shift_top(&self, k: usize, x: &[LaurentSeries], j: i64) -> Vec<LaurentSeries> {
        let p = self.p;
        let s = p.pow(k as u32 - 1);
        let f = self.field;
        let mut out = vec![LaurentSeries::zero(f); p * s];
        // (alpha + j)^e = sum_l binom(e, l) j^(e-l) alpha^l
        for e in 0..p {
            let blk = &x[e * s..(e + 1) * s];
            if all_exact_zero(blk) {
                continue;
            }
            for l in 0..=e {
                let coef = f.from_int(binom_mod(e, l, p) * pow_mod(j, e - l, p as i64));
                if coef.is_zero() {
                    continue;
                }
                for (o, c) in out[l * s..(l + 1) * s].iter_mut().zip(blk) {
                    *o += &c.scale(coef);
                }
            }
        }
        out
    }

    /// `N_(K_L / K_0)(x)`.
    pub fn norm(&self, x: &TowerElement) -> Result<LaurentSeries> {
        let mut v = x.coeffs.clone();
        for k in (1..=self.levels()).rev() {
            v = self.norm_step(k, &v)?;
        }
        Ok(v.pop().expect("level 0 has one coefficient"))
    }

    /// Normalized valuation `v_L(x)` of the top level, assuming `K_L / K_0`
    /// is a totally ramified field extension: `v_L(x) = v_0(N(x))`.
    pub fn top_valuation(&self, x: &TowerElement) -> Result<ExtRational> {
        if x.is_exact_zero() {
            return Ok(ExtRational::Infinity);
        }
        let n = self.norm(x)?;
        if n.is_exact_zero() {
            return Err(Error::consistency("nonzero element with zero norm: the algebra is not a field"));
        }
        n.valuation()
    }

    /// `v_L(x)` as an integer; fails for zero.
    pub fn top_val(&self, x: &TowerElement) -> Result<i64> {
        match self.top_valuation(x)? {
            ExtRational::Infinity => Err(Error::invalid("valuation of zero")),
            v => Ok(v.as_integer().expect("integral valuation") as i64),
        }
    }

    /// `v_0(x) = v_L(x) / p^L`.
    pub fn valuation(&self, x: &TowerElement) -> Result<ExtRational> {
        let d = Rat::from_integer(self.degree() as i128);
        Ok(match self.top_valuation(x)? {
            ExtRational::Finite(v) => ExtRational::Finite(v / d),
            ExtRational::Infinity => ExtRational::Infinity,
        })
    }
}

fn accumulate(slot: &mut Option<Vec<LaurentSeries>>, v: &[LaurentSeries]) {
    match slot {
        Some(acc) => {
            for (a, x) in acc.iter_mut().zip(v) {
                *a += x;
            }
        }
        None => *slot = Some(v.to_vec()),
    }
}

fn binom_mod(n: usize, k: usize, p: usize) -> i64 {
    let mut c = 1u64;
    for i in 0..k {
        c = c * (n - i) as u64 / (i + 1) as u64;
    }
    (c % p as u64) as i64
}

fn pow_mod(b: i64, e: usize, m: i64) -> i64 {
    (0..e).fold(1i64, |acc, _| (acc * b).rem_euclid(m))
}

impl CharPRing for AsAlgebra {
    type Elem = TowerElement;

    fn char_p(&self) -> u64 {
        self.p as u64
    }
    fn one(&self) -> TowerElement {
        AsAlgebra::one(self)
    }
    fn zero(&self) -> TowerElement {
        AsAlgebra::zero(self)
    }
    fn add(&self, a: &TowerElement, b: &TowerElement) -> TowerElement {
        AsAlgebra::add(self, a, b)
    }
    fn sub(&self, a: &TowerElement, b: &TowerElement) -> TowerElement {
        AsAlgebra::sub(self, a, b)
    }
    fn mul(&self, a: &TowerElement, b: &TowerElement) -> TowerElement {
        AsAlgebra::mul(self, a, b)
    }
    fn scale_int(&self, a: &TowerElement, k: i64) -> TowerElement {
        self.scale_fq(a, self.field.from_int(k))
    }
    fn pow(&self, a: &TowerElement, e: u64) -> TowerElement {
        AsAlgebra::pow(self, a, e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artin_schreier::wp;

    fn single(p: u64, d: u32, a: LaurentSeries) -> AsAlgebra {
        let f = ResidueField::new(p, d).unwrap();
        AsAlgebra::new(f, vec![vec![a]]).unwrap()
    }

    #[test]
    fn relation_holds() {
        let f = ResidueField::new(3, 2).unwrap();
        let alg = single(3, 2, LaurentSeries::pi_pow(f, -1));
        let a = alg.gen(1);
        let lhs = wp(&alg, &a);
        assert_eq!(lhs, alg.from_series(LaurentSeries::pi_pow(f, -1)));
        assert_eq!(alg.mul(&a, &alg.one()), a);
    }

    #[test]
    fn generator_valuation() {
        let f = ResidueField::new(3, 2).unwrap();
        let alg = single(3, 2, LaurentSeries::pi_pow(f, -1));
        assert_eq!(alg.valuation(&alg.gen(1)).unwrap(), ExtRational::frac(-1, 3));
        let pi = alg.from_series(LaurentSeries::pi_pow(f, 1));
        assert_eq!(alg.valuation(&pi).unwrap(), ExtRational::int(1));
        assert_eq!(alg.top_val(&pi).unwrap(), 3);
    }

    #[test]
    fn two_level_associativity() {
        let f = ResidueField::new(3, 2).unwrap();
        let a1 = LaurentSeries::pi_pow(f, -1);
        let a2 = LaurentSeries::monomial(f, f.generator(), -1);
        let alg = AsAlgebra::new(f, vec![vec![a1.clone()], vec![a2, LaurentSeries::zero(f), LaurentSeries::zero(f)]]).unwrap();
        let x = alg.add(&alg.gen(1), &alg.mul(&alg.gen(2), &alg.gen(2)));
        let y = alg.add(&alg.gen(2), &alg.from_series(LaurentSeries::pi_pow(f, 2)));
        let z = alg.sub(&alg.gen(1), &alg.gen(2));
        assert_eq!(alg.mul(&alg.mul(&x, &y), &z), alg.mul(&x, &alg.mul(&y, &z)));
        assert_eq!(alg.mul(&x, &y), alg.mul(&y, &x));
    }
}
