//! Inputs shared by the benchmarks.

use exscaf_core::planner::independent_leads;
use exscaf_core::{ExtRational, Fq, LaurentSeries, ResidueField, Tower, TowerElement, TowerParams, Variant};

/// A dense series over `F_q` with `len` coefficients starting at `start`,
/// filled from a fixed linear congruential sequence.
pub fn dense_series(field: &'static ResidueField, start: i64, len: usize, seed: u64) -> LaurentSeries {
    let mut x = seed;
    let coeffs = (0..len)
        .map(|_| {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            Fq(((x >> 33) % field.q()) as u16)
        })
        .collect();
    LaurentSeries::from_dense(field, start, coeffs, None)
}

/// The family tower with `u_1 = .. = u_2n = u` and `m_N = t` in
/// characteristic `p`.
pub fn family_params(p: u64, n: usize, u: i64, t: i64, variant: Variant) -> TowerParams {
    let mut m = vec![0; 2 * n + 1];
    m[2 * n] = t;
    TowerParams::new(p, n, variant, ExtRational::Infinity, u, m, independent_leads(p, n).unwrap(), 2 * n as u32)
        .unwrap()
}

pub fn family_tower(p: u64, n: usize, u: i64, t: i64, variant: Variant) -> Tower {
    Tower::build(&family_params(p, n, u, t, variant), None).unwrap()
}

/// A tower element with every coefficient a short Laurent polynomial.
pub fn dense_element(tower: &Tower, seed: u64) -> TowerElement {
    let alg = tower.alg();
    let coeffs = (0..alg.degree()).map(|i| dense_series(alg.field(), -3, 5, seed + i as u64)).collect();
    alg.from_coeffs(coeffs).unwrap()
}
