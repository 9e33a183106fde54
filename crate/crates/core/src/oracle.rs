//! End-to-end verification on an explicit characteristic-`p` tower: the
//! generator `Y`, the lower ramification filtration measured from the
//! Galois action, the scaffold rows for the top generator, and the
//! ramification of the elementary layers.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detval::leibniz_det_series;
use crate::error::{Error, Result};
use crate::localfield::{
    enumerate_group, relation_report, AsAlgebra, GaloisMap, GroupTable, RelationReport, Tower, TowerElement,
};
use crate::planner::{TowerParams, Variant};
use crate::ramification::lower_to_upper;
use crate::valuation::{rat_serde, ExtRational, LaurentSeries, Rat};

/// Valuations around `Y = t_1 alpha_1 + .. + t_N alpha_N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct YReport {
    /// `v_0(t_i)`.
    pub t_v0: Vec<ExtRational>,
    /// `v_N(Y)`, measured by the norm.
    pub v_y: i64,
    /// `-b_1 + p^N v_0(t_1)`.
    pub predicted_v_y: i128,
    pub prime_to_p: bool,
}

/// `t_i = (-1)^(i+1)` times the minor obtained by deleting row `i` of the
/// `N x (N-1)` matrix with rows `(w_j, phi(w_j), .., phi^(N-2)(w_j))`, so
/// that `sum t_i alpha_i` is the cofactor expansion of
/// `det[alpha, w, phi(w), ..]` along its first column.
pub fn cofactors(w: &[LaurentSeries]) -> Vec<LaurentSeries> {
    let k = w.len();
    let rows: Vec<Vec<LaurentSeries>> =
        w.iter().map(|x| (0..k - 1).map(|c| x.frobenius_pow(c as u32)).collect()).collect();
    (0..k)
        .map(|i| {
            if k == 1 {
                return LaurentSeries::one(w[0].field());
            }
            let minor: Vec<Vec<LaurentSeries>> =
                rows.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, r)| r.clone()).collect();
            let (det, _) = leibniz_det_series(&minor);
            if i % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect()
}

fn linear_combination(alg: &AsAlgebra, t: &[LaurentSeries]) -> TowerElement {
    t.iter().enumerate().fold(alg.zero(), |acc, (i, ti)| alg.add(&acc, &alg.scale(&alg.gen(i + 1), ti)))
}

/// Builds `Y` and checks `v_N(Y) = -b_1 + p^N v_0(t_1)` with `p` not
/// dividing `v_N(Y)`.
pub fn construct_y(tower: &Tower) -> Result<(TowerElement, Vec<LaurentSeries>, YReport)> {
    let t = cofactors(tower.omega());
    let alg = tower.alg();
    let y = linear_combination(alg, &t);
    let v_y = alg.top_val(&y)?;
    let t_v0 = t.iter().map(|ti| ti.valuation()).collect::<Result<Vec<_>>>()?;
    let v0_t1 = t_v0[0]
        .as_integer()
        .ok_or_else(|| Error::consistency("t_1 vanishes: the leading coefficients are dependent"))?;
    let big_p = (tower.params.p as i128).pow(tower.big_n() as u32);
    let predicted_v_y = -tower.plan.b[0] + big_p * v0_t1;
    let prime_to_p = v_y.rem_euclid(tower.params.p as i64) != 0;
    if v_y as i128 != predicted_v_y {
        return Err(Error::consistency(format!("v_N(Y) = {v_y}, expected {predicted_v_y}")));
    }
    if !prime_to_p {
        return Err(Error::consistency(format!("p divides v_N(Y) = {v_y}")));
    }
    Ok((y, t, YReport { t_v0, v_y, predicted_v_y, prime_to_p }))
}

/// `i(s)` for one group element, as a normal-form word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IVal {
    pub word: Vec<u32>,
    pub i: i64,
}

/// The lower ramification filtration measured from `i(s) = v_L(s(pi_L) - pi_L)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationReport {
    /// `v_L(z)` of the element used to build `pi_L = z^x pi^y`.
    pub z_valuation: i64,
    pub bezout_x: i64,
    pub bezout_y: i64,
    /// Every non-identity element.
    pub ivals: Vec<IVal>,
    pub lower_multiset: Vec<i64>,
    /// `sum_(s != 1) i(s)`.
    pub different_val: i64,
    /// `sum_(x >= 0) (|G_x| - 1)` computed from the lower multiset.
    pub hilbert_sum: i64,
    /// Every `i(s) - 1` is a jump and the two different computations agree.
    pub consistent: bool,
}

/// `x, y` with `x v + y m = 1` and `|x|` minimal.
pub fn bezout_min(v: i64, m: i64) -> Result<(i64, i64)> {
    let g = num_integer::Integer::extended_gcd(&v.rem_euclid(m), &m);
    if g.gcd != 1 {
        return Err(Error::consistency(format!("{v} is not prime to {m}")));
    }
    let mut x = g.x.rem_euclid(m);
    if 2 * x > m {
        x -= m;
    }
    let y = (1 - x as i128 * v as i128) / m as i128;
    Ok((x, y as i64))
}

/// Measures the lower filtration of the group `table` acting on `alg`,
/// using an element `z` whose valuation is prime to `p`.
pub fn filtration(alg: &AsAlgebra, table: &GroupTable, z: &TowerElement) -> Result<FiltrationReport> {
    let p = alg.p() as i64;
    let big_p = alg.degree() as i64;
    let v = alg.top_val(z)?;
    let (x, y) = bezout_min(v, big_p)?;
    let k = x.unsigned_abs();
    let zk = alg.pow(z, k);
    let ivals: Vec<IVal> = table.elements[1..]
        .par_iter()
        .map(|el| {
            let szk = alg.pow(&el.map.apply(alg, z), k);
            let i = if x < 0 {
                y * big_p + alg.top_val(&alg.sub(&zk, &szk))? - 2 * k as i64 * v
            } else {
                y * big_p + alg.top_val(&alg.sub(&szk, &zk))?
            };
            Ok(IVal { word: el.word.clone(), i })
        })
        .collect::<Result<_>>()?;

    let count_at_least = |b: i64| 1 + ivals.iter().filter(|iv| iv.i > b).count() as i64;
    if count_at_least(0) != big_p {
        return Err(Error::consistency("some element has i(s) <= 0"));
    }
    let mut jumps: Vec<i64> = ivals.iter().map(|iv| iv.i - 1).collect();
    jumps.sort_unstable();
    jumps.dedup();
    let mut lower_multiset = vec![];
    for &b in &jumps {
        let (big, small) = (count_at_least(b), count_at_least(b + 1));
        let mut ratio = big / small;
        if big % small != 0 {
            return Err(Error::consistency(format!("|G_{b}| / |G_{}| is not an integer", b + 1)));
        }
        while ratio > 1 {
            if ratio % p != 0 {
                return Err(Error::consistency(format!("|G_{b}| / |G_{}| is not a power of p", b + 1)));
            }
            ratio /= p;
            lower_multiset.push(b);
        }
    }
    let different_val = ivals.iter().map(|iv| iv.i).sum();
    let max_b = lower_multiset.last().copied().unwrap_or(-1);
    let hilbert_sum = (0..=max_b)
        .map(|x| p.pow(lower_multiset.iter().filter(|&&b| b >= x).count() as u32) - 1)
        .sum();
    let consistent = different_val == hilbert_sum
        && lower_multiset.len() as u32 == alg.levels() as u32
        && ivals.iter().all(|iv| lower_multiset.contains(&(iv.i - 1)));
    Ok(FiltrationReport { z_valuation: v, bezout_x: x, bezout_y: y, ivals, lower_multiset, different_val, hilbert_sum, consistent })
}

/// One scaffold row for the top generator: `d = v(eps) - v(mu)` where
/// `(s_i - 1) X = mu + eps`, `X = t_N^-1 Y`, `mu = t_N^-1 t_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaffoldRow {
    pub generator: usize,
    pub measured: ExtRational,
    pub bound: ExtRational,
    /// `measured - p^(2n) u_i + b_i`.
    pub contribution: ExtRational,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaffoldReport {
    /// `v_N(X)`, measured from the truncated inverse of `t_N`.
    pub v_x: i64,
    pub expected_v_x: i128,
    pub rows: Vec<ScaffoldRow>,
    pub min_contribution: ExtRational,
    pub cfrak: i128,
    pub holds: bool,
}

fn row_bound(tower: &Tower, i: usize) -> ExtRational {
    let n = tower.n();
    let big_n = tower.big_n();
    let b = &tower.plan.b;
    let u = &tower.plan.u;
    let q = (tower.params.p as i128).pow(2 * n as u32);
    if i > n && i < big_n {
        return ExtRational::int(b[big_n - 1] - b[i - 1] - q * u[i - n - 1]);
    }
    if i == 1 && tower.params.variant == Variant::M {
        let p = tower.params.p as i128;
        return ExtRational::int(b[big_n - 1] - b[0] - (p - 1) * q * u[0]);
    }
    ExtRational::Infinity
}

/// Checks each generator row against its bound and the minimum
/// contribution against the planned precision.
pub fn scaffold_row_check(
    tower: &Tower,
    y: &TowerElement,
    t: &[LaurentSeries],
    gens: &[GaloisMap],
) -> Result<ScaffoldReport> {
    let alg = tower.alg();
    let big_n = tower.big_n();
    let big_p = alg.degree() as i128;
    let q = (tower.params.p as i128).pow(2 * tower.n() as u32);
    let cfrak = tower
        .plan
        .cfrak
        .value()
        .ok_or_else(|| Error::hypothesis("no scaffold precision for this tower"))?;

    let t_n = &t[big_n - 1];
    let x = alg.scale(y, &t_n.inv_with_window(tower.prec)?);
    let v_x = alg.top_val(&x)?;
    let expected_v_x = -tower.plan.b[big_n - 1];

    let rows: Vec<ScaffoldRow> = gens
        .par_iter()
        .enumerate()
        .map(|(idx, sigma)| {
            let i = idx + 1;
            // t_N eps = (s_i - 1) Y - t_i, exactly
            let diff = alg.sub(&sigma.apply(alg, y), y);
            let eps_tn = alg.sub(&diff, &alg.from_series(t[idx].clone()));
            let measured = match alg.top_valuation(&eps_tn)? {
                ExtRational::Infinity => ExtRational::Infinity,
                v => {
                    let v_ti = t[idx].val()? as i128 * big_p;
                    v - Rat::from_integer(v_ti)
                }
            };
            let bound = row_bound(tower, i);
            let shift = tower.plan.b[idx] - q * tower.plan.u[idx];
            let contribution = measured + Rat::from_integer(shift);
            Ok(ScaffoldRow { generator: i, holds: measured >= bound, measured, bound, contribution })
        })
        .collect::<Result<_>>()?;
    let min_contribution = rows.iter().map(|r| r.contribution).min().unwrap_or(ExtRational::Infinity);
    let holds = v_x as i128 == expected_v_x
        && rows.iter().all(|r| r.holds)
        && min_contribution >= ExtRational::int(cfrak);
    Ok(ScaffoldReport { v_x, expected_v_x, rows, min_contribution, cfrak, holds })
}

/// Ramification of a subextension: one `K_0(alpha_i)` or `K_(2n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerReport {
    pub layer: String,
    pub z_valuation: i64,
    pub lower: Vec<i64>,
    #[serde(with = "rat_serde::vec")]
    pub upper: Vec<Rat>,
    pub expected_upper: Vec<i128>,
    pub holds: bool,
}

fn layer_report(
    tower: &Tower,
    layer: String,
    alg: &AsAlgebra,
    gens: &[GaloisMap],
    z: &TowerElement,
    expected_upper: Vec<i128>,
) -> Result<LayerReport> {
    let table = enumerate_group(alg, gens)?;
    let f = filtration(alg, &table, z)?;
    let lower: Vec<Rat> = f.lower_multiset.iter().map(|&b| Rat::from_integer(b as i128)).collect();
    let upper = lower_to_upper(tower.params.p, &lower)?;
    let holds = f.consistent
        && upper.len() == expected_upper.len()
        && upper.iter().zip(&expected_upper).all(|(a, &b)| *a == Rat::from_integer(b));
    Ok(LayerReport { layer, z_valuation: f.z_valuation, lower: f.lower_multiset, upper, expected_upper, holds })
}

/// Each `K_0(alpha_i)` for `i <= 2n` has ramification number `u_i`, and
/// `K_(2n)` has upper numbers `u_1, .., u_(2n)`.
pub fn verify_elementary_layers(tower: &Tower) -> Result<Vec<LayerReport>> {
    let field = tower.alg().field();
    let two_n = 2 * tower.n();
    let mut out = Vec::with_capacity(two_n + 1);
    for i in 1..=two_n {
        let alg = AsAlgebra::new(field, vec![vec![tower.a()[i - 1].clone()]])?;
        let sigma = GaloisMap::new(&alg, vec![alg.add(&alg.gen(1), &alg.one())])?;
        let z = alg.gen(1);
        out.push(layer_report(tower, format!("K0(alpha_{i})"), &alg, &[sigma], &z, vec![tower.plan.u[i - 1]])?);
    }
    let (lower, gens) = tower.lower_generators()?;
    let w: Vec<LaurentSeries> = tower.omega()[..two_n].iter().map(|x| x.frobenius()).collect();
    let z = linear_combination(&lower, &cofactors(&w));
    out.push(layer_report(tower, format!("K_{two_n}"), &lower, &gens, &z, tower.plan.u[..two_n].to_vec())?);
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupReport {
    pub order: usize,
    /// SHA-256 of the multiplication table of the normal-form words.
    pub digest: String,
    pub relations: RelationReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub params: TowerParams,
    pub prec: i64,
    pub predicted_b: Vec<i128>,
    pub measured_b: Vec<i64>,
    pub b_match: bool,
    pub group: GroupReport,
    pub y: YReport,
    pub filtration: FiltrationReport,
    pub scaffold: ScaffoldReport,
    pub layers: Vec<LayerReport>,
    pub pass: bool,
}

/// Builds the tower for `params` and runs every check.
pub fn verify(params: &TowerParams, prec: Option<i64>) -> Result<OracleReport> {
    let tower = Tower::build(params, prec)?;
    let alg = tower.alg();
    let gens = tower.galois_generators()?;
    let table = enumerate_group(alg, &gens)?;
    let relations = relation_report(&table, tower.n());
    let group_ok = match params.variant {
        Variant::H => relations.heisenberg,
        Variant::M => relations.metacyclic,
    };
    let group = GroupReport { order: table.order(), digest: table.digest.clone(), relations };
    let (y, t, y_report) = construct_y(&tower)?;
    let filtration = filtration(alg, &table, &y)?;
    let measured_b = filtration.lower_multiset.clone();
    let predicted_b = tower.plan.b.clone();
    let b_match = measured_b.len() == predicted_b.len()
        && measured_b.iter().zip(&predicted_b).all(|(&m, &p)| m as i128 == p);
    let scaffold = scaffold_row_check(&tower, &y, &t, &gens)?;
    let layers = verify_elementary_layers(&tower)?;
    let pass = group_ok && b_match && filtration.consistent && scaffold.holds && layers.iter().all(|l| l.holds);
    Ok(OracleReport {
        params: params.clone(),
        prec: tower.prec,
        predicted_b,
        measured_b,
        b_match,
        group,
        y: y_report,
        filtration,
        scaffold,
        layers,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(variant: Variant) -> TowerParams {
        TowerParams::new(3, 1, variant, ExtRational::Infinity, 1, vec![0, 0, 1], vec!["1".into(), "g".into(), "1".into()], 2)
            .unwrap()
    }

    #[test]
    fn bezout_minimal() {
        assert_eq!(bezout_min(-82, 27).unwrap(), (-1, -3));
        assert_eq!(bezout_min(-26, 3).unwrap(), (1, 9));
        assert!(bezout_min(9, 27).is_err());
    }

    #[test]
    fn heisenberg_oracle() {
        let r = verify(&params(Variant::H), None).unwrap();
        assert!(r.pass, "{r:#?}");
        assert_eq!(r.measured_b, vec![1, 1, 82]);
        assert_eq!(r.y.v_y, -82);
        assert_eq!(r.filtration.different_val, 214);
        assert_eq!(r.filtration.ivals.iter().filter(|iv| iv.i == 2).count(), 24);
        assert_eq!(r.filtration.ivals.iter().filter(|iv| iv.i == 83).count(), 2);
        assert_eq!(r.scaffold.v_x, -82);
        assert_eq!(r.scaffold.min_contribution, ExtRational::int(64));
        assert_eq!(r.scaffold.rows[1].measured, ExtRational::int(72));
    }

    #[test]
    fn metacyclic_oracle() {
        let r = verify(&params(Variant::M), None).unwrap();
        assert!(r.pass, "{r:#?}");
        assert_eq!(r.measured_b, vec![1, 1, 82]);
        assert_eq!(r.scaffold.rows[0].measured, ExtRational::int(63));
        assert_eq!(r.scaffold.min_contribution, ExtRational::int(55));
        assert!(r.scaffold.min_contribution >= ExtRational::int(r.scaffold.cfrak));
    }
}
