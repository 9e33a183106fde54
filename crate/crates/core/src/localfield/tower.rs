use serde::Serialize;

use super::algebra::{AsAlgebra, TowerElement};
use super::galois::GaloisMap;
use crate::artin_schreier::witt_d;
use crate::error::{Error, Result};
use crate::planner::{plan, PlanMode, PlanReport, TowerParams, Variant};
use crate::valuation::{ExtRational, LaurentSeries};

/// Default working precision for series inverses inside a tower:
/// `max(512, 4 b_N)`.
pub fn default_prec(report: &PlanReport) -> i64 {
    let b_n = *report.b.last().expect("a plan has at least one break") as i64;
    512.max(4 * b_n)
}

/// The explicit tower `K_0 ⊂ K_1 ⊂ .. ⊂ K_N` over `F_q((pi))` with
///
/// ```text
/// alpha_i^p - alpha_i = a_i                          (i <= 2n)
/// alpha_N^p - alpha_N = sum_(i<=n) a_i alpha_(n+i) [+ D(a_1... )] + a_N
/// ```
///
/// where `omega_i = lead_i pi^(-m_i)`, `c = pi^(-r)`,
/// `a_i = c omega_i^(p^(2n))`, and the bracketed Witt term
/// `D(alpha_1, a_1)` appears only in the metacyclic variant.
#[derive(Clone, Debug, Serialize)]
pub struct Tower {
    pub params: TowerParams,
    pub plan: PlanReport,
    #[serde(skip)]
    alg: AsAlgebra,
    #[serde(skip)]
    a: Vec<LaurentSeries>,
    #[serde(skip)]
    omega: Vec<LaurentSeries>,
    pub prec: i64,
}

impl Tower {
    /// Builds the tower. Only characteristic `p` (`e0 = inf`) is supported
    /// and the scaffold hypotheses must hold.
    pub fn build(params: &TowerParams, prec: Option<i64>) -> Result<Tower> {
        params.validate()?;
        if params.e0 != ExtRational::Infinity {
            return Err(Error::invalid("explicit towers are built in characteristic p only; use e0 = inf"));
        }
        let report = plan(params, PlanMode::Full)?;
        if !report.certified() {
            let failed: Vec<&str> = report.checks.iter().filter(|c| !c.holds).map(|c| c.id.as_str()).collect();
            return Err(Error::hypothesis(format!("scaffold hypotheses fail: {}", failed.join("; "))));
        }
        let prec = prec.unwrap_or_else(|| default_prec(&report));
        if prec <= 0 {
            return Err(Error::invalid("precision must be positive"));
        }
        let field = params.field()?;
        let n = params.n;
        let big_n = params.big_n();
        let leads = params.lead_elems()?;
        let omega: Vec<LaurentSeries> =
            leads.iter().zip(&params.m).map(|(&c, &m)| LaurentSeries::monomial(field, c, -m)).collect();
        let c = LaurentSeries::pi_pow(field, -params.r);
        let a: Vec<LaurentSeries> = omega.iter().map(|w| &c * &w.frobenius_pow(2 * n as u32)).collect();

        let p = params.p as usize;
        let mut rhs: Vec<Vec<LaurentSeries>> = (0..2 * n)
            .map(|k| {
                let mut v = vec![LaurentSeries::zero(field); p.pow(k as u32)];
                v[0] = a[k].clone();
                v
            })
            .collect();
        let lower = AsAlgebra::new(field, rhs.clone())?;
        let mut top = lower.from_series(a[big_n - 1].clone());
        for i in 1..=n {
            top = lower.add(&top, &lower.scale(&lower.gen(n + i), &a[i - 1]));
        }
        if params.variant == Variant::M {
            let a1 = lower.from_series(a[0].clone());
            top = lower.add(&top, &witt_d(&lower, &lower.gen(1), &a1));
        }
        rhs.push(top.coeffs().to_vec());
        let alg = AsAlgebra::new(field, rhs)?;
        Ok(Tower { params: params.clone(), plan: report, alg, a, omega, prec })
    }

    pub fn alg(&self) -> &AsAlgebra {
        &self.alg
    }

    /// `a_1, .., a_N` (the top one is the constant part of the last
    /// relation).
    pub fn a(&self) -> &[LaurentSeries] {
        &self.a
    }

    pub fn omega(&self) -> &[LaurentSeries] {
        &self.omega
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn big_n(&self) -> usize {
        self.params.big_n()
    }

    /// The generators `s_1, .., s_N` of `Gal(K_N/K_0)`:
    /// `s_i` adds 1 to `alpha_i` and moves `alpha_N` by a correction that
    /// keeps the last relation valid, `s_N` adds 1 to `alpha_N`.
    pub fn galois_generators(&self) -> Result<Vec<GaloisMap>> {
        let alg = &self.alg;
        let n = self.n();
        let big_n = self.big_n();
        let mut gens = Vec::with_capacity(big_n);
        for i in 1..=big_n {
            let mut images: Vec<TowerElement> = (1..=big_n).map(|k| alg.gen(k)).collect();
            let top = &mut images[big_n - 1];
            if i == big_n {
                *top = alg.add(top, &alg.one());
            } else {
                images[i - 1] = alg.add(&images[i - 1], &alg.one());
                let w = if i > n {
                    Some(alg.gen(i - n))
                } else if i == 1 && self.params.variant == Variant::M {
                    Some(witt_d(alg, &alg.one(), &alg.gen(1)))
                } else {
                    None
                };
                if let Some(w) = w {
                    images[big_n - 1] = alg.add(&images[big_n - 1], &w);
                }
            }
            gens.push(GaloisMap::new(alg, images)?);
        }
        Ok(gens)
    }

    /// The same generators restricted to the subfield `K_(2n)`.
    pub fn lower_generators(&self) -> Result<(AsAlgebra, Vec<GaloisMap>)> {
        let k = 2 * self.n();
        let lower = self.alg.truncate_levels(k);
        let gens = (1..=k)
            .map(|i| {
                let images =
                    (1..=k).map(|j| if j == i { lower.add(&lower.gen(j), &lower.one()) } else { lower.gen(j) }).collect();
                GaloisMap::new(&lower, images)
            })
            .collect::<Result<_>>()?;
        Ok((lower, gens))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::galois::{enumerate_group, relation_report};
    use crate::valuation::Rat;

    fn params(variant: Variant) -> TowerParams {
        let u = 1;
        let t = 1;
        TowerParams::new(
            3,
            1,
            variant,
            ExtRational::Infinity,
            u,
            vec![0, 0, t],
            vec!["1".into(), "g".into(), "1".into()],
            2,
        )
        .unwrap()
    }

    #[test]
    fn top_generator_valuation() {
        let tower = Tower::build(&params(Variant::H), None).unwrap();
        let v = tower.alg().valuation(&tower.alg().gen(3)).unwrap();
        assert_eq!(v, ExtRational::Finite(Rat::new(-10, 3)));
    }

    #[test]
    fn heisenberg_relations() {
        let tower = Tower::build(&params(Variant::H), None).unwrap();
        let gens = tower.galois_generators().unwrap();
        let table = enumerate_group(tower.alg(), &gens).unwrap();
        assert_eq!(table.order(), 27);
        let rel = relation_report(&table, 1);
        assert!(rel.heisenberg, "{rel:?}");
        assert!(!rel.metacyclic);
    }

    #[test]
    fn metacyclic_relations() {
        let tower = Tower::build(&params(Variant::M), None).unwrap();
        let gens = tower.galois_generators().unwrap();
        let table = enumerate_group(tower.alg(), &gens).unwrap();
        let rel = relation_report(&table, 1);
        assert!(rel.metacyclic, "{rel:?}");
        assert_eq!(rel.order_of_s1, 9);
    }

    #[test]
    fn finite_e0_is_rejected() {
        let mut p = params(Variant::H);
        p.e0 = ExtRational::int(1000);
        assert!(Tower::build(&p, None).is_err());
    }
}
