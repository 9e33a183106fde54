//! Certification of tower parameters: from `(p, n, r, m, leads, e0)` derive
//! the upper and lower ramification numbers, test the inequality system
//! that guarantees a Galois scaffold, compute its precision and state what
//! follows for the Galois module structure of the ring of integers.
//!
//! Throughout, `N = 2n + 1` and the tower constants are
//! `a_i = c * omega_i^(p^(2n))` with `c = pi^(-r)` and
//! `omega_i = lead_i * pi^(-m_i)`, so `u_i = -v(a_i) = r + p^(2n) m_i`.

use std::fmt;
use std::str::FromStr;

use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::artin_schreier::{validate_reduced_as_with, AsReport};
use crate::error::{Error, Result};
use crate::ramification::{inv_p, require_odd_prime, upper_to_lower};
use crate::valuation::{ExtRational, Fq, Rat, ResidueField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// Generalized Heisenberg group, exponent `p`.
    H,
    /// Generalized metacyclic group, exponent `p^2`.
    M,
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "H" | "h" => Ok(Variant::H),
            "M" | "m" => Ok(Variant::M),
            _ => Err(Error::invalid(format!("variant must be H or M, got {s:?}"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::H => "H",
            Variant::M => "M",
        })
    }
}

/// `Full` tests every inequality involving `e0`; `Simple` replaces them by
/// the single condition `u_N <= e0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlanMode {
    Full,
    Simple,
}

impl FromStr for PlanMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(PlanMode::Full),
            "simple" => Ok(PlanMode::Simple),
            _ => Err(Error::invalid(format!("mode must be full or simple, got {s:?}"))),
        }
    }
}

/// Tower parameters. `leads` are the leading residue coefficients of
/// `omega_1, .., omega_N` in `F_(p^d)` text notation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerParams {
    pub p: u64,
    pub n: usize,
    pub variant: Variant,
    pub e0: ExtRational,
    pub r: i64,
    pub m: Vec<i64>,
    pub leads: Vec<String>,
    pub d: u32,
}

impl TowerParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        p: u64,
        n: usize,
        variant: Variant,
        e0: ExtRational,
        r: i64,
        m: Vec<i64>,
        leads: Vec<String>,
        d: u32,
    ) -> Result<Self> {
        let params = TowerParams { p, n, variant, e0, r, m, leads, d };
        params.validate()?;
        Ok(params)
    }

    /// Checks every structural requirement on the parameters.
    pub fn validate(&self) -> Result<()> {
        require_odd_prime(self.p)?;
        if self.n == 0 {
            return Err(Error::invalid("n must be at least 1"));
        }
        let big_n = 2 * self.n + 1;
        if self.r <= 0 {
            return Err(Error::invalid("r must be positive"));
        }
        if self.r % self.p as i64 == 0 {
            return Err(Error::invalid(format!("p divides u_1 (r = {} is a multiple of p = {})", self.r, self.p)));
        }
        if self.m.len() != big_n || self.leads.len() != big_n {
            return Err(Error::invalid(format!("m and leads need {big_n} entries each")));
        }
        if self.m[0] < 0 || self.m.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::invalid("m must be nonnegative and nondecreasing"));
        }
        match self.e0 {
            ExtRational::Infinity => {}
            ExtRational::Finite(e) if e.is_integer() && e >= Rat::one() => {}
            _ => return Err(Error::invalid("e0 must be a positive integer or inf")),
        }
        if (self.d as usize) < 2 * self.n {
            return Err(Error::invalid(format!(
                "residue field of {}^{} elements is smaller than p^(2n) = {}^{}",
                self.p,
                self.d,
                self.p,
                2 * self.n
            )));
        }
        let field = self.field()?;
        let leads = self.lead_elems_in(field)?;
        if leads.iter().any(|c| c.is_zero()) {
            return Err(Error::invalid("leading coefficients must be nonzero"));
        }
        Ok(())
    }

    pub fn big_n(&self) -> usize {
        2 * self.n + 1
    }

    pub fn field(&self) -> Result<&'static ResidueField> {
        ResidueField::new(self.p, self.d)
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.d)
    }

    fn lead_elems_in(&self, field: &ResidueField) -> Result<Vec<Fq>> {
        self.leads.iter().map(|s| field.parse_elem(s)).collect()
    }

    pub fn lead_elems(&self) -> Result<Vec<Fq>> {
        self.lead_elems_in(self.field()?)
    }

    pub fn p_pow(&self, e: u32) -> i128 {
        (self.p as i128).pow(e)
    }

    /// `u_i = r + p^(2n) m_i`.
    pub fn upper(&self) -> Vec<i128> {
        let s = self.p_pow(2 * self.n as u32);
        self.m.iter().map(|&mi| self.r as i128 + s * mi as i128).collect()
    }

    /// Leading coefficients of `a_i = c omega_i^(p^(2n))`.
    pub fn a_leads(&self) -> Result<Vec<Fq>> {
        let field = self.field()?;
        Ok(self
            .lead_elems_in(field)?
            .into_iter()
            .map(|c| (0..2 * self.n).fold(c, |x, _| field.frob(x)))
            .collect())
    }
}

/// A single inequality with its slack, `rhs - lhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub holds: bool,
    pub slack: ExtRational,
}

fn strict(id: &str, lhs: Rat, rhs: ExtRational) -> Check {
    let slack = rhs - lhs;
    Check { id: id.to_string(), holds: slack > ExtRational::int(0), slack }
}

fn weak(id: &str, lhs: Rat, rhs: ExtRational) -> Check {
    let slack = rhs - lhs;
    Check { id: id.to_string(), holds: slack >= ExtRational::int(0), slack }
}

/// Scaffold precision, or `not-applicable` when the hypotheses fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cfrak {
    Value(i128),
    NotApplicable,
}

impl Cfrak {
    pub fn value(self) -> Option<i128> {
        match self {
            Cfrak::Value(c) => Some(c),
            Cfrak::NotApplicable => None,
        }
    }
}

impl Serialize for Cfrak {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cfrak::Value(c) => s.serialize_i64(*c as i64),
            Cfrak::NotApplicable => s.serialize_str("not-applicable"),
        }
    }
}

impl<'de> Deserialize<'de> for Cfrak {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(c) => Ok(Cfrak::Value(c as i128)),
            Raw::Str(s) if s == "not-applicable" => Ok(Cfrak::NotApplicable),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("bad precision value {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlanVerdict {
    ScaffoldCertified,
    HypothesesFail,
}

/// What the scaffold precision implies for the ring of integers. The
/// criteria are sufficient only, so `NoConclusion` is not a failure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GmsVerdict {
    NoConclusion,
    /// The ring of integers is free over its associated order.
    Free,
    /// Free, and the associated order is a Hopf order.
    FreeAndHopf,
}

impl fmt::Display for GmsVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GmsVerdict::NoConclusion => "no-conclusion",
            GmsVerdict::Free => "free",
            GmsVerdict::FreeAndHopf => "free-and-hopf",
        })
    }
}

/// Simple mode only: the outcome if the inequalities involving `b_N` were
/// dropped together with the `e0` inequalities, leaving `u_N <= e0` alone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlternateReading {
    pub dropped: Vec<String>,
    pub verdict: PlanVerdict,
    pub cfrak: Cfrak,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanReport {
    pub variant: Variant,
    pub mode: PlanMode,
    pub p: u64,
    pub n: usize,
    pub q: u64,
    pub e0: ExtRational,
    pub u: Vec<i128>,
    pub b: Vec<i128>,
    pub as_report: AsReport,
    pub checks: Vec<Check>,
    pub cfrak: Cfrak,
    pub verdict: PlanVerdict,
    pub gms: Option<GmsVerdict>,
    pub alternate_reading: Option<AlternateReading>,
}

impl PlanReport {
    pub fn certified(&self) -> bool {
        self.verdict == PlanVerdict::ScaffoldCertified
    }
}

const B_ID_SUM: &str = "p^(2n) (u_n + u_2n) < b_N";
const B_ID_U1: &str = "p^(2n+1) u_1 < b_N";

/// Evaluates the scaffold hypotheses for `params` and, when they hold, the
/// scaffold precision and module-structure verdict.
pub fn plan(params: &TowerParams, mode: PlanMode) -> Result<PlanReport> {
    params.validate()?;
    let p = params.p;
    let n = params.n;
    let big_n = params.big_n();
    let u = params.upper();
    let u_rat: Vec<Rat> = u.iter().map(|&x| Rat::from_integer(x)).collect();
    let b_rat = upper_to_lower(p, &u_rat)?;
    let b: Vec<i128> = b_rat.iter().map(|x| x.to_integer()).collect();
    let modulus = params.p_pow(big_n as u32);
    if b.iter().any(|&bi| (bi - b[0]).rem_euclid(modulus) != 0) {
        return Err(Error::consistency("lower numbers are not congruent mod p^N"));
    }

    let field = params.field()?;
    let a_vals: Vec<i64> = u[..2 * n].iter().map(|&x| -(x as i64)).collect();
    let a_leads = params.a_leads()?;
    let as_report = validate_reduced_as_with(p, params.e0, field, &a_vals, &a_leads[..2 * n])?;

    let ip = inv_p(p);
    let one = Rat::one();
    let (un, u2n, un_top, u1) = (u_rat[n - 1], u_rat[2 * n - 1], u_rat[big_n - 1], u_rat[0]);
    let bn = b_rat[big_n - 1];
    let pp = |e: u32| Rat::from_integer(params.p_pow(e));
    let e0 = params.e0;
    let b_rat_big = ExtRational::Finite(bn);

    let mut checks = vec![];
    match mode {
        PlanMode::Full => {
            checks.push(strict("u_n + (1-1/p) u_2n < e0", un + (one - ip) * u2n, e0));
            checks.push(strict(
                "u_n/p + u_2n/p^2 + (1-1/p) u_N < e0",
                ip * un + ip * ip * u2n + (one - ip) * un_top,
                e0,
            ));
            if params.variant == Variant::M {
                checks.push(strict(
                    "(1-1/p+1/p^2) u_1 + (1-1/p) u_N < e0",
                    (one - ip + ip * ip) * u1 + (one - ip) * un_top,
                    e0,
                ));
            }
            checks.push(strict("u_2n < e0", u2n, e0));
            checks.push(strict("u_N - b_N/p^(2n+1) < e0", un_top - bn / pp(big_n as u32), e0));
        }
        PlanMode::Simple => checks.push(weak("u_N <= e0", un_top, e0)),
    }
    checks.push(strict(B_ID_SUM, pp(2 * n as u32) * (un + u2n), b_rat_big));
    if params.variant == Variant::M {
        checks.push(strict(B_ID_U1, pp(big_n as u32) * u1, b_rat_big));
    }

    let mut terms = vec![ExtRational::Finite(bn - pp(2 * n as u32) * (un + u2n))];
    if params.variant == Variant::M {
        terms.push(ExtRational::Finite(bn - pp(big_n as u32) * u1));
    }
    if mode == PlanMode::Full {
        let e_term = match e0 {
            ExtRational::Infinity => ExtRational::Infinity,
            ExtRational::Finite(e) => ExtRational::Finite(pp(big_n as u32) * (e - un_top) + bn),
        };
        terms.push(e_term);
    }
    let c_value = terms.iter().min().copied().expect("at least one term");
    let c_int = c_value.as_integer().ok_or_else(|| Error::consistency(format!("scaffold precision {c_value} is not an integer")))?;

    let all_hold = checks.iter().all(|c| c.holds) && as_report.all_hold();
    let certified = all_hold && c_int >= 1;
    let (cfrak, verdict, gms) = if certified {
        let g = gms_verdict(p, n, c_int, u[0])?;
        (Cfrak::Value(c_int), PlanVerdict::ScaffoldCertified, Some(g))
    } else {
        (Cfrak::NotApplicable, PlanVerdict::HypothesesFail, None)
    };

    let alternate_reading = (mode == PlanMode::Simple).then(|| {
        let kept_ok = checks.iter().filter(|c| c.id == "u_N <= e0").all(|c| c.holds) && as_report.all_hold();
        let ok = kept_ok && c_int >= 1;
        let mut dropped = vec![B_ID_SUM.to_string()];
        if params.variant == Variant::M {
            dropped.push(B_ID_U1.to_string());
        }
        AlternateReading {
            dropped,
            verdict: if ok { PlanVerdict::ScaffoldCertified } else { PlanVerdict::HypothesesFail },
            cfrak: if ok { Cfrak::Value(c_int) } else { Cfrak::NotApplicable },
        }
    });

    Ok(PlanReport {
        variant: params.variant,
        mode,
        p,
        n,
        q: params.q(),
        e0,
        u,
        b,
        as_report,
        checks,
        cfrak,
        verdict,
        gms,
        alternate_reading,
    })
}

/// Module-structure verdict from the scaffold precision `cfrak` and `u_1`.
/// With `rho = u_1 mod p^N`:
///
/// * free and Hopf if `cfrak >= 2 p^N - 1` and `rho = p^N - 1`;
/// * free if `cfrak >= rho` and `rho | p^m - 1` for some `1 <= m <= N`;
/// * otherwise no conclusion.
pub fn gms_verdict(p: u64, n: usize, cfrak: i128, u1: i128) -> Result<GmsVerdict> {
    require_odd_prime(p)?;
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    if cfrak < 1 {
        return Err(Error::invalid(format!("scaffold precision must be at least 1, got {cfrak}")));
    }
    let big_n = 2 * n as u32 + 1;
    let pn = (p as i128).pow(big_n);
    let rho = u1.rem_euclid(pn);
    if cfrak >= 2 * pn - 1 && rho == pn - 1 {
        return Ok(GmsVerdict::FreeAndHopf);
    }
    let divides = rho != 0 && (1..=big_n).any(|m| ((p as i128).pow(m) - 1) % rho == 0);
    if cfrak >= rho && divides {
        return Ok(GmsVerdict::Free);
    }
    Ok(GmsVerdict::NoConclusion)
}

/// Leading coefficients `1, x, .., x^(2n-1), 1` where `x` is the power-basis
/// generator of `F_(p^(2n))`; the first `2n` are `F_p`-independent.
pub fn independent_leads(p: u64, n: usize) -> Result<Vec<String>> {
    let field = ResidueField::new(p, 2 * n as u32)?;
    let mut leads: Vec<String> = (0..2 * n)
        .map(|i| {
            let mut c = vec![0u64; 2 * n];
            c[i] = 1;
            field.format_elem(field.from_coords(&c))
        })
        .collect();
    leads.push("1".to_string());
    Ok(leads)
}

/// The family with `u_1 = .. = u_2n = u` and `u_N = t p^(2n) + u`, over
/// `F_(p^(2n))`, planned in simple mode at the smallest admissible
/// `e0 = u_N`. Checks the closed forms
/// `c_H = t p^(4n) + u - 2 u p^(2n)` and `c_M = t p^(4n) + u - u p^(2n+1)`
/// against the general precision formula.
pub fn example_family(p: u64, n: usize, u: i64, t: i64, variant: Variant) -> Result<PlanReport> {
    if u < 1 || t < 1 {
        return Err(Error::invalid("u and t must be positive"));
    }
    let mut m = vec![0i64; 2 * n + 1];
    m[2 * n] = t;
    let pi = p as i128;
    let u_top = t as i128 * pi.pow(2 * n as u32) + u as i128;
    let params = TowerParams::new(
        p,
        n,
        variant,
        ExtRational::int(u_top),
        u,
        m,
        independent_leads(p, n)?,
        2 * n as u32,
    )?;
    let report = plan(&params, PlanMode::Simple)?;
    if let Cfrak::Value(c) = report.cfrak {
        let closed = match variant {
            Variant::H => t as i128 * pi.pow(4 * n as u32) + u as i128 - 2 * u as i128 * pi.pow(2 * n as u32),
            Variant::M => t as i128 * pi.pow(4 * n as u32) + u as i128 - u as i128 * pi.pow(2 * n as u32 + 1),
        };
        if closed != c {
            return Err(Error::consistency(format!("closed-form precision {closed} differs from computed {c}")));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(variant: Variant, e0: &str) -> TowerParams {
        TowerParams::new(
            3,
            1,
            variant,
            e0.parse().unwrap(),
            1,
            vec![0, 0, 1],
            vec!["1".into(), "g".into(), "1".into()],
            2,
        )
        .unwrap()
    }

    #[test]
    fn heisenberg_unit_family() {
        let r = plan(&params(Variant::H, "inf"), PlanMode::Full).unwrap();
        assert_eq!(r.u, vec![1, 1, 10]);
        assert_eq!(r.b, vec![1, 1, 82]);
        assert!(r.checks.iter().all(|c| c.holds));
        assert_eq!(r.cfrak, Cfrak::Value(64));
        assert_eq!(r.gms, Some(GmsVerdict::Free));
    }

    #[test]
    fn metacyclic_unit_family() {
        let r = plan(&params(Variant::M, "inf"), PlanMode::Full).unwrap();
        assert_eq!(r.cfrak, Cfrak::Value(55));
        assert_eq!(r.gms, Some(GmsVerdict::Free));
    }

    #[test]
    fn simple_mode_at_equality() {
        let r = plan(&params(Variant::H, "10"), PlanMode::Simple).unwrap();
        let c = r.checks.iter().find(|c| c.id == "u_N <= e0").unwrap();
        assert!(c.holds);
        assert_eq!(c.slack, ExtRational::int(0));
        assert_eq!(r.cfrak, Cfrak::Value(64));
        let full = plan(&params(Variant::H, "10"), PlanMode::Full).unwrap();
        assert!(full.certified());
        assert_eq!(full.cfrak, Cfrak::Value(64));
    }

    #[test]
    fn small_e0_fails() {
        let r = plan(&params(Variant::H, "9"), PlanMode::Simple).unwrap();
        assert_eq!(r.verdict, PlanVerdict::HypothesesFail);
        assert_eq!(r.cfrak, Cfrak::NotApplicable);
        assert_eq!(r.gms, None);
    }

    #[test]
    fn rejects_r_divisible_by_p() {
        let e = TowerParams::new(3, 1, Variant::H, ExtRational::Infinity, 3, vec![0, 0, 1], vec!["1".into(), "g".into(), "1".into()], 2)
            .unwrap_err();
        assert!(e.to_string().contains("p divides u_1"));
    }

    #[test]
    fn rejects_small_residue_field() {
        assert!(TowerParams::new(3, 1, Variant::H, ExtRational::Infinity, 1, vec![0, 0, 1], vec!["1".into(), "2".into(), "1".into()], 1).is_err());
    }

    #[test]
    fn dependent_leads_fail_certification() {
        let p = TowerParams::new(3, 1, Variant::H, ExtRational::Infinity, 1, vec![0, 0, 1], vec!["1".into(), "2".into(), "1".into()], 2).unwrap();
        let r = plan(&p, PlanMode::Full).unwrap();
        assert!(!r.certified());
    }

    #[test]
    fn gms_examples() {
        assert_eq!(gms_verdict(3, 1, 64, 1).unwrap(), GmsVerdict::Free);
        assert_eq!(gms_verdict(3, 1, 125, 26).unwrap(), GmsVerdict::FreeAndHopf);
        assert_eq!(gms_verdict(3, 1, 64, 5).unwrap(), GmsVerdict::NoConclusion);
        assert!(gms_verdict(3, 1, 0, 1).is_err());
    }

    #[test]
    fn family_examples() {
        let r = example_family(3, 1, 1, 1, Variant::H).unwrap();
        assert_eq!((r.cfrak, r.gms), (Cfrak::Value(64), Some(GmsVerdict::Free)));
        let r = example_family(3, 1, 26, 7, Variant::H).unwrap();
        assert_eq!(r.b[2], 593);
        assert_eq!((r.cfrak, r.gms), (Cfrak::Value(125), Some(GmsVerdict::FreeAndHopf)));
        let r = example_family(3, 1, 26, 10, Variant::M).unwrap();
        assert_eq!(r.b[2], 836);
        assert_eq!((r.cfrak, r.gms), (Cfrak::Value(134), Some(GmsVerdict::FreeAndHopf)));
    }

    #[test]
    fn report_json_round_trip() {
        let r = plan(&params(Variant::M, "10"), PlanMode::Simple).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        let back: PlanReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }
}
