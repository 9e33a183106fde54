//! Lower/upper ramification numbers of totally ramified `p`-power extensions
//! and the digit-shift tables `b(s)`, `a(t)` used to state scaffold
//! precision.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::valuation::{rat_serde, Rat};

pub fn is_odd_prime(p: u64) -> bool {
    p >= 3 && p % 2 == 1 && (3..).step_by(2).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

pub(crate) fn require_odd_prime(p: u64) -> Result<()> {
    if is_odd_prime(p) {
        Ok(())
    } else {
        Err(Error::invalid(format!("p must be an odd prime, got {p}")))
    }
}

fn rat_pow(p: u64, e: u32) -> Rat {
    Rat::from_integer((p as i128).pow(e))
}

fn check_monotone(seq: &[Rat], what: &str) -> Result<()> {
    if seq.is_empty() {
        return Err(Error::invalid(format!("{what} sequence is empty")));
    }
    if !seq[0].is_positive() {
        return Err(Error::invalid(format!("{what} ramification numbers must be positive")));
    }
    if seq.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid(format!("{what} ramification numbers must be nondecreasing")));
    }
    Ok(())
}

/// Upper numbers from lower numbers: `u_1 = b_1`,
/// `u_{i+1} = u_i + p^{-i} (b_{i+1} - b_i)`.
pub fn lower_to_upper(p: u64, b: &[Rat]) -> Result<Vec<Rat>> {
    require_odd_prime(p)?;
    check_monotone(b, "lower")?;
    let mut u = vec![b[0]];
    for i in 1..b.len() {
        let prev = u[i - 1];
        u.push(prev + (b[i] - b[i - 1]) / rat_pow(p, i as u32));
    }
    Ok(u)
}

/// Lower numbers from upper numbers: `b_{i+1} = b_i + p^i (u_{i+1} - u_i)`.
pub fn upper_to_lower(p: u64, u: &[Rat]) -> Result<Vec<Rat>> {
    require_odd_prime(p)?;
    check_monotone(u, "upper")?;
    let mut b = vec![u[0]];
    for i in 1..u.len() {
        let prev = b[i - 1];
        b.push(prev + (u[i] - u[i - 1]) * rat_pow(p, i as u32));
    }
    Ok(b)
}

/// Matched lower and upper ramification numbers of a degree `p^n`
/// extension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamSequence {
    pub p: u64,
    pub n: usize,
    #[serde(with = "rat_serde::vec")]
    pub lower: Vec<Rat>,
    #[serde(with = "rat_serde::vec")]
    pub upper: Vec<Rat>,
}

impl RamSequence {
    pub fn from_lower(p: u64, lower: Vec<Rat>) -> Result<Self> {
        let upper = lower_to_upper(p, &lower)?;
        Ok(RamSequence { p, n: lower.len(), lower, upper })
    }

    pub fn from_upper(p: u64, upper: Vec<Rat>) -> Result<Self> {
        let lower = upper_to_lower(p, &upper)?;
        Ok(RamSequence { p, n: upper.len(), lower, upper })
    }
}

/// One inequality instance with its slack (right side minus left side).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamCheck {
    pub id: String,
    pub holds: bool,
    #[serde(with = "rat_serde")]
    pub slack: Rat,
}

/// Checks every instance of
///
/// * `b_{i+1} - b_i <= p^m (u_{i+1} - u_i)` for `1 <= i <= m <= n - 1`,
/// * `b_j - b_i <= p^{j-1} (u_j - u_i)` for `1 <= i <= j <= n`,
/// * `b_j <= p^{j-1} u_j`, with equality exactly when `j = 1`.
///
/// Fails if `(b, u)` are not related by [`lower_to_upper`].
pub fn check_ram_inequalities(p: u64, b: &[Rat], u: &[Rat]) -> Result<Vec<RamCheck>> {
    let expected = lower_to_upper(p, b)?;
    if expected != u {
        let show = |v: &[Rat]| v.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",");
        return Err(Error::invalid(format!(
            "lower numbers ({}) correspond to upper numbers ({}), not ({})",
            show(b),
            show(&expected),
            show(u)
        )));
    }
    let n = b.len();
    let mut out = vec![];
    for i in 1..n {
        for m in i..n {
            let slack = rat_pow(p, m as u32) * (u[i] - u[i - 1]) - (b[i] - b[i - 1]);
            out.push(RamCheck { id: format!("step({i},{m})"), holds: !slack.is_negative(), slack });
        }
    }
    for j in 1..=n {
        for i in 1..=j {
            let slack = rat_pow(p, j as u32 - 1) * (u[j - 1] - u[i - 1]) - (b[j - 1] - b[i - 1]);
            out.push(RamCheck { id: format!("diff({i},{j})"), holds: !slack.is_negative(), slack });
        }
    }
    for j in 1..=n {
        let slack = rat_pow(p, j as u32 - 1) * u[j - 1] - b[j - 1];
        let holds = if j == 1 { slack.is_zero() } else { slack.is_positive() };
        out.push(RamCheck { id: format!("bound({j})"), holds, slack });
    }
    Ok(out)
}

/// The tables of `b(s) = sum_{i=1}^n s_(n-i) p^(n-i) b_i` on
/// `S = {0, .., p^n - 1}` and of its shifted inverse `a`, the inverse of
/// `s -> (-b(s) mod p^n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftTables {
    pub p: u64,
    pub n: usize,
    pub b: Vec<i64>,
    pub bfrak: Vec<i64>,
    pub afrak: Vec<u64>,
}

impl ShiftTables {
    pub fn build(p: u64, n: usize, b: &[i64]) -> Result<Self> {
        require_odd_prime(p)?;
        if n == 0 || b.len() != n {
            return Err(Error::invalid(format!("expected {n} lower numbers, got {}", b.len())));
        }
        if b.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::invalid("lower numbers must be nondecreasing"));
        }
        let size = (p as u128)
            .checked_pow(n as u32)
            .filter(|&s| s <= 1 << 24)
            .ok_or_else(|| Error::invalid(format!("p^n = {p}^{n} is too large to tabulate")))? as i64;
        let pi = p as i64;
        if let Some(bad) = b.iter().find(|&&x| x.rem_euclid(pi) == 0) {
            return Err(Error::invalid(format!("p divides the lower number {bad}")));
        }
        if let Some(bad) = b.iter().find(|&&x| (x - b[0]).rem_euclid(size) != 0) {
            return Err(Error::invalid(format!("{bad} is not congruent to b_1 = {} mod p^n", b[0])));
        }
        let mut bfrak = Vec::with_capacity(size as usize);
        for s in 0..size {
            let mut acc = 0i64;
            let mut rest = s;
            // digit s_(k) multiplies p^k b_{n-k}
            for k in 0..n {
                let digit = rest % pi;
                rest /= pi;
                acc += digit * pi.pow(k as u32) * b[n - 1 - k];
            }
            bfrak.push(acc);
        }
        let mut afrak = vec![u64::MAX; size as usize];
        for (s, &v) in bfrak.iter().enumerate() {
            let t = (-v).rem_euclid(size) as usize;
            if afrak[t] != u64::MAX {
                return Err(Error::consistency("s -> -b(s) mod p^n is not injective"));
            }
            afrak[t] = s as u64;
        }
        Ok(ShiftTables { p, n, b: b.to_vec(), bfrak, afrak })
    }

    pub fn size(&self) -> i64 {
        self.bfrak.len() as i64
    }

    /// The least nonnegative residue of `t` mod `p^n`.
    pub fn r(&self, t: i64) -> i64 {
        t.rem_euclid(self.size())
    }

    pub fn bfrak(&self, s: i64) -> i64 {
        self.bfrak[s as usize]
    }

    /// `a(t) = a(r(t))` for every integer `t`.
    pub fn afrak(&self, t: i64) -> i64 {
        self.afrak[self.r(t) as usize] as i64
    }
}

/// `1/p` as a rational, a convenience for inequality arithmetic.
pub(crate) fn inv_p(p: u64) -> Rat {
    Rat::one() / Rat::from_integer(p as i128)
}
