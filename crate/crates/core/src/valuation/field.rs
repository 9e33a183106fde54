use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};

/// Element of a [`ResidueField`], encoded as `sum c_i p^i` where
/// `c_0 + c_1 x + ... + c_{d-1} x^{d-1}` is its power-basis representative.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fq(pub u16);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// The finite field `F_p[x]/(modulus)` with `p` in `{3, 5, 7}` and degree at
/// most 4. All arithmetic is table driven.
///
/// Fields are interned: [`ResidueField::new`] returns a `'static` reference
/// and two calls with the same modulus return the same reference.
pub struct ResidueField {
    p: u16,
    d: u32,
    q: u16,
    /// Coefficients `c_0..c_{d-1}` of the monic modulus (leading 1 omitted).
    modulus: Vec<u16>,
    generator: Fq,
    add: Vec<u16>,
    neg: Vec<u16>,
    /// `exp[j] = g^j` for `0 <= j < 2(q-1)`, doubled to skip a reduction.
    exp: Vec<u16>,
    log: Vec<u32>,
    frob: Vec<u16>,
}

type FieldKey = (u16, u32, Vec<u16>);

fn registry() -> &'static Mutex<HashMap<FieldKey, &'static ResidueField>> {
    static REG: OnceLock<Mutex<HashMap<FieldKey, &'static ResidueField>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

impl ResidueField {
    /// The field of `p^d` elements with the default modulus: the first monic
    /// irreducible polynomial of degree `d`, in lexicographic order of the
    /// encoded low coefficients, whose root is a multiplicative generator.
    pub fn new(p: u64, d: u32) -> Result<&'static ResidueField> {
        Self::check_size(p, d)?;
        let p = p as u16;
        let count = (p as u32).pow(d);
        for code in 0..count {
            let m = digits(code, p, d);
            if is_irreducible(&m, p) && x_is_primitive(&m, p) {
                return Self::with_modulus_unchecked(p, d, m);
            }
        }
        unreachable!("every finite field has a primitive polynomial")
    }

    /// The field `F_p[x]/(m)` for a user-supplied monic modulus given by its
    /// low coefficients `m_0..m_{d-1}`. Fails unless `m` is irreducible.
    pub fn with_modulus(p: u64, modulus: &[u64]) -> Result<&'static ResidueField> {
        let d = modulus.len() as u32;
        Self::check_size(p, d)?;
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::invalid("modulus coefficients must lie in 0..p"));
        }
        let p16 = p as u16;
        let m: Vec<u16> = modulus.iter().map(|&c| c as u16).collect();
        if !is_irreducible(&m, p16) {
            return Err(Error::invalid(format!(
                "modulus {} is reducible over F_{p}",
                poly_text(&m)
            )));
        }
        Self::with_modulus_unchecked(p16, d, m)
    }

    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<&'static ResidueField> {
        Self::new(p, 1)
    }

    fn check_size(p: u64, d: u32) -> Result<()> {
        if ![3, 5, 7].contains(&p) {
            return Err(Error::invalid(format!("residue characteristic must be 3, 5 or 7, got {p}")));
        }
        if !(1..=4).contains(&d) {
            return Err(Error::invalid(format!("residue degree must be in 1..=4, got {d}")));
        }
        Ok(())
    }

    fn with_modulus_unchecked(p: u16, d: u32, m: Vec<u16>) -> Result<&'static ResidueField> {
        let key = (p, d, m.clone());
        let mut reg = registry().lock().expect("field registry poisoned");
        if let Some(f) = reg.get(&key) {
            return Ok(f);
        }
        let field: &'static ResidueField = Box::leak(Box::new(Self::build(p, d, m)));
        reg.insert(key, field);
        Ok(field)
    }

    fn build(p: u16, d: u32, m: Vec<u16>) -> ResidueField {
        let q = p.pow(d);
        let qs = q as usize;
        let mut add = vec![0u16; qs * qs];
        for a in 0..q {
            let da = digits(a as u32, p, d);
            for b in 0..q {
                let db = digits(b as u32, p, d);
                let s: Vec<u16> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a as usize * qs + b as usize] = encode(&s, p);
            }
        }
        let neg = (0..q)
            .map(|a| {
                let s: Vec<u16> = digits(a as u32, p, d).iter().map(|x| (p - x) % p).collect();
                encode(&s, p)
            })
            .collect();

        let slow_mul = |a: u16, b: u16| encode(&poly_mulmod(&digits(a as u32, p, d), &digits(b as u32, p, d), &m, p), p);
        let order = |a: u16| {
            let mut x = a;
            let mut k = 1u32;
            while x != 1 {
                x = slow_mul(x, a);
                k += 1;
            }
            k
        };
        let generator = (1..q).find(|&a| order(a) == q as u32 - 1).expect("multiplicative group is cyclic");

        let mut exp = vec![0u16; 2 * (qs - 1)];
        let mut log = vec![0u32; qs];
        let mut x = 1u16;
        for j in 0..qs - 1 {
            exp[j] = x;
            exp[j + qs - 1] = x;
            log[x as usize] = j as u32;
            x = slow_mul(x, generator);
        }
        let mut field = ResidueField {
            p,
            d,
            q,
            modulus: m,
            generator: Fq(generator),
            add,
            neg,
            exp,
            log,
            frob: vec![],
        };
        field.frob = (0..q).map(|a| field.pow(Fq(a), p as u64).0).collect();
        field
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn q(&self) -> u64 {
        self.q as u64
    }

    /// Low coefficients of the monic modulus.
    pub fn modulus(&self) -> Vec<u64> {
        self.modulus.iter().map(|&c| c as u64).collect()
    }

    /// The least multiplicative generator in the encoding order; `x` itself
    /// when the modulus is primitive.
    pub fn generator(&self) -> Fq {
        self.generator
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.q).map(Fq)
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        Fq(self.add[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        Fq(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a.0 == 0 || b.0 == 0 {
            return Fq::ZERO;
        }
        Fq(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: Fq) -> Option<Fq> {
        if a.is_zero() {
            return None;
        }
        let qm1 = self.q as u32 - 1;
        Some(Fq(self.exp[((qm1 - self.log[a.0 as usize]) % qm1) as usize]))
    }

    pub fn pow(&self, a: Fq, e: u64) -> Fq {
        if e == 0 {
            return Fq::ONE;
        }
        if a.is_zero() {
            return Fq::ZERO;
        }
        let qm1 = self.q as u64 - 1;
        let j = (self.log[a.0 as usize] as u64 * (e % qm1)) % qm1;
        Fq(self.exp[j as usize])
    }

    /// `a^p`.
    #[inline]
    pub fn frob(&self, a: Fq) -> Fq {
        Fq(self.frob[a.0 as usize])
    }

    /// `g^j` for the distinguished generator `g`.
    pub fn gen_pow(&self, j: i64) -> Fq {
        let qm1 = self.q as i64 - 1;
        Fq(self.exp[j.rem_euclid(qm1) as usize])
    }

    /// Discrete log base the generator, `None` for zero.
    pub fn log(&self, a: Fq) -> Option<u32> {
        (!a.is_zero()).then(|| self.log[a.0 as usize])
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.p as i64) as u16)
    }

    /// Power-basis coordinates `c_0..c_{d-1}` over `F_p`.
    pub fn coords(&self, a: Fq) -> Vec<u64> {
        digits(a.0 as u32, self.p, self.d).into_iter().map(|c| c as u64).collect()
    }

    pub fn from_coords(&self, c: &[u64]) -> Fq {
        assert!(c.len() <= self.d as usize);
        let c: Vec<u16> = c.iter().map(|&x| (x % self.p as u64) as u16).collect();
        Fq(encode(&c, self.p))
    }

    /// Whether `a` lies in the prime subfield.
    pub fn in_prime_field(&self, a: Fq) -> bool {
        a.0 < self.p
    }

    /// `out[i + j] += a[i] * b[j]` for all `i + j < out.len()`.
    pub(crate) fn convolve_into(&self, out: &mut [Fq], a: &[Fq], b: &[Fq]) {
        let qs = self.q as usize;
        let blog: Vec<u32> = b.iter().map(|x| if x.is_zero() { u32::MAX } else { self.log[x.0 as usize] }).collect();
        for (i, &x) in a.iter().enumerate() {
            if x.is_zero() || i >= out.len() {
                continue;
            }
            let la = self.log[x.0 as usize];
            let end = blog.len().min(out.len() - i);
            let row = &mut out[i..i + end];
            for (o, &lb) in row.iter_mut().zip(&blog[..end]) {
                if lb != u32::MAX {
                    let prod = self.exp[(la + lb) as usize];
                    o.0 = self.add[o.0 as usize * qs + prod as usize];
                }
            }
        }
    }

    /// Rank over `F_p` of the given elements.
    pub fn rank_over_prime_field(&self, elems: &[Fq]) -> usize {
        let rows: Vec<Vec<u64>> = elems.iter().map(|&a| self.coords(a)).collect();
        rank_mod_p(rows, self.p as u64)
    }
}

impl PartialEq for ResidueField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for ResidueField {}

impl fmt::Debug for ResidueField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[x]/({})", self.p, poly_text(&self.modulus))
    }
}

/// Row rank of an integer matrix reduced mod `p`.
pub(crate) fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    for r in rows.iter_mut() {
        for x in r.iter_mut() {
            *x %= p;
        }
    }
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = mod_inv(rows[rank][col], p);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows.len() {
            if i != rank && rows[i][col] != 0 {
                let f = rows[i][col];
                for c in 0..ncols {
                    rows[i][c] = (rows[i][c] + p * p - f * rows[rank][c]) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mod_inv(a: u64, p: u64) -> u64 {
    (1..p).find(|&x| a * x % p == 1).expect("nonzero mod prime")
}

fn digits(mut code: u32, p: u16, d: u32) -> Vec<u16> {
    let mut out = Vec::with_capacity(d as usize);
    for _ in 0..d {
        out.push((code % p as u32) as u16);
        code /= p as u32;
    }
    out
}

fn encode(c: &[u16], p: u16) -> u16 {
    c.iter().rev().fold(0u16, |acc, &x| acc * p + x)
}

fn poly_text(m: &[u16]) -> String {
    let mut terms = vec![format!("x^{}", m.len())];
    for (i, &c) in m.iter().enumerate().rev() {
        if c != 0 {
            terms.push(match i {
                0 => format!("{c}"),
                1 => format!("{c}x"),
                _ => format!("{c}x^{i}"),
            });
        }
    }
    terms.join(" + ")
}

/// Product of two residues modulo the monic polynomial `x^d + m(x)`.
fn poly_mulmod(a: &[u16], b: &[u16], m: &[u16], p: u16) -> Vec<u16> {
    let d = m.len();
    let mut prod = vec![0u32; 2 * d];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] += x as u32 * y as u32;
        }
    }
    let p32 = p as u32;
    for k in (d..2 * d).rev() {
        let c = prod[k] % p32;
        prod[k] = 0;
        if c != 0 {
            // x^k = x^{k-d} * x^d = -x^{k-d} m(x)
            for (i, &mi) in m.iter().enumerate() {
                prod[k - d + i] += (p32 - c) * mi as u32;
            }
        }
    }
    prod[..d].iter().map(|&c| (c % p32) as u16).collect()
}

/// Remainder of monic `x^d + m(x)` by the monic polynomial `f` (full
/// coefficient list, leading 1 last), over `F_p`.
fn divides(f: &[u16], m: &[u16], p: u16) -> bool {
    let mut r: Vec<u32> = m.iter().map(|&c| c as u32).collect();
    r.push(1);
    let p32 = p as u32;
    let df = f.len() - 1;
    for k in (df..r.len()).rev() {
        let c = r[k] % p32;
        if c != 0 {
            for (i, &fi) in f.iter().enumerate() {
                r[k - df + i] = (r[k - df + i] + (p32 - c) * fi as u32) % p32;
            }
        }
    }
    r[..df].iter().all(|&c| c % p32 == 0)
}

fn is_irreducible(m: &[u16], p: u16) -> bool {
    let d = m.len() as u32;
    for k in 1..=d / 2 {
        for code in 0..(p as u32).pow(k) {
            let mut f = digits(code, p, k);
            f.push(1);
            if divides(&f, m, p) {
                return false;
            }
        }
    }
    true
}

fn x_is_primitive(m: &[u16], p: u16) -> bool {
    let d = m.len() as u32;
    let q = (p as u32).pow(d);
    let mut x = vec![0u16; d as usize];
    if d == 1 {
        x[0] = (p - m[0]) % p;
    } else {
        x[1] = 1;
    }
    let mut acc = x.clone();
    let one = {
        let mut v = vec![0u16; d as usize];
        v[0] = 1;
        v
    };
    for k in 1..q - 1 {
        if acc == one {
            return k == q - 1;
        }
        acc = poly_mulmod(&acc, &x, m, p);
    }
    acc == one
}
