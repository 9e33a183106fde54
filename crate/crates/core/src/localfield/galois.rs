use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::algebra::{AsAlgebra, TowerElement};
use crate::artin_schreier::wp;
use crate::error::{Error, Result};

/// A `K_0`-algebra endomorphism of an [`AsAlgebra`], given by the images of
/// the generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaloisMap {
    images: Vec<TowerElement>,
}

impl GaloisMap {
    /// Builds the map and checks that every relation is respected:
    /// `wp(sigma(alpha_k)) == sigma(rhs_k)` exactly.
    pub fn new(alg: &AsAlgebra, images: Vec<TowerElement>) -> Result<Self> {
        if images.len() != alg.levels() {
            return Err(Error::invalid(format!("need {} generator images, got {}", alg.levels(), images.len())));
        }
        let map = GaloisMap { images };
        for k in 1..=alg.levels() {
            let lhs = wp(alg, &map.images[k - 1]);
            let rhs = map.apply(alg, &alg.relation_rhs(k));
            if !alg.sub(&lhs, &rhs).is_zero() {
                return Err(Error::consistency(format!("image of alpha_{k} is not a root of its relation")));
            }
        }
        Ok(map)
    }

    pub fn identity(alg: &AsAlgebra) -> Self {
        GaloisMap { images: (1..=alg.levels()).map(|k| alg.gen(k)).collect() }
    }

    pub fn images(&self) -> &[TowerElement] {
        &self.images
    }

    pub fn is_identity(&self, alg: &AsAlgebra) -> bool {
        *self == Self::identity(alg)
    }

    /// `sigma(x)`.
    pub fn apply(&self, alg: &AsAlgebra, x: &TowerElement) -> TowerElement {
        let p = alg.p();
        // powers[k][e] = sigma(alpha_(k+1))^e
        let mut powers: Vec<Vec<TowerElement>> = Vec::with_capacity(alg.levels());
        for img in &self.images {
            let mut row = vec![alg.one(), img.clone()];
            for e in 2..p {
                let next = alg.mul(&row[e - 1], img);
                row.push(next);
            }
            powers.push(row);
        }
        self.apply_level(alg, &powers, alg.levels(), x.coeffs())
    }

    fn apply_level(&self, alg: &AsAlgebra, powers: &[Vec<TowerElement>], k: usize, x: &[crate::valuation::LaurentSeries]) -> TowerElement {
        if k == 0 {
            return alg.from_series(x[0].clone());
        }
        let p = alg.p();
        let s = x.len() / p;
        let mut acc = alg.zero();
        for j in 0..p {
            let blk = &x[j * s..(j + 1) * s];
            if blk.iter().all(|c| c.is_exact_zero()) {
                continue;
            }
            let inner = self.apply_level(alg, powers, k - 1, blk);
            let term = if j == 0 { inner } else { alg.mul(&inner, &powers[k - 1][j]) };
            acc = alg.add(&acc, &term);
        }
        acc
    }
}

/// `a o b`: first `b`, then `a`.
pub fn compose(alg: &AsAlgebra, a: &GaloisMap, b: &GaloisMap) -> GaloisMap {
    GaloisMap { images: b.images.iter().map(|img| a.apply(alg, img)).collect() }
}

/// `sigma^e`.
pub fn map_pow(alg: &AsAlgebra, sigma: &GaloisMap, e: u32) -> GaloisMap {
    (0..e).fold(GaloisMap::identity(alg), |acc, _| compose(alg, &acc, sigma))
}

/// A group element with its normal-form word: `word[i]` is the exponent of
/// the `(i+1)`-th generator in `s_1^w_1 o s_2^w_2 o .. o s_N^w_N`.
#[derive(Clone, Debug)]
pub struct GroupElement {
    pub word: Vec<u32>,
    pub map: GaloisMap,
}

/// All normal-form words in the generators together with the full
/// multiplication table. Element `0` is the identity.
#[derive(Clone, Debug)]
pub struct GroupTable {
    pub p: u32,
    pub elements: Vec<GroupElement>,
    /// `cayley[i][j]` is the index of `elements[i] o elements[j]`.
    pub cayley: Vec<Vec<u32>>,
    /// SHA-256 of the multiplication table.
    pub digest: String,
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of_word(&self, word: &[u32]) -> usize {
        word.iter().rev().fold(0usize, |acc, &e| acc * self.p as usize + e as usize)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.cayley[a][b] as usize
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.cayley[a].iter().position(|&c| c == 0).expect("every element of a finite group has an inverse")
    }

    pub fn pow(&self, a: usize, e: u32) -> usize {
        (0..e).fold(0, |acc, _| self.mul(acc, a))
    }

    /// `a b a^-1 b^-1`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let ab = self.mul(a, b);
        let ai_bi = self.mul(self.inverse(a), self.inverse(b));
        self.mul(ab, ai_bi)
    }

    pub fn element_order(&self, a: usize) -> u32 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Index of the `k`-th generator (1-based).
    pub fn generator_index(&self, k: usize) -> usize {
        (self.p as usize).pow(k as u32 - 1)
    }
}

/// Enumerates the words `s_1^w_1 o .. o s_N^w_N` with `0 <= w_i < p`,
/// checks that they are pairwise distinct and closed under composition,
/// and records the multiplication table.
pub fn enumerate_group(alg: &AsAlgebra, gens: &[GaloisMap]) -> Result<GroupTable> {
    let p = alg.p() as u32;
    let k = gens.len();
    let powers: Vec<Vec<GaloisMap>> = gens
        .iter()
        .map(|g| {
            let mut row = vec![GaloisMap::identity(alg)];
            for _ in 1..p {
                let next = compose(alg, row.last().unwrap(), g);
                row.push(next);
            }
            row
        })
        .collect();
    let count = (p as usize).pow(k as u32);
    let elements: Vec<GroupElement> = (0..count)
        .into_par_iter()
        .map(|idx| {
            let mut word = Vec::with_capacity(k);
            let mut rest = idx;
            for _ in 0..k {
                word.push((rest % p as usize) as u32);
                rest /= p as usize;
            }
            let mut map = GaloisMap::identity(alg);
            for (i, &e) in word.iter().enumerate() {
                if e > 0 {
                    map = compose(alg, &map, &powers[i][e as usize]);
                }
            }
            GroupElement { word, map }
        })
        .collect();

    let mut index: HashMap<&GaloisMap, u32> = HashMap::with_capacity(count);
    for (i, el) in elements.iter().enumerate() {
        if let Some(j) = index.insert(&el.map, i as u32) {
            return Err(Error::consistency(format!(
                "words {:?} and {:?} give the same automorphism",
                elements[j as usize].word, el.word
            )));
        }
    }
    let cayley: Vec<Vec<u32>> = elements
        .par_iter()
        .map(|a| {
            elements
                .iter()
                .map(|b| {
                    let c = compose(alg, &a.map, &b.map);
                    index.get(&c).copied().ok_or_else(|| {
                        Error::consistency(format!("product of {:?} and {:?} is not a normal-form word", a.word, b.word))
                    })
                })
                .collect::<Result<Vec<u32>>>()
        })
        .collect::<Result<_>>()?;

    let mut hasher = Sha256::new();
    for row in &cayley {
        for &c in row {
            hasher.update(c.to_le_bytes());
        }
    }
    let digest = hasher.finalize().iter().map(|b| format!("{b:02x}")).collect();
    Ok(GroupTable { p, elements, cayley, digest })
}

/// Commutators and `p`-th powers of the generators, compared with the
/// presentations of the two extraspecial families of order `p^(2n+1)`:
/// `[s_i, s_(n+i)]` generates the center `<s_N>`, all other generator pairs
/// commute, every `s_i^p` is trivial except possibly `s_1^p`, which is a
/// nontrivial power `s_N^w` in the metacyclic family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    /// `(i, j, word of [s_i, s_j])` for `i < j`.
    pub commutators: Vec<(usize, usize, Vec<u32>)>,
    /// `(i, word of s_i^p)`.
    pub pth_powers: Vec<(usize, Vec<u32>)>,
    pub commutators_ok: bool,
    pub heisenberg: bool,
    pub metacyclic: bool,
    /// The exponent `w` with `s_1^p = s_N^w`, when `s_1^p` is central.
    pub w: Option<u32>,
    pub order_of_s1: u32,
}

pub fn relation_report(table: &GroupTable, n: usize) -> RelationReport {
    let big_n = 2 * n + 1;
    let p = table.p;
    let gen = |k: usize| table.generator_index(k);
    let center: Vec<usize> = (0..p).map(|e| table.pow(gen(big_n), e)).collect();
    let mut commutators = vec![];
    let mut commutators_ok = true;
    for i in 1..=big_n {
        for j in i + 1..=big_n {
            let c = table.commutator(gen(i), gen(j));
            let paired = i <= n && j == n + i;
            let ok = if paired { c != 0 && center.contains(&c) } else { c == 0 };
            commutators_ok &= ok;
            commutators.push((i, j, table.elements[c].word.clone()));
        }
    }
    let mut pth_powers = vec![];
    let mut others_trivial = true;
    let mut s1p = 0;
    for i in 1..=big_n {
        let x = table.pow(gen(i), p);
        if i == 1 {
            s1p = x;
        } else if x != 0 {
            others_trivial = false;
        }
        pth_powers.push((i, table.elements[x].word.clone()));
    }
    let w = center.iter().position(|&c| c == s1p).map(|e| e as u32);
    RelationReport {
        commutators,
        pth_powers,
        commutators_ok,
        heisenberg: commutators_ok && others_trivial && s1p == 0,
        metacyclic: commutators_ok && others_trivial && w.is_some_and(|w| w != 0),
        w,
        order_of_s1: table.element_order(gen(1)),
    }
}
