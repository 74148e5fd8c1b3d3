//! q-ary codes: explicit codeword sets and the generalized Hadamard codes
//! `C_H = F_H + C_1` of a normalized GH matrix.
//!
//! Kernel dimensions are over F_q; p-kernel dimensions are over GF(p).

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::gh_matrix::GhMatrix;
use crate::linalg::EchelonBasis;

/// Codes up to this size get an exact pairwise minimum distance.
pub const EXACT_DISTANCE_LIMIT: usize = 10_000;
/// Random early-rejection probes per kernel candidate.
const EARLY_PROBES: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelInfo {
    pub dim: usize,
    pub basis: Vec<Vec<Fe>>,
    pub seed: u64,
}

/// The p-kernel `{x : C + x = C}` measured over GF(p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PKernelInfo {
    /// Dimension over GF(p).
    pub fp_dim: usize,
    /// `q = p^e`.
    pub e: u32,
    pub seed: u64,
}

impl PKernelInfo {
    /// `log_q |K_p|`, the quantity bounded by `1 + t/e`.
    pub fn q_dim(&self) -> f64 {
        self.fp_dim as f64 / self.e as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceMode {
    /// All pairs of codewords compared.
    Exact,
    /// Weights of all words plus one coset pair agree with `v - v/q`.
    VerifiedTheoretical,
}

impl DistanceMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            DistanceMode::Exact => "exact",
            DistanceMode::VerifiedTheoretical => "verified-theoretical",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MinDistance {
    pub value: usize,
    pub mode: DistanceMode,
}

pub fn hamming(a: &[Fe], b: &[Fe]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// The GF(p)-basis `1, x, …, x^{m-1}` of GF(p^m) as encodings.
fn prime_basis(field: &Field) -> Vec<Fe> {
    (0..field.m()).map(|i| field.p().pow(i) as Fe).collect()
}

/// Coordinates of a vector over GF(p), `m` digits per entry.
fn expand(field: &Field, v: &[Fe]) -> Vec<Fe> {
    let (p, m) = (field.p() as Fe, field.m());
    let mut out = Vec::with_capacity(v.len() * m as usize);
    for &x in v {
        let mut x = x;
        for _ in 0..m {
            out.push(x % p);
            x /= p;
        }
    }
    out
}

fn axpy(field: &Field, y: &[Fe], a: Fe, x: &[Fe]) -> Vec<Fe> {
    y.iter().zip(x).map(|(&s, &t)| field.add(s, field.mul(a, t))).collect()
}

/// A code given by an explicit list of distinct codewords.
#[derive(Clone, Debug)]
pub struct Code {
    field: Field,
    n: usize,
    words: Vec<Vec<Fe>>,
    index: HashSet<Vec<Fe>>,
}

impl Code {
    /// Duplicate words are dropped; order of first occurrence is kept.
    pub fn new(field: Field, n: usize, words: Vec<Vec<Fe>>) -> Result<Code> {
        let mut index = HashSet::with_capacity(words.len());
        let mut kept = Vec::with_capacity(words.len());
        for w in words {
            if w.len() != n {
                return Err(Error::LengthMismatch { left: w.len(), right: n });
            }
            if w.iter().any(|&x| x as usize >= field.q()) {
                return Err(Error::DomainMismatch("entry is not a field element".into()));
            }
            if index.insert(w.clone()) {
                kept.push(w);
            }
        }
        Ok(Code { field, n, words: kept, index })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn length(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Vec<Fe>] {
        &self.words
    }

    pub fn contains(&self, w: &[Fe]) -> bool {
        self.index.contains(w)
    }

    pub fn rank(&self) -> usize {
        let mut b = EchelonBasis::new(&self.field, self.n);
        for w in &self.words {
            b.insert(w);
        }
        b.dim()
    }

    fn translate_closed(&self, x: &[Fe]) -> bool {
        self.words.par_iter().all(|c| {
            let y: Vec<Fe> = c.iter().zip(x).map(|(&a, &b)| self.field.add(a, b)).collect();
            self.contains(&y)
        })
    }

    fn check_zero(&self) -> Result<()> {
        if self.contains(&vec![0; self.n]) {
            Ok(())
        } else {
            Err(Error::ZeroNotInCode)
        }
    }

    /// `K(C) = {x : C + αx = C for all α}`; candidates are codewords since
    /// `0 ∈ C`, and `αx` only needs checking for α in a GF(p)-basis because
    /// the translation set is closed under addition.
    pub fn kernel(&self) -> Result<KernelInfo> {
        self.check_zero()?;
        let basis_alpha = prime_basis(&self.field);
        let mut k = EchelonBasis::new(&self.field, self.n);
        for x in &self.words {
            if k.contains(x) {
                continue;
            }
            let ok = basis_alpha.iter().all(|&a| {
                let ax: Vec<Fe> = x.iter().map(|&t| self.field.mul(a, t)).collect();
                self.translate_closed(&ax)
            });
            if ok {
                k.insert(x);
            }
        }
        Ok(KernelInfo { dim: k.dim(), basis: k.vectors().to_vec(), seed: 0 })
    }

    pub fn p_kernel(&self) -> Result<PKernelInfo> {
        self.check_zero()?;
        let fp = Field::with_default(self.field.p(), 1)?;
        let mut k = EchelonBasis::new(&fp, self.n * self.field.m() as usize);
        for x in &self.words {
            let ex = expand(&self.field, x);
            if !k.contains(&ex) && self.translate_closed(x) {
                k.insert(&ex);
            }
        }
        Ok(PKernelInfo { fp_dim: k.dim(), e: self.field.m(), seed: 0 })
    }

    /// Exact pairwise minimum distance.
    pub fn min_distance(&self) -> Result<MinDistance> {
        if self.words.len() < 2 {
            return Err(Error::SizeMismatch { expected: 2, actual: self.words.len() });
        }
        let w = &self.words;
        let value = (0..w.len())
            .into_par_iter()
            .map(|i| (i + 1..w.len()).map(|j| hamming(&w[i], &w[j])).min().unwrap_or(usize::MAX))
            .min()
            .unwrap_or(usize::MAX);
        Ok(MinDistance { value, mode: DistanceMode::Exact })
    }
}

fn hash_shifted(v: &[Fe], field: &Field, shift: Fe) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &x in v {
        let y = if shift == 0 { x } else { field.sub(x, shift) };
        h = (h.rotate_left(5) ^ y as u64).wrapping_mul(0x517c_c1b7_2722_0a95);
    }
    h
}

/// `C_H = ∪_α (F_H + α1)` for a normalized GH matrix `H`; codeword
/// `r·q + α` is row `r` plus `α·1`.
#[derive(Clone, Debug)]
pub struct GhCode {
    h: GhMatrix,
    index: HashMap<u64, Vec<u32>>,
}

impl GhCode {
    pub fn new(h: GhMatrix) -> Result<GhCode> {
        if !h.is_normalized() {
            return Err(Error::MatrixNotNormalized);
        }
        let mut index: HashMap<u64, Vec<u32>> = HashMap::with_capacity(h.order());
        for r in 0..h.order() {
            let bucket = index.entry(hash_shifted(h.row(r), h.field(), 0)).or_default();
            if let Some(&s) = bucket.iter().find(|&&s| h.row(s as usize) == h.row(r)) {
                return Err(Error::DuplicateRows(s as usize, r));
            }
            bucket.push(r as u32);
        }
        Ok(GhCode { h, index })
    }

    pub fn matrix(&self) -> &GhMatrix {
        &self.h
    }

    pub fn field(&self) -> &Field {
        self.h.field()
    }

    /// Code length `v`.
    pub fn length(&self) -> usize {
        self.h.order()
    }

    /// `|C_H| = q·v`.
    pub fn len(&self) -> usize {
        self.h.order() * self.field().q()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn row(&self, r: usize) -> &[Fe] {
        self.h.row(r)
    }

    pub fn word(&self, c: usize) -> Vec<Fe> {
        let q = self.field().q();
        let (r, a) = (c / q, (c % q) as Fe);
        self.row(r).iter().map(|&x| self.field().add(x, a)).collect()
    }

    /// The row of `H` whose coset contains `y` together with the shift:
    /// normalized rows start with 0, so `y ∈ C_H` iff `y - y_1·1 ∈ F_H`.
    pub fn decompose(&self, y: &[Fe]) -> Option<(usize, Fe)> {
        if y.len() != self.length() {
            return None;
        }
        let f = self.field();
        let a = y[0];
        let bucket = self.index.get(&hash_shifted(y, f, a))?;
        bucket
            .iter()
            .map(|&r| r as usize)
            .find(|&r| self.row(r).iter().zip(y).all(|(&x, &t)| f.add(x, a) == t))
            .map(|r| (r, a))
    }

    pub fn index_of(&self, y: &[Fe]) -> Option<usize> {
        self.decompose(y).map(|(r, a)| r * self.field().q() + a as usize)
    }

    pub fn contains(&self, y: &[Fe]) -> bool {
        self.decompose(y).is_some()
    }

    /// `F_H` as an explicit code.
    pub fn rows_code(&self) -> Code {
        let rows = (0..self.length()).map(|r| self.row(r).to_vec()).collect();
        Code::new(self.field().clone(), self.length(), rows).expect("rows are field vectors")
    }

    /// All `q·v` codewords as an explicit code.
    pub fn materialize(&self) -> Result<Code> {
        const LIMIT: usize = 1 << 20;
        if self.len() * self.length() > LIMIT * 16 {
            return Err(Error::SizeGateExceeded { size: self.len(), limit: LIMIT });
        }
        let words = (0..self.len()).map(|c| self.word(c)).collect();
        Code::new(self.field().clone(), self.length(), words)
    }

    /// `dim span(C_H) = dim span(rows(H) ∪ {1})`, since every codeword is
    /// a row plus a multiple of `1`.
    pub fn rank(&self) -> usize {
        let mut b = EchelonBasis::new(self.field(), self.length());
        b.insert(&vec![1; self.length()]);
        for r in 0..self.length() {
            b.insert(self.row(r));
        }
        b.dim()
    }

    /// `C_H + x ⊆ C_H`; adding `C_1` is free, so rows suffice.
    fn translate_closed(&self, x: &[Fe]) -> bool {
        let f = self.field();
        (0..self.length()).into_par_iter().all(|s| self.contains(&axpy(f, self.row(s), 1, x)))
    }

    fn early_reject(&self, x: &[Fe], rng: &mut ChaCha8Rng) -> bool {
        let f = self.field();
        (0..EARLY_PROBES).any(|_| {
            let s = rng.gen_range(0..self.length());
            !self.contains(&axpy(f, self.row(s), 1, x))
        })
    }

    /// Kernel over F_q. Seeded with `C_1` (contained by construction), then
    /// every row not yet in the span is probed on a few random rows and, if
    /// it survives, verified in full for α in a GF(p)-basis of F_q.
    pub fn kernel(&self, seed: u64) -> KernelInfo {
        let f = self.field();
        let alphas = prime_basis(f);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut k = EchelonBasis::new(f, self.length());
        k.insert(&vec![1; self.length()]);
        for r in 1..self.length() {
            let x = self.row(r);
            if k.contains(x) || self.early_reject(x, &mut rng) {
                continue;
            }
            let ok = alphas.iter().all(|&a| {
                let ax: Vec<Fe> = x.iter().map(|&t| f.mul(a, t)).collect();
                self.translate_closed(&ax)
            });
            if ok {
                k.insert(x);
            }
        }
        KernelInfo { dim: k.dim(), basis: k.vectors().to_vec(), seed }
    }

    /// p-kernel over GF(p), seeded with the GF(p)-span of `C_1`.
    pub fn p_kernel(&self, seed: u64) -> PKernelInfo {
        let f = self.field();
        let fp = Field::with_default(f.p(), 1).expect("prime field");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut k = EchelonBasis::new(&fp, self.length() * f.m() as usize);
        for a in prime_basis(f) {
            k.insert(&expand(f, &vec![a; self.length()]));
        }
        for r in 1..self.length() {
            let x = self.row(r);
            let ex = expand(f, x);
            if k.contains(&ex) || self.early_reject(x, &mut rng) {
                continue;
            }
            if self.translate_closed(x) {
                k.insert(&ex);
            }
        }
        PKernelInfo { fp_dim: k.dim(), e: f.m(), seed }
    }

    /// `t` with `v = p^t·s`, `gcd(p, s) = 1`.
    pub fn p_valuation(&self) -> u32 {
        let p = self.field().p() as usize;
        let (mut v, mut t) = (self.length(), 0);
        while v % p == 0 {
            v /= p;
            t += 1;
        }
        t
    }

    /// `v - v/q`.
    pub fn theoretical_distance(&self) -> usize {
        self.length() - self.h.lambda()
    }

    /// Exact for `|C| ≤ 10^4` through row-difference multisets:
    /// `d(f_r + α1, f_s + β1) = v - #{k : f_r[k] - f_s[k] = β - α}`.
    /// Larger codes check all word weights and one coset pair against
    /// `v - v/q`.
    pub fn min_distance(&self) -> MinDistance {
        let (v, q) = (self.length(), self.field().q());
        let f = self.field();
        if self.len() <= EXACT_DISTANCE_LIMIT {
            let worst = (0..v)
                .into_par_iter()
                .map(|r| {
                    let mut counts = vec![0usize; q];
                    (r + 1..v)
                        .map(|s| {
                            counts.iter_mut().for_each(|c| *c = 0);
                            for (&a, &b) in self.row(r).iter().zip(self.row(s)) {
                                counts[f.sub(a, b) as usize] += 1;
                            }
                            v - counts.iter().max().copied().unwrap_or(0)
                        })
                        .min()
                        .unwrap_or(v)
                })
                .min()
                .unwrap_or(v);
            // distinct words in the same coset are at distance v
            return MinDistance { value: worst.min(if q > 1 { v } else { usize::MAX }), mode: DistanceMode::Exact };
        }
        let target = self.theoretical_distance();
        // weight of f_r + α1 is v minus the number of entries equal to -α
        let min_weight = (1..v)
            .into_par_iter()
            .map(|r| {
                let mut counts = vec![0usize; q];
                for &x in self.row(r) {
                    counts[x as usize] += 1;
                }
                v - counts.iter().max().copied().unwrap_or(0)
            })
            .min()
            .unwrap_or(v);
        let pair = if v > 2 { v - (0..q).map(|u| (0..v).filter(|&k| f.sub(self.row(1)[k], self.row(2)[k]) as usize == u).count()).max().unwrap_or(0) } else { target };
        let value = min_weight.min(pair).min(v);
        MinDistance { value, mode: DistanceMode::VerifiedTheoretical }
    }

    pub fn is_linear(&self, rank: usize, kernel: usize) -> bool {
        rank == kernel
    }
}
