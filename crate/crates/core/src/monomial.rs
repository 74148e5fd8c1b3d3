//! Monomial matrices over `K ≅ (F_q, +)` and the automorphisms of `φ(H)`
//! induced by `⋆`.
//!
//! `K` is written additively throughout: a monomial matrix is a permutation
//! `σ` with one entry `d_i ∈ F_q` at `(i, σ(i))`, products of entries are
//! sums, and the inverse of an entry is its negative.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::gh_matrix::{GhMatrix, Matrix};
use crate::perm::Perm;
use crate::propelinear::PropelinearCode;

/// Largest `qv` for which the expanded matrix is built.
pub const EXPANDED_LIMIT: usize = 10_000;
/// Codewords checked when the full check is not requested.
pub const AUT_SAMPLES: usize = 512;

/// `M = D·P`: row `i` holds `diag[i]` in column `perm(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMatrix {
    perm: Perm,
    diag: Vec<Fe>,
}

impl MonomialMatrix {
    pub fn new(perm: Perm, diag: Vec<Fe>) -> Result<MonomialMatrix> {
        if perm.len() != diag.len() {
            return Err(Error::LengthMismatch { left: perm.len(), right: diag.len() });
        }
        Ok(MonomialMatrix { perm, diag })
    }

    /// `kI`.
    pub fn scalar(n: usize, k: Fe) -> MonomialMatrix {
        MonomialMatrix { perm: Perm::identity(n), diag: vec![k; n] }
    }

    pub fn order(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &Perm {
        &self.perm
    }

    pub fn diag(&self) -> &[Fe] {
        &self.diag
    }

    /// Row-major entries, `None` for zero.
    pub fn to_dense(&self) -> Vec<Option<Fe>> {
        let n = self.order();
        let mut out = vec![None; n * n];
        for i in 0..n {
            out[i * n + self.perm.image(i)] = Some(self.diag[i]);
        }
        out
    }

    /// `M_1 M_2`: row `i` lands in column `σ_2(σ_1(i))` with entry
    /// `d_1[i] + d_2[σ_1(i)]`.
    pub fn mul(&self, other: &MonomialMatrix, field: &Field) -> Result<MonomialMatrix> {
        let perm = other.perm.compose(&self.perm)?;
        let diag = (0..self.order()).map(|i| field.add(self.diag[i], other.diag[self.perm.image(i)])).collect();
        Ok(MonomialMatrix { perm, diag })
    }

    /// `M*`: transpose with every entry inverted.
    pub fn star(&self, field: &Field) -> MonomialMatrix {
        let inv = self.perm.inverse();
        let diag = (0..self.order()).map(|j| field.neg(self.diag[inv.image(j)])).collect();
        MonomialMatrix { perm: inv, diag }
    }
}

/// The unique `M = D·P` factorization of a dense monomial matrix.
pub fn factor_monomial(n: usize, entries: &[Option<Fe>]) -> Result<(Vec<Fe>, Perm)> {
    if entries.len() != n * n {
        return Err(Error::LengthMismatch { left: entries.len(), right: n * n });
    }
    let mut images = Vec::with_capacity(n);
    let mut diag = Vec::with_capacity(n);
    for i in 0..n {
        let row = &entries[i * n..(i + 1) * n];
        let mut nz = row.iter().enumerate().filter_map(|(j, e)| e.map(|d| (j, d)));
        match (nz.next(), nz.next()) {
            (Some((j, d)), None) => {
                images.push(j as u32);
                diag.push(d);
            }
            _ => return Err(Error::NotMonomial(format!("row {i} does not have exactly one entry"))),
        }
    }
    let perm = Perm::new(images).map_err(|_| Error::NotMonomial("two rows share a column".into()))?;
    let m = MonomialMatrix { perm: perm.clone(), diag: diag.clone() };
    debug_assert_eq!(m.to_dense(), entries);
    Ok((diag, perm))
}

/// `P·φ(H)·Q* = φ(H)`, entrywise `d_i + h_{σ(i), τ(l)} - e_l = h_{il}`.
pub fn is_matrix_automorphism(p: &MonomialMatrix, q: &MonomialMatrix, h: &GhMatrix) -> Result<bool> {
    let n = h.order();
    if p.order() != n {
        return Err(Error::OrderMismatch(p.order(), n));
    }
    if q.order() != n {
        return Err(Error::OrderMismatch(q.order(), n));
    }
    let f = h.field();
    Ok((0..n).into_par_iter().all(|i| {
        let (s, d) = (p.perm.image(i), p.diag[i]);
        (0..n).all(|l| f.sub(f.add(d, h.get(s, q.perm.image(l))), q.diag[l]) == h.get(i, l))
    }))
}

/// The pair `(M_a, N_a)` of codeword `a = f_r + α1`: `N_a` has
/// permutation `π_a` and diagonal `-a`; `M_a` sends row `t` to the row `s`
/// with `f_r ⋆ f_s = f_t + c1`, with entry `-(c + α)`.
pub fn automorphism_pair(p: &PropelinearCode, a: usize) -> (MonomialMatrix, MonomialMatrix) {
    let (v, q) = (p.length(), p.q());
    let f = p.field();
    let (r, alpha) = (a / q, (a % q) as Fe);
    let mut images = vec![0u32; v];
    let mut diag = vec![0; v];
    for s in 0..v {
        let (t, c) = p.row_star(r, s);
        images[t] = s as u32;
        diag[t] = f.neg(f.add(c, alpha));
    }
    let m = MonomialMatrix { perm: Perm::from_images_unchecked(images), diag };
    // columns: N* = Q* D_{-a}* pairs column l with τ(l) = π_a^{-1}(l)
    let word = p.code().word(a);
    let n = MonomialMatrix { perm: p.pi(r).inverse(), diag: word.iter().map(|&x| f.neg(x)).collect() };
    (m, n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    Full,
    Sampled { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutReport {
    /// Codewords whose pair satisfied `P φ(H) Q* = φ(H)`.
    pub verified: usize,
    pub exhaustive: bool,
    /// `a ↦ (M_a, N_a)` respects `⋆` on the checked pairs.
    pub homomorphism: bool,
    /// Every row of `φ(H)` is reached from row 1.
    pub transitive: bool,
    /// `λ1 ↦ (φ(-λ)I, φ(-λ)I)`.
    pub scalar_pairs: bool,
}

impl AutReport {
    pub fn passed(&self) -> bool {
        self.homomorphism && self.transitive && self.scalar_pairs
    }
}

/// Verifies the monomial pairs of every codeword (or a seeded sample),
/// the homomorphism property `pair(a ⋆ b) = pair(a)·pair(b)`, row
/// transitivity and the scalar pairs.
pub fn automorphisms_from_star(p: &PropelinearCode, mode: CheckMode) -> Result<AutReport> {
    let (n, q) = (p.len(), p.q());
    let h = p.code().matrix();
    let f = p.field();
    let mut rng = match mode {
        CheckMode::Full => ChaCha8Rng::seed_from_u64(0),
        CheckMode::Sampled { seed, .. } => ChaCha8Rng::seed_from_u64(seed),
    };
    let words: Vec<usize> = match mode {
        CheckMode::Full => (0..n).collect(),
        CheckMode::Sampled { count, .. } => (0..count).map(|_| rng.gen_range(0..n)).collect(),
    };
    if let Some(&bad) = words.par_iter().find_first(|&&a| {
        let (m, nn) = automorphism_pair(p, a);
        !is_matrix_automorphism(&m, &nn, h).unwrap_or(false)
    }) {
        return Err(Error::AutomorphismCheckFailed(bad));
    }
    let pairs: Vec<(usize, usize)> = if matches!(mode, CheckMode::Full) && n * n <= 100_000 {
        (0..n * n).map(|i| (i / n, i % n)).collect()
    } else {
        (0..2000).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect()
    };
    let homomorphism = pairs.par_iter().all(|&(a, b)| {
        let (ma, na) = automorphism_pair(p, a);
        let (mb, nb) = automorphism_pair(p, b);
        let (mab, nab) = automorphism_pair(p, p.star_index(a, b));
        ma.mul(&mb, f).is_ok_and(|x| x == mab) && na.mul(&nb, f).is_ok_and(|x| x == nab)
    });
    let mut reached = vec![false; p.length()];
    for r in 0..p.length() {
        let (m, _) = automorphism_pair(p, r * q);
        // row 1 of P φ(H) Q* comes from row σ(1); invert to find the image
        reached[m.perm.inverse().image(0)] = true;
    }
    let transitive = reached.iter().all(|&x| x);
    let scalar_pairs = (0..q).all(|lam| {
        let k = MonomialMatrix::scalar(p.length(), f.neg(lam as Fe));
        automorphism_pair(p, lam) == (k.clone(), k)
    });
    Ok(AutReport { verified: words.len(), exhaustive: matches!(mode, CheckMode::Full), homomorphism, transitive, scalar_pairs })
}

/// `𝓔 = [k_i + k_j + H]_{i,j}` of order `qv`, with `k_i` the element of
/// encoding `i`; entry `((x,s),(y,l))` sits at `(x·v + s, y·v + l)`.
pub fn expanded_matrix(h: &GhMatrix) -> Result<Matrix> {
    let (v, q) = (h.order(), h.field().q());
    let n = v * q;
    if n > EXPANDED_LIMIT {
        return Err(Error::SizeGateExceeded { size: n, limit: EXPANDED_LIMIT });
    }
    let f = h.field();
    let data = (0..n * n)
        .map(|i| {
            let (row, col) = (i / n, i % n);
            f.add(f.add((row / v) as Fe, (col / v) as Fe), h.get(row % v, col % v))
        })
        .collect();
    Matrix::new(f.clone(), n, n, data)
}

/// The permutations of `𝓔`'s rows and columns induced by codeword `a`:
/// rows `(x, i) ↦ (x + d_i, σ(i))`, columns `(y, l) ↦ (y - e_l, τ(l))`.
fn expanded_action(p: &PropelinearCode, a: usize) -> (Perm, Perm) {
    let (v, q) = (p.length(), p.q());
    let f = p.field();
    let (m, nn) = automorphism_pair(p, a);
    let rows = (0..q * v)
        .map(|k| {
            let (x, i) = ((k / v) as Fe, k % v);
            (f.add(x, m.diag[i]) as usize * v + m.perm.image(i)) as u32
        })
        .collect();
    let cols = (0..q * v)
        .map(|k| {
            let (y, l) = ((k / v) as Fe, k % v);
            (f.sub(y, nn.diag[l]) as usize * v + nn.perm.image(l)) as u32
        })
        .collect();
    (Perm::from_images_unchecked(rows), Perm::from_images_unchecked(cols))
}

/// Each codeword's row/column permutation preserves `𝓔`, and the row
/// permutations act regularly on the `qv` row labels.
pub fn regular_row_action_check(p: &PropelinearCode) -> Result<bool> {
    let e = expanded_matrix(p.code().matrix())?;
    let n = e.rows();
    let actions: Vec<(Perm, Perm)> = (0..p.len()).into_par_iter().map(|a| expanded_action(p, a)).collect();
    let preserved = actions.par_iter().all(|(r, c)| {
        (0..n).all(|i| (0..n).all(|j| e.get(r.image(i), c.image(j)) == e.get(i, j)))
    });
    // regular: the orbit map a ↦ ρ_a(0) is a bijection onto the labels
    let mut hit = vec![false; n];
    for (r, _) in &actions {
        hit[r.image(0)] = true;
    }
    Ok(preserved && actions.len() == n && hit.iter().all(|&x| x))
}
