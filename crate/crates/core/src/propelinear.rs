//! Full propelinear structure `(C_H, ⋆)` induced by an orthogonal cocycle.
//!
//! Codeword `r·q + α` is `f_r + α1` where `f_r` is row `r` of `M_ψ`, i.e.
//! the row indexed by group element `g_r`. The coordinate permutation of
//! every word in the coset of `f_r` is `π_r : l ↦ j` with `g_l = g_r g_j`,
//! and the group law is `x ⋆ y = x + π_x(y)`. On rows the cocycle identity
//! turns this into
//!
//! `(f_r + α1) ⋆ (f_s + β1) = f_{g_s g_r} + (α + β + ψ(g_s, g_r))1`,
//!
//! so `π_r ∘ π_s = π_{r⋆s}` and `π_r` is fixed-point-free for `r ≠ 1`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cocycle::Cocycle;
use crate::code::GhCode;
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::gh_matrix::{kronecker_sum_uniform, GhMatrix};
use crate::group::{group_structure, FiniteGroup, GroupStructure, PermGroup};
use crate::perm::Perm;

/// Row-star tables are built by the vector rule up to this order.
pub const STAR_TABLE_LIMIT: usize = 729;
/// Permutations are stored per coset; beyond this order they are not.
pub const PI_STORAGE_LIMIT: usize = 8192;
/// Pair checks are exhaustive while `|C|` stays within this bound.
pub const EXHAUSTIVE_CODE_LIMIT: usize = 10_000;
pub const SAMPLED_PAIRS: usize = 100_000;

#[derive(Clone, Debug)]
enum StarRule {
    /// `(s·r, ψ(s,r))`.
    Cocycle(Cocycle),
    /// Row-major `v×v` table of `(row, shift)`.
    Table { v: usize, table: Vec<(u32, Fe)> },
    /// Componentwise on Kronecker-sum rows `r = r1·v2 + r2`.
    Product { v2: usize, left: Box<StarRule>, right: Box<StarRule> },
}

impl StarRule {
    fn row_star(&self, field: &Field, r: usize, s: usize) -> (usize, Fe) {
        match self {
            StarRule::Cocycle(psi) => (psi.group().mul(s, r), psi.get(s, r)),
            StarRule::Table { v, table } => {
                let (t, c) = table[r * v + s];
                (t as usize, c)
            }
            StarRule::Product { v2, left, right } => {
                let (t1, c1) = left.row_star(field, r / v2, s / v2);
                let (t2, c2) = right.row_star(field, r % v2, s % v2);
                (t1 * v2 + t2, field.add(c1, c2))
            }
        }
    }
}

/// A GH code together with `⋆`, `π` and `σ_x(y) = x + y`.
#[derive(Clone, Debug)]
pub struct PropelinearCode {
    code: GhCode,
    pis: Vec<Perm>,
    star: StarRule,
    row_inverse: Vec<u32>,
}

/// One verified property with a witness when it fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckItem {
    pub name: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug)]
pub struct PropelinearReport {
    pub items: Vec<CheckItem>,
    /// Whether pair checks covered every pair of cosets.
    pub exhaustive: bool,
    pub seed: u64,
}

impl PropelinearReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn item(&self, name: &str) -> Option<&CheckItem> {
        self.items.iter().find(|i| i.name == name)
    }
}

impl fmt::Display for PropelinearReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.items {
            write!(f, "{:<16} {}", i.name, if i.passed { "pass" } else { "FAIL" })?;
            if let Some(w) = &i.witness {
                write!(f, "  ({w})")?;
            }
            writeln!(f)?;
        }
        write!(f, "mode={} seed={}", if self.exhaustive { "exhaustive" } else { "sampled" }, self.seed)
    }
}

fn check(name: &'static str, witness: Option<String>) -> CheckItem {
    CheckItem { name, passed: witness.is_none(), witness }
}

/// The pairs of row indices examined by the pair checks.
fn row_pairs(v: usize, exhaustive: bool, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    if exhaustive {
        (0..v).flat_map(|r| (0..v).map(move |s| (r, s))).collect()
    } else {
        (0..SAMPLED_PAIRS).map(|_| (rng.gen_range(0..v), rng.gen_range(0..v))).collect()
    }
}

impl PropelinearCode {
    /// `(Φ(E_ψ), ⋆)` for an orthogonal cocycle. The order-one group is
    /// accepted as the degenerate case `C = C_1`: its 1×1 matrix has no
    /// pair of rows to test.
    pub fn ghfp_from_cocycle(psi: &Cocycle) -> Result<PropelinearCode> {
        let v = psi.order();
        if v > PI_STORAGE_LIMIT {
            return Err(Error::SizeGateExceeded { size: v, limit: PI_STORAGE_LIMIT });
        }
        let h = if v == 1 { GhMatrix::from_parts_unchecked(psi.field().clone(), 1, vec![0]) } else { psi.gh_matrix()? };
        let code = GhCode::new(h)?;
        let g = psi.group();
        let pis: Vec<Perm> = (0..v)
            .into_par_iter()
            .map(|r| {
                let ri = g.inverse(r);
                Perm::from_images_unchecked((0..v).map(|l| g.mul(ri, l) as u32).collect())
            })
            .collect();
        let row_inverse = (0..v).map(|r| g.inverse(r) as u32).collect();
        let mut p = PropelinearCode { code, pis, star: StarRule::Cocycle(psi.clone()), row_inverse };
        if v <= STAR_TABLE_LIMIT {
            p.star = StarRule::Table { v, table: p.vector_star_table()? };
        }
        Ok(p)
    }

    /// `(a⊕b) ⋆ (x⊕y) = (a⋆x) ⊕ (b⋆y)` and `π_{a⊕b} = π_a × π_b` on
    /// `C_{H1⊕H2}`.
    pub fn kronecker_propelinear(p1: &PropelinearCode, p2: &PropelinearCode) -> Result<PropelinearCode> {
        if p1.field() != p2.field() {
            return Err(Error::FieldMismatch);
        }
        let (v1, v2) = (p1.length(), p2.length());
        if v1 * v2 > PI_STORAGE_LIMIT {
            return Err(Error::SizeGateExceeded { size: v1 * v2, limit: PI_STORAGE_LIMIT });
        }
        let code = GhCode::new(kronecker_sum_uniform(p1.code.matrix(), p2.code.matrix())?)?;
        let pis = (0..v1 * v2)
            .into_par_iter()
            .map(|r| {
                let (a, b) = (&p1.pis[r / v2], &p2.pis[r % v2]);
                let images = (0..v1 * v2).map(|j| (a.image(j / v2) * v2 + b.image(j % v2)) as u32).collect();
                Perm::from_images_unchecked(images)
            })
            .collect();
        let row_inverse = (0..v1 * v2)
            .map(|r| p1.row_inverse[r / v2] * v2 as u32 + p2.row_inverse[r % v2])
            .collect();
        let star = StarRule::Product { v2, left: Box::new(p1.star.clone()), right: Box::new(p2.star.clone()) };
        Ok(PropelinearCode { code, pis, star, row_inverse })
    }

    /// Replaces `π` on the coset of row `r`, keeping `⋆`; used to exercise
    /// the verifiers on broken structures.
    pub fn with_pi(&self, r: usize, pi: Perm) -> Result<PropelinearCode> {
        if pi.len() != self.length() {
            return Err(Error::LengthMismatch { left: pi.len(), right: self.length() });
        }
        let mut p = self.clone();
        p.pis[r] = pi;
        Ok(p)
    }

    fn vector_star_table(&self) -> Result<Vec<(u32, Fe)>> {
        let v = self.length();
        (0..v * v)
            .into_par_iter()
            .map(|i| {
                let (r, s) = (i / v, i % v);
                let y = self.star_vector_rows(r, s);
                self.code.decompose(&y).map(|(t, c)| (t as u32, c)).ok_or(Error::NotACodeword)
            })
            .collect()
    }

    /// `f_r + π_r(f_s)` as a vector.
    fn star_vector_rows(&self, r: usize, s: usize) -> Vec<Fe> {
        let f = self.field();
        let mut y = self.pis[r].apply_unchecked(self.code.row(s));
        for (a, &b) in y.iter_mut().zip(self.code.row(r)) {
            *a = f.add(*a, b);
        }
        y
    }

    pub fn code(&self) -> &GhCode {
        &self.code
    }

    pub fn field(&self) -> &Field {
        self.code.field()
    }

    pub fn length(&self) -> usize {
        self.code.length()
    }

    /// `|C| = q·v`.
    pub fn len(&self) -> usize {
        self.code.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn q(&self) -> usize {
        self.field().q()
    }

    /// `π` of the coset `f_r + C_1`.
    pub fn pi(&self, r: usize) -> &Perm {
        &self.pis[r]
    }

    /// `π_x` of codeword index `c`.
    pub fn pi_of(&self, c: usize) -> &Perm {
        &self.pis[c / self.q()]
    }

    pub fn pis(&self) -> &[Perm] {
        &self.pis
    }

    /// Row part and constant of `f_r ⋆ f_s`.
    pub fn row_star(&self, r: usize, s: usize) -> (usize, Fe) {
        self.star.row_star(self.field(), r, s)
    }

    pub fn row_inverse(&self, r: usize) -> usize {
        self.row_inverse[r] as usize
    }

    /// `x ⋆ y` on codeword indices.
    pub fn star_index(&self, x: usize, y: usize) -> usize {
        let q = self.q();
        let (t, c) = self.row_star(x / q, y / q);
        let f = self.field();
        t * q + f.add(f.add((x % q) as Fe, (y % q) as Fe), c) as usize
    }

    /// `x ⋆ y = x + π_x(y)` for a codeword `x` and any vector `y`.
    pub fn star(&self, x: &[Fe], y: &[Fe]) -> Result<Vec<Fe>> {
        let (r, _) = self.code.decompose(x).ok_or(Error::NotACodeword)?;
        if y.len() != self.length() {
            return Err(Error::LengthMismatch { left: y.len(), right: self.length() });
        }
        let f = self.field();
        let mut out = self.pis[r].apply_unchecked(y);
        for (a, &b) in out.iter_mut().zip(x) {
            *a = f.add(*a, b);
        }
        Ok(out)
    }

    /// `(C, ⋆)` on codeword indices.
    pub fn code_group(&self) -> CodeGroup<'_> {
        CodeGroup { p: self }
    }

    /// `C/C_1` on row indices.
    pub fn quotient_group(&self) -> QuotientGroup<'_> {
        QuotientGroup { p: self }
    }

    /// `Π = {π_r}` in row order.
    pub fn pi_group(&self) -> Result<PermGroup> {
        PermGroup::new(self.pis.clone())
    }

    pub fn group_structure(&self) -> GroupStructure {
        group_structure(&self.code_group())
    }

    pub fn pi_group_structure(&self) -> Result<GroupStructure> {
        Ok(group_structure(&self.pi_group()?))
    }

    /// 1-based cycle forms, one per coset in row order.
    pub fn pi_table(&self) -> Vec<String> {
        self.pis.iter().map(|p| p.cycle_form()).collect()
    }

    fn exhaustive(&self) -> bool {
        self.len() <= EXHAUSTIVE_CODE_LIMIT
    }

    /// Checks the group axioms, both propelinear axioms, fullness and the
    /// three coset properties. Pair checks are exhaustive over cosets for
    /// `|C| ≤ 10^4` (π is constant on cosets, so row pairs cover all
    /// codeword pairs) and use `10^5` seeded samples otherwise.
    pub fn verify_full_propelinear(&self, seed: u64) -> PropelinearReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let exhaustive = self.exhaustive();
        let pairs = row_pairs(self.length(), exhaustive, &mut rng);
        let items = vec![
            check("group_axioms", self.group_axioms_witness(exhaustive, &mut rng)),
            check("identity_pi", (!self.pis[0].is_identity()).then(|| "pi of the zero coset moves a coordinate".into())),
            check("axiom_i", self.axiom_i_witness(&pairs)),
            check("axiom_ii", self.axiom_ii_witness(&pairs)),
            check("fullness", self.fullness_witness()),
            check("coset_pi", self.coset_pi_witness(&mut rng)),
            check("unit_vectors", self.unit_vector_witness(exhaustive, &mut rng)),
            check("pi_quotient", self.pi_quotient_witness()),
        ];
        PropelinearReport { items, exhaustive, seed }
    }

    fn group_axioms_witness(&self, exhaustive: bool, rng: &mut ChaCha8Rng) -> Option<String> {
        let (v, q) = (self.length(), self.q());
        for r in 0..v {
            if self.row_star(0, r) != (r, 0) || self.row_star(r, 0) != (r, 0) {
                return Some(format!("0 is not neutral for row {r}"));
            }
            let ri = self.row_inverse(r);
            if self.row_star(r, ri).0 != 0 || self.row_star(ri, r).0 != 0 {
                return Some(format!("row {ri} does not invert row {r}"));
            }
        }
        // shifts add linearly, so associativity reduces to rows
        let assoc = |(a, b, c): (usize, usize, usize)| {
            let (x, y, z) = (a * q, b * q, c * q);
            let l = self.star_index(self.star_index(x, y), z);
            let r = self.star_index(x, self.star_index(y, z));
            (l != r).then(|| format!("(x⋆y)⋆z ≠ x⋆(y⋆z) on rows ({a},{b},{c})"))
        };
        if exhaustive && v * v * v <= 2_000_000 {
            (0..v * v * v).into_par_iter().find_map_first(|i| assoc((i / (v * v), (i / v) % v, i % v)))
        } else {
            let triples: Vec<_> =
                (0..SAMPLED_PAIRS).map(|_| (rng.gen_range(0..v), rng.gen_range(0..v), rng.gen_range(0..v))).collect();
            triples.into_par_iter().find_map_first(assoc)
        }
    }

    /// `x + π_x(C) = C`, checked as `f_r + π_r(f_s) ∈ C` (π fixes `C_1`)
    /// and agreeing with the stored law.
    fn axiom_i_witness(&self, pairs: &[(usize, usize)]) -> Option<String> {
        pairs.par_iter().find_map_first(|&(r, s)| {
            let y = self.star_vector_rows(r, s);
            match self.code.decompose(&y) {
                None => Some(format!("f_{r} + pi_{r}(f_{s}) is not a codeword")),
                Some(d) if d != self.row_star(r, s) => Some(format!("f_{r} ⋆ f_{s} disagrees with the group law")),
                _ => None,
            }
        })
    }

    fn axiom_ii_witness(&self, pairs: &[(usize, usize)]) -> Option<String> {
        pairs.par_iter().find_map_first(|&(r, s)| {
            let t = self.row_star(r, s).0;
            let (a, b, c) = (&self.pis[r], &self.pis[s], &self.pis[t]);
            (0..self.length())
                .any(|l| a.image(b.image(l)) != c.image(l))
                .then(|| format!("pi_{r} ∘ pi_{s} ≠ pi_{t}"))
        })
    }

    fn fullness_witness(&self) -> Option<String> {
        (1..self.length())
            .into_par_iter()
            .find_map_first(|r| {
                let fp = self.pis[r].fixed_points();
                (fp > 0).then(|| format!("pi_{r} fixes {fp} coordinates"))
            })
    }

    /// `π_x(y) = x ⋆ y - x` for every shift of a coset representative: the
    /// permutation read off the group law is constant on cosets of `C_1`.
    fn coset_pi_witness(&self, rng: &mut ChaCha8Rng) -> Option<String> {
        let (v, q) = (self.length(), self.q());
        let f = self.field();
        let probes: Vec<(usize, usize)> = if self.exhaustive() {
            (0..v).flat_map(|r| (0..v.min(4)).map(move |s| (r, s))).collect()
        } else {
            (0..1000).map(|_| (rng.gen_range(0..v), rng.gen_range(0..v))).collect()
        };
        probes.into_par_iter().find_map_first(|(r, s)| {
            let expected = self.pis[r].apply_unchecked(self.code.row(s));
            (0..q).find_map(|a| {
                let x = r * q + a;
                let w = self.code.word(self.star_index(x, s * q));
                let diff: Vec<Fe> = w.iter().zip(&self.code.word(x)).map(|(&p, &u)| f.sub(p, u)).collect();
                (diff != expected).then(|| format!("x⋆f_{s} - x ≠ pi_{r}(f_{s}) for x = f_{r} + {a}·1"))
            })
        })
    }

    /// For each coordinate `i`, `r ↦ π_r^{-1}(i)` is injective on cosets.
    fn unit_vector_witness(&self, exhaustive: bool, rng: &mut ChaCha8Rng) -> Option<String> {
        let v = self.length();
        let coords: Vec<usize> =
            if exhaustive { (0..v).collect() } else { (0..64).map(|_| rng.gen_range(0..v)).collect() };
        let inverses: Vec<Perm> = self.pis.par_iter().map(|p| p.inverse()).collect();
        coords.into_par_iter().find_map_first(|i| {
            let mut owner = vec![u32::MAX; v];
            for (r, inv) in inverses.iter().enumerate() {
                let j = inv.image(i);
                if owner[j] != u32::MAX {
                    return Some(format!("pi_{}^-1(e_{i}) = pi_{r}^-1(e_{i})", owner[j]));
                }
                owner[j] = r as u32;
            }
            None
        })
    }

    /// `|Π| = v` and `Π ≅ C/C_1`.
    fn pi_quotient_witness(&self) -> Option<String> {
        let pi = match self.pi_group() {
            Ok(g) => g,
            Err(e) => return Some(format!("Pi is not a group of order v: {e}")),
        };
        if pi.order() != self.length() {
            return Some(format!("|Pi| = {} ≠ {}", pi.order(), self.length()));
        }
        let a = group_structure(&pi);
        let b = group_structure(&self.quotient_group());
        (a != b).then(|| format!("Pi is {a} but C/C_1 is {b}"))
    }

    /// `{ρ_x : v ↦ x ⋆ v}` composes like `⋆` and acts regularly on `C`.
    pub fn regular_subgroup_check(&self, seed: u64) -> bool {
        let n = self.len();
        let rho = |x: usize, w: &[Fe]| -> Vec<Fe> {
            let f = self.field();
            let xw = self.code.word(x);
            let mut out = self.pi_of(x).apply_unchecked(w);
            for (a, &b) in out.iter_mut().zip(&xw) {
                *a = f.add(*a, b);
            }
            out
        };
        // ρ_x(0) = x gives transitivity; ρ_x(0) = 0 only for x = 0
        let zero = vec![0; self.length()];
        if !(0..n).into_par_iter().all(|x| self.code.index_of(&rho(x, &zero)) == Some(x)) {
            return false;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let triples: Vec<(usize, usize, usize)> = if n * n * n <= 1_000_000 {
            (0..n * n * n).map(|i| (i / (n * n), (i / n) % n, i % n)).collect()
        } else {
            (0..SAMPLED_PAIRS).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))).collect()
        };
        triples.into_par_iter().all(|(x, y, c)| {
            let w = self.code.word(c);
            let lhs = rho(x, &rho(y, &w));
            lhs == rho(self.star_index(x, y), &w) && self.code.contains(&lhs)
        })
    }

    /// Closure of a set of codeword indices under `⋆`.
    pub fn is_star_closed(&self, members: &[usize]) -> bool {
        let mut inside = vec![false; self.len()];
        for &m in members {
            inside[m] = true;
        }
        members.par_iter().all(|&a| members.iter().all(|&b| inside[self.star_index(a, b)]))
    }
}

/// `(C, ⋆)` as a finite group on codeword indices.
pub struct CodeGroup<'a> {
    p: &'a PropelinearCode,
}

impl FiniteGroup for CodeGroup<'_> {
    fn order(&self) -> usize {
        self.p.len()
    }
    fn op(&self, a: usize, b: usize) -> usize {
        self.p.star_index(a, b)
    }
    fn inv(&self, a: usize) -> usize {
        let q = self.p.q();
        let (r, alpha) = (a / q, (a % q) as Fe);
        let ri = self.p.row_inverse(r);
        let f = self.p.field();
        let c = self.p.row_star(r, ri).1;
        ri * q + f.neg(f.add(alpha, c)) as usize
    }
}

/// `C/C_1` on row indices.
pub struct QuotientGroup<'a> {
    p: &'a PropelinearCode,
}

impl FiniteGroup for QuotientGroup<'_> {
    fn order(&self) -> usize {
        self.p.length()
    }
    fn op(&self, a: usize, b: usize) -> usize {
        self.p.row_star(a, b).0
    }
    fn inv(&self, a: usize) -> usize {
        self.p.row_inverse(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gh_matrix::sylvester_power;
    use crate::group::{ElementOrder, Group};

    fn gf(p: u32, m: u32) -> Field {
        Field::with_default(p, m).unwrap()
    }

    fn s3() -> Cocycle {
        Cocycle::multiplication(&gf(3, 1), ElementOrder::Encoding)
    }

    fn gh41() -> Cocycle {
        let t = vec![0, 0, 0, 0, 0, 1, 3, 2, 0, 3, 2, 1, 0, 2, 1, 3];
        Cocycle::check(Group::elementary_abelian(2, 2).unwrap(), gf(2, 2), t).unwrap()
    }

    /// `Φ(k,g) = f_{g^{-1}} - (k + ψ(g,g^{-1}))1` on extension pairs.
    fn phi(psi: &Cocycle, k: Fe, g: usize) -> Vec<Fe> {
        let f = psi.field();
        let gi = psi.group().inverse(g);
        let c = f.add(k, psi.get(g, gi));
        psi.row(gi).iter().map(|&x| f.sub(x, c)).collect()
    }

    #[test]
    fn phi_oracle_matches_star() {
        for psi in [gh41(), s3().tensor(&s3()).unwrap(), Cocycle::multiplication(&gf(2, 3), ElementOrder::PrimitivePower)] {
            let p = PropelinearCode::ghfp_from_cocycle(&psi).unwrap();
            let (f, g) = (psi.field(), psi.group());
            let q = f.q();
            let pairs: Vec<(Fe, usize)> = (0..g.order()).flat_map(|h| (0..q as Fe).map(move |k| (k, h))).collect();
            let mut seen = std::collections::HashSet::new();
            for &(k, h) in &pairs {
                let w = phi(&psi, k, h);
                // inverse formula: f_g + λ1 ↦ (-(λ + ψ(g^{-1}, g)), g^{-1})
                let (r, lam) = p.code().decompose(&w).unwrap();
                let gi = g.inverse(r);
                assert_eq!((f.neg(f.add(lam, psi.get(gi, r))), gi), (k, h));
                assert!(seen.insert(w));
            }
            assert_eq!(seen.len(), p.len());
            for &(k, h) in &pairs {
                for &(l, j) in &pairs {
                    let prod = phi(&psi, f.add(f.add(k, l), psi.get(h, j)), g.mul(h, j));
                    let x = p.code().index_of(&phi(&psi, k, h)).unwrap();
                    let y = p.code().index_of(&phi(&psi, l, j)).unwrap();
                    assert_eq!(p.code().word(p.star_index(x, y)), prod);
                }
            }
        }
    }

    #[test]
    fn example_4x4_structure() {
        let p = PropelinearCode::ghfp_from_cocycle(&gh41()).unwrap();
        let rep = p.verify_full_propelinear(0);
        assert!(rep.passed(), "{rep}");
        assert!(rep.exhaustive);
        assert_eq!(p.group_structure().to_string(), "[4,4]");
        assert_eq!(p.pi_group_structure().unwrap().to_string(), "[2,2]");
        assert_eq!(p.pi_table(), ["()", "(1,2)(3,4)", "(1,3)(2,4)", "(1,4)(2,3)"]);
        assert!(p.regular_subgroup_check(0));
    }

    #[test]
    fn example_gf8_pi_listing() {
        let psi = Cocycle::multiplication(&gf(2, 3), ElementOrder::PrimitivePower);
        let p = PropelinearCode::ghfp_from_cocycle(&psi).unwrap();
        assert_eq!(p.pi(1).cycle_form(), "(1,2)(3,5)(4,8)(6,7)");
        assert_eq!(p.group_structure().to_string(), "[4,4,4]");
        assert_eq!(p.pi_group_structure().unwrap().to_string(), "[2,2,2]");
        assert!(p.verify_full_propelinear(0).passed());
        assert!(p.regular_subgroup_check(0));
    }

    #[test]
    fn example_9x9_pi_listing_up_to_inversion() {
        let psi = s3().tensor(&s3()).unwrap();
        let p = PropelinearCode::ghfp_from_cocycle(&psi).unwrap();
        let listed = [
            "()",
            "(1,2,3)(4,5,6)(7,8,9)",
            "(1,3,2)(4,6,5)(7,9,8)",
            "(1,4,7)(2,5,8)(3,6,9)",
            "(1,5,9)(2,6,7)(3,4,8)",
            "(1,6,8)(2,4,9)(3,5,7)",
            "(1,7,4)(2,8,5)(3,9,6)",
            "(1,8,6)(2,9,4)(3,7,5)",
            "(1,9,5)(2,7,6)(3,8,4)",
        ];
        let inverted: Vec<String> = p.pis().iter().map(|x| x.inverse().cycle_form()).collect();
        assert_eq!(inverted, listed);
        // under -ψ, the coset holding row i of H carries the listed π verbatim
        let neg = PropelinearCode::ghfp_from_cocycle(&psi.negated()).unwrap();
        for (i, want) in listed.iter().enumerate() {
            let (r, _) = neg.code().decompose(p.code().row(i)).unwrap();
            assert_eq!(neg.pi(r).cycle_form(), *want);
        }
        assert_eq!(p.group_structure().to_string(), "[3,3,3]");
        assert_eq!(p.pi_group_structure().unwrap().to_string(), "[3,3]");
        assert!(p.regular_subgroup_check(0));
    }

    #[test]
    fn trivial_order_one() {
        let p = PropelinearCode::ghfp_from_cocycle(&Cocycle::trivial(Group::cyclic(1), gf(3, 1))).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.pi_table(), ["()"]);
        for a in 0..3 {
            assert_eq!(p.code().word(a), vec![a as Fe]);
        }
        assert!(p.verify_full_propelinear(0).passed());
        assert!(p.regular_subgroup_check(0));
    }

    #[test]
    fn non_orthogonal_cocycle_is_rejected() {
        let psi = Cocycle::trivial(Group::elementary_abelian(3, 1).unwrap(), gf(3, 1));
        assert!(matches!(PropelinearCode::ghfp_from_cocycle(&psi), Err(Error::NotOrthogonal { .. })));
    }

    #[test]
    fn star_on_vectors() {
        let p = PropelinearCode::ghfp_from_cocycle(&s3().tensor(&s3()).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let zero = vec![0; 9];
        for _ in 0..50 {
            let y: Vec<Fe> = (0..9).map(|_| rng.gen_range(0..3)).collect();
            let u: Vec<Fe> = (0..9).map(|_| rng.gen_range(0..3)).collect();
            assert_eq!(p.star(&zero, &y).unwrap(), y);
            let lam = vec![2; 9];
            let shifted: Vec<Fe> = y.iter().map(|&t| (t + 2) % 3).collect();
            assert_eq!(p.star(&lam, &y).unwrap(), shifted);
            let x = p.code().word(rng.gen_range(0..27));
            let d = crate::code::hamming(&p.star(&x, &u).unwrap(), &p.star(&x, &y).unwrap());
            assert_eq!(d, crate::code::hamming(&u, &y));
        }
        assert_eq!(p.star(&[0, 0, 0, 0, 0, 0, 0, 0, 1], &zero), Err(Error::NotACodeword));
    }

    #[test]
    fn vector_table_agrees_with_cocycle_formula() {
        let psi = s3().tensor(&s3()).unwrap().tensor(&s3()).unwrap();
        let p = PropelinearCode::ghfp_from_cocycle(&psi).unwrap();
        let g = psi.group();
        for r in 0..27 {
            for s in 0..27 {
                assert_eq!(p.row_star(r, s), (g.mul(s, r), psi.get(s, r)));
            }
        }
    }

    #[test]
    fn corrupted_pi_is_detected() {
        let p = PropelinearCode::ghfp_from_cocycle(&s3().tensor(&s3()).unwrap()).unwrap();
        let bad = p.with_pi(4, Perm::identity(9)).unwrap();
        let rep = bad.verify_full_propelinear(0);
        assert!(!rep.passed());
        let full = rep.item("fullness").unwrap();
        assert!(!full.passed);
        assert_eq!(full.witness.as_deref(), Some("pi_4 fixes 9 coordinates"));
        assert!(!rep.item("axiom_ii").unwrap().passed);
        assert!(!bad.regular_subgroup_check(0));
    }

    #[test]
    fn kronecker_matches_tensor_path() {
        let a = PropelinearCode::ghfp_from_cocycle(&s3()).unwrap();
        let k = PropelinearCode::kronecker_propelinear(&a, &a).unwrap();
        let direct = PropelinearCode::ghfp_from_cocycle(&s3().tensor(&s3()).unwrap()).unwrap();
        assert_eq!(k.pis(), direct.pis());
        assert_eq!(k.code().matrix(), direct.code().matrix());
        assert_eq!(k.code().matrix(), &sylvester_power(&gf(3, 1), 2).unwrap());
        for r in 0..9 {
            for s in 0..9 {
                assert_eq!(k.row_star(r, s), direct.row_star(r, s));
            }
        }
        assert!(k.verify_full_propelinear(1).passed());
    }

    #[test]
    fn kronecker_with_order_one_factor() {
        let a = PropelinearCode::ghfp_from_cocycle(&s3()).unwrap();
        let one = PropelinearCode::ghfp_from_cocycle(&Cocycle::trivial(Group::cyclic(1), gf(3, 1))).unwrap();
        for k in [PropelinearCode::kronecker_propelinear(&a, &one).unwrap(), PropelinearCode::kronecker_propelinear(&one, &a).unwrap()] {
            assert_eq!(k.pis(), a.pis());
            assert_eq!(k.code().matrix(), a.code().matrix());
        }
        let b = PropelinearCode::ghfp_from_cocycle(&s3().tensor(&s3()).unwrap()).unwrap();
        let k = PropelinearCode::kronecker_propelinear(&a, &b).unwrap();
        let t = PropelinearCode::ghfp_from_cocycle(&s3().tensor(&s3()).unwrap().tensor(&s3()).unwrap()).unwrap();
        assert_eq!(k.pis(), t.pis());
        let c = PropelinearCode::ghfp_from_cocycle(&Cocycle::multiplication(&gf(2, 2), ElementOrder::Encoding)).unwrap();
        assert_eq!(PropelinearCode::kronecker_propelinear(&a, &c).unwrap_err(), Error::FieldMismatch);
    }

    #[test]
    fn code_group_inverses() {
        let p = PropelinearCode::ghfp_from_cocycle(&Cocycle::multiplication(&gf(2, 3), ElementOrder::PrimitivePower)).unwrap();
        let g = p.code_group();
        for x in 0..g.order() {
            assert_eq!(g.op(x, g.inv(x)), 0);
            assert_eq!(g.op(g.inv(x), x), 0);
        }
    }
}
