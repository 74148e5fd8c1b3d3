//! The central extension `E_ψ`, relative difference sets, and the cocycle
//! recovered from a GHFP code.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cocycle::Cocycle;
use crate::error::{Error, Result};
use crate::field::Fe;
use crate::gh_matrix::is_gh;
use crate::group::{generators, FiniteGroup, Group};
use crate::propelinear::PropelinearCode;

/// Up to this order, centrality and normality are checked exhaustively.
const EXHAUSTIVE_LIMIT: usize = 10_000;

/// `E_ψ = U × G` with `(u,g)(v,h) = (u + v + ψ(g,h), gh)`; element
/// `(u,g)` has index `g·q + u`.
#[derive(Clone, Debug)]
pub struct ExtensionGroup {
    psi: Cocycle,
}

impl ExtensionGroup {
    pub fn new(psi: Cocycle) -> ExtensionGroup {
        ExtensionGroup { psi }
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.psi
    }

    fn q(&self) -> usize {
        self.psi.field().q()
    }

    pub fn element(&self, u: Fe, g: usize) -> usize {
        g * self.q() + u as usize
    }

    pub fn split(&self, x: usize) -> (Fe, usize) {
        ((x % self.q()) as Fe, x / self.q())
    }

    /// `U × {1}`.
    pub fn central_subgroup(&self) -> Vec<usize> {
        (0..self.q()).collect()
    }

    /// `T(ψ) = {(0, g)}`.
    pub fn transversal(&self) -> Vec<usize> {
        (0..self.psi.order()).map(|g| g * self.q()).collect()
    }

    /// Every element of `U × {1}` commutes with all of `E`; exhaustive up
    /// to `10^4` elements, seeded samples above.
    pub fn is_central(&self, seed: u64) -> bool {
        let n = self.order();
        let z = self.central_subgroup();
        let commutes = |x: usize| z.iter().all(|&c| self.op(x, c) == self.op(c, x));
        if n <= EXHAUSTIVE_LIMIT {
            (0..n).into_par_iter().all(commutes)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..EXHAUSTIVE_LIMIT).all(|_| commutes(rng.gen_range(0..n)))
        }
    }
}

impl FiniteGroup for ExtensionGroup {
    fn order(&self) -> usize {
        self.psi.order() * self.q()
    }

    fn op(&self, a: usize, b: usize) -> usize {
        let f = self.psi.field();
        let ((u, g), (v, h)) = (self.split(a), self.split(b));
        let w = f.add(f.add(u, v), self.psi.get(g, h));
        self.element(w, self.psi.group().mul(g, h))
    }

    /// `(u,g)^{-1} = (-u - ψ(g, g^{-1}), g^{-1})`.
    fn inv(&self, a: usize) -> usize {
        let f = self.psi.field();
        let (u, g) = self.split(a);
        let gi = self.psi.group().inverse(g);
        self.element(f.neg(f.add(u, self.psi.get(g, gi))), gi)
    }
}

/// `(v, m, k, λ)`: `|E| = v·m`, forbidden subgroup of order `m`, `|R| = k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RdsParams {
    pub v: usize,
    pub m: usize,
    pub k: usize,
    pub lambda: usize,
}

impl RdsParams {
    /// The `(v, q, v, v/q)` parameters of a cocyclic GH(q, v/q).
    pub fn cocyclic(v: usize, q: usize) -> RdsParams {
        RdsParams { v, m: q, k: v, lambda: v / q }
    }

    /// `k(k-1) = λ(vm - m)`.
    pub fn counting_identity_holds(&self) -> bool {
        self.k * (self.k.saturating_sub(1)) == self.lambda * (self.v * self.m - self.m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RdsReport {
    pub is_rds: bool,
    /// First element whose count is wrong, with that count.
    pub witness: Option<(usize, usize)>,
    /// Number of quotients `r_1 r_2^{-1}`, `r_1 ≠ r_2`, landing in `Z`.
    pub hits_on_z: usize,
    /// Distinct count values on `E \ Z`, sorted.
    pub counts_off_z: Vec<usize>,
}

fn check_normal<G: FiniteGroup + Sync>(e: &G, z: &[usize], inside: &[bool]) -> Result<()> {
    let closed = z.par_iter().all(|&a| z.iter().all(|&b| inside[e.op(a, e.inv(b))]));
    if !closed || !inside[0] {
        return Err(Error::NotNormal);
    }
    // conjugation by generators of E suffices
    let gens = generators(e);
    let stable = gens.par_iter().all(|&g| z.iter().all(|&c| inside[e.op(e.op(g, c), e.inv(g))]));
    if stable {
        Ok(())
    } else {
        Err(Error::NotNormal)
    }
}

/// Counts the full multiset `{r_1 r_2^{-1} : r_1 ≠ r_2}`: `Z \ {1}` must
/// receive nothing and every element of `E \ Z` exactly `λ` hits (the
/// identity never occurs as a quotient of distinct elements).
pub fn is_relative_difference_set<G: FiniteGroup + Sync>(
    r: &[usize],
    e: &G,
    z: &[usize],
    params: RdsParams,
) -> Result<RdsReport> {
    if r.len() != params.k {
        return Err(Error::SizeMismatch { expected: params.k, actual: r.len() });
    }
    let n = e.order();
    if z.len() != params.m || n != params.v * params.m {
        return Err(Error::SizeMismatch { expected: params.v * params.m, actual: n });
    }
    let mut inside = vec![false; n];
    for &c in z {
        inside[c] = true;
    }
    check_normal(e, z, &inside)?;
    let inverses: Vec<usize> = r.iter().map(|&x| e.inv(x)).collect();
    let counts = r
        .par_iter()
        .enumerate()
        .fold(
            HashMap::<usize, usize>::new,
            |mut acc, (i, &a)| {
                for (j, &bi) in inverses.iter().enumerate() {
                    if i != j {
                        *acc.entry(e.op(a, bi)).or_default() += 1;
                    }
                }
                acc
            },
        )
        .reduce(HashMap::new, |mut a, b| {
            for (k, c) in b {
                *a.entry(k).or_default() += c;
            }
            a
        });
    let hits_on_z = z.iter().map(|c| counts.get(c).copied().unwrap_or(0)).sum();
    let mut witness = z.iter().find_map(|&c| counts.get(&c).map(|&k| (c, k)));
    let mut off: Vec<usize> = Vec::new();
    for x in 0..n {
        if inside[x] {
            continue;
        }
        let c = counts.get(&x).copied().unwrap_or(0);
        if !off.contains(&c) {
            off.push(c);
        }
        if witness.is_none() && c != params.lambda {
            witness = Some((x, c));
        }
    }
    off.sort_unstable();
    Ok(RdsReport { is_rds: witness.is_none(), witness, hits_on_z, counts_off_z: off })
}

/// `T(ψ)` against `U × {1}` in `E_ψ` with parameters `(v, q, v, v/q)`.
pub fn transversal_is_rds(psi: &Cocycle) -> Result<RdsReport> {
    let e = ExtensionGroup::new(psi.clone());
    let params = RdsParams::cocyclic(psi.order(), psi.field().q());
    is_relative_difference_set(&e.transversal(), &e, &e.central_subgroup(), params)
}

/// `F_H` against `C_1` inside `(C, ⋆)`.
pub fn rows_are_rds(p: &PropelinearCode) -> Result<RdsReport> {
    let q = p.q();
    let rows: Vec<usize> = (0..p.length()).map(|r| r * q).collect();
    let c1: Vec<usize> = (0..q).collect();
    is_relative_difference_set(&rows, &p.code_group(), &c1, RdsParams::cocyclic(p.length(), q))
}

/// The three views of a cocycle that must agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Equivalence {
    pub orthogonal: bool,
    pub gh: bool,
    pub rds: bool,
}

impl Equivalence {
    pub fn agree(&self) -> bool {
        self.orthogonal == self.gh && self.gh == self.rds
    }
}

pub fn equivalence(psi: &Cocycle) -> Result<Equivalence> {
    let orthogonal = psi.is_orthogonal()?;
    let gh = match is_gh(&psi.matrix()) {
        Ok(_) => true,
        Err(Error::NotGeneralizedHadamard { .. }) => false,
        Err(e) => return Err(e),
    };
    let rds = transversal_is_rds(psi)?.is_rds;
    Ok(Equivalence { orthogonal, gh, rds })
}

/// `|F_H ∩ x⋆F_H|` for every codeword index `x`: `x ⋆ f_s` lies in `F_H`
/// exactly when its shift is zero.
pub fn fh_intersection_profile(p: &PropelinearCode) -> Vec<usize> {
    let q = p.q();
    (0..p.len())
        .into_par_iter()
        .map(|x| (0..p.length()).filter(|&s| p.star_index(x, s * q).is_multiple_of(q)).count())
        .collect()
}

/// Expected profile value: `v` at `0`, `0` on `C_1 \ {0}`, `v/q` elsewhere.
pub fn expected_profile(p: &PropelinearCode, x: usize) -> usize {
    let q = p.q();
    match (x / q, x % q) {
        (0, 0) => p.length(),
        (0, _) => 0,
        _ => p.length() / q,
    }
}

/// `ψ_{F_H}(g, h) = k` when `σ(g) ⋆ σ(h) ∈ k1 ⋆ F_H`, over `G = C/C_1`
/// with section `σ(f ⋆ C_1) = f` for `f ∈ F_H`.
pub fn cocycle_from_code(p: &PropelinearCode) -> Result<Cocycle> {
    let (v, q) = (p.length(), p.q());
    // the section: the unique word of each coset with a zero first entry
    let section: Vec<usize> = (0..v)
        .map(|r| (0..q).map(|a| r * q + a).find(|&c| p.code().word(c)[0] == 0).ok_or(Error::SectionUndefined(r)))
        .collect::<Result<_>>()?;
    let table: Vec<u32> = (0..v * v).map(|i| (p.star_index(section[i / v], section[i % v]) / q) as u32).collect();
    let group = Group::from_table(v, table)?;
    let psi: Vec<Fe> = (0..v * v)
        .map(|i| {
            let x = p.star_index(section[i / v], section[i % v]);
            // k1 ⋆ f = f + k1, so the shift of the product is k
            (x % q) as Fe
        })
        .collect();
    Cocycle::check(group, p.field().clone(), psi)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroSetReport {
    /// `|D_j|` for every coordinate `j`.
    pub sizes: Vec<usize>,
    /// `D_1 = F_H`.
    pub first_is_rows: bool,
    /// Each field element occurs `v/q` times in every column but the first.
    pub columns_balanced: bool,
}

impl ZeroSetReport {
    pub fn passed(&self, v: usize) -> bool {
        self.first_is_rows && self.columns_balanced && self.sizes.iter().all(|&s| s == v)
    }
}

/// `D_j = {x ∈ C : x_j = 0}` as codeword indices.
pub fn zero_set(p: &PropelinearCode, j: usize) -> Vec<usize> {
    let q = p.q();
    let f = p.field();
    (0..p.len())
        .filter(|&c| f.add(p.code().row(c / q)[j], (c % q) as Fe) == 0)
        .collect()
}

pub fn coset_zero_sets(p: &PropelinearCode) -> ZeroSetReport {
    let (v, q) = (p.length(), p.q());
    let sizes: Vec<usize> = (0..v).into_par_iter().map(|j| zero_set(p, j).len()).collect();
    let rows: Vec<usize> = (0..v).map(|r| r * q).collect();
    let first_is_rows = zero_set(p, 0) == rows;
    let columns_balanced = (1..v).into_par_iter().all(|j| {
        let mut counts = vec![0usize; q];
        for r in 0..v {
            counts[p.code().row(r)[j] as usize] += 1;
        }
        counts.iter().all(|&c| c * q == v)
    });
    ZeroSetReport { sizes, first_is_rows, columns_balanced }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::group::{abelian_invariants, ElementOrder};

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

    #[test]
    fn extension_group_axioms() {
        let e = ExtensionGroup::new(gh41());
        assert_eq!(e.order(), 16);
        // validate through the table constructor
        let table: Vec<u32> = (0..256).map(|i| e.op(i / 16, i % 16) as u32).collect();
        let g = Group::from_table(16, table).unwrap();
        for x in 0..16 {
            assert_eq!(g.inverse(x), e.inv(x));
        }
        assert!(e.is_central(0));
        assert_eq!(abelian_invariants(&e), Some(vec![4, 4]));
    }

    #[test]
    fn trivial_cocycle_gives_direct_product() {
        let g = Group::elementary_abelian(3, 1).unwrap();
        let e = ExtensionGroup::new(Cocycle::trivial(g, gf(3, 1)));
        assert_eq!(abelian_invariants(&e), Some(vec![3, 3]));
        let rep = transversal_is_rds(e.cocycle()).unwrap();
        assert!(!rep.is_rds);
        // the six quotients stay in {0} × G: three hits on each of its two
        // non-identity elements, none elsewhere
        assert_eq!(rep.hits_on_z, 0);
        assert_eq!(rep.counts_off_z, vec![0, 3]);
    }

    #[test]
    fn transversal_rds_for_orthogonal_cocycles() {
        for psi in [gh41(), s3(), s3().tensor(&s3()).unwrap()] {
            let rep = transversal_is_rds(&psi).unwrap();
            assert!(rep.is_rds);
            let params = RdsParams::cocyclic(psi.order(), psi.field().q());
            assert!(params.counting_identity_holds());
            assert_eq!(rep.counts_off_z, vec![params.lambda]);
            assert!(equivalence(&psi).unwrap().agree());
        }
    }

    #[test]
    fn rds_input_errors() {
        let psi = s3();
        let e = ExtensionGroup::new(psi.clone());
        let params = RdsParams::cocyclic(3, 3);
        assert_eq!(
            is_relative_difference_set(&[0, 3], &e, &e.central_subgroup(), params),
            Err(Error::SizeMismatch { expected: 3, actual: 2 })
        );
        // {0, 4, 5} = {(0,0), (1,1), (2,1)} is not closed
        assert_eq!(is_relative_difference_set(&e.transversal(), &e, &[0, 4, 5], params), Err(Error::NotNormal));
    }

    #[test]
    fn equivalence_on_non_orthogonal_corpus() {
        let f = gf(3, 1);
        let g = Group::elementary_abelian(3, 2).unwrap();
        let triv = Cocycle::trivial(g.clone(), f.clone());
        let half = s3().tensor(&Cocycle::trivial(Group::elementary_abelian(3, 1).unwrap(), f)).unwrap();
        for psi in [triv, half] {
            let eq = equivalence(&psi).unwrap();
            assert!(eq.agree());
            assert!(!eq.orthogonal);
        }
    }

    #[test]
    fn rows_form_rds_in_code_group() {
        let p = PropelinearCode::ghfp_from_cocycle(&s3().tensor(&s3()).unwrap()).unwrap();
        assert!(rows_are_rds(&p).unwrap().is_rds);
    }

    #[test]
    fn intersection_profile_matches_direct_count() {
        let psi = Cocycle::multiplication(&gf(2, 3), ElementOrder::PrimitivePower);
        for p in [
            PropelinearCode::ghfp_from_cocycle(&psi).unwrap(),
            PropelinearCode::ghfp_from_cocycle(&s3().tensor(&s3()).unwrap()).unwrap(),
        ] {
            let prof = fh_intersection_profile(&p);
            let rows: std::collections::HashSet<Vec<Fe>> = (0..p.length()).map(|r| p.code().row(r).to_vec()).collect();
            for x in 0..p.len() {
                assert_eq!(prof[x], expected_profile(&p, x));
                let xw = p.code().word(x);
                let direct = (0..p.length()).filter(|&s| rows.contains(&p.star(&xw, p.code().row(s)).unwrap())).count();
                assert_eq!(prof[x], direct);
            }
        }
    }

    #[test]
    fn cocycle_round_trip() {
        for psi in [gh41(), s3().tensor(&s3()).unwrap(), Cocycle::multiplication(&gf(2, 3), ElementOrder::PrimitivePower)] {
            let p = PropelinearCode::ghfp_from_cocycle(&psi).unwrap();
            let back = cocycle_from_code(&p).unwrap();
            assert_eq!(back.order(), psi.order());
            assert!(back.is_orthogonal().unwrap());
            let e = ExtensionGroup::new(back);
            assert_eq!(e.order(), p.len());
            assert_eq!(abelian_invariants(&e), abelian_invariants(&p.code_group()));
        }
        let one = PropelinearCode::ghfp_from_cocycle(&Cocycle::trivial(Group::cyclic(1), gf(3, 1))).unwrap();
        assert_eq!(cocycle_from_code(&one).unwrap().table(), &[0]);
    }

    #[test]
    fn zero_sets() {
        let p = PropelinearCode::ghfp_from_cocycle(&gh41()).unwrap();
        let rep = coset_zero_sets(&p);
        assert!(rep.passed(4));
        assert_eq!(zero_set(&p, 0), vec![0, 4, 8, 12]);
        let p8 = PropelinearCode::ghfp_from_cocycle(&Cocycle::multiplication(&gf(2, 3), ElementOrder::PrimitivePower)).unwrap();
        let rep = coset_zero_sets(&p8);
        assert_eq!(rep.sizes, vec![8; 8]);
        // D_j by brute force over explicit words
        for j in 0..8 {
            let direct: Vec<usize> = (0..p8.len()).filter(|&c| p8.code().word(c)[j] == 0).collect();
            assert_eq!(zero_set(&p8, j), direct);
        }
    }
}
