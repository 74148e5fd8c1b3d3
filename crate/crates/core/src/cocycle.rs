//! Normalized 2-cocycles `ψ: G × G → (F_q, +)` stored as `v × v` tables.
//!
//! Written additively, the cocycle identity reads
//! `ψ(g,h) + ψ(gh,k) = ψ(g,hk) + ψ(h,k)` and the coboundary of a map
//! `φ: G → F_q` is `∂φ(g,h) = φ(gh) - φ(g) - φ(h)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::gh_matrix::{GhMatrix, Matrix};
use crate::group::{ElementOrder, Group};

const EXHAUSTIVE_IDENTITY: usize = 256;
const SAMPLED_TRIPLES: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct Cocycle {
    group: Group,
    field: Field,
    table: Vec<Fe>,
}

/// First row of `M_ψ` (in row-major scan order) that is not flat.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrthogonalityWitness {
    pub g: usize,
    pub u: Fe,
    pub count: usize,
}

impl Cocycle {
    /// Validates shape, entries, normalization and the cocycle identity
    /// (every triple for `v ≤ 256`, 10^6 seeded random triples above).
    pub fn check(group: Group, field: Field, table: Vec<Fe>) -> Result<Cocycle> {
        let v = group.order();
        if table.len() != v * v {
            return Err(Error::DomainMismatch(format!("table has {} entries, group order is {v}", table.len())));
        }
        if let Some(pos) = table.iter().position(|&x| x as usize >= field.q()) {
            return Err(Error::DomainMismatch(format!("entry {} at ({}, {}) is not a field element", table[pos], pos / v, pos % v)));
        }
        let psi = Cocycle { group, field, table };
        psi.check_normalized()?;
        if let Some((g, h, k)) = psi.identity_violation() {
            return Err(Error::CocycleIdentityViolated(g, h, k));
        }
        Ok(psi)
    }

    pub fn trivial(group: Group, field: Field) -> Cocycle {
        let v = group.order();
        Cocycle { group, field, table: vec![0; v * v] }
    }

    /// `ψ(g,h) = g·h` on `(F_q, +)` in the requested element order; its
    /// matrix is the Sylvester matrix `S_q`.
    pub fn multiplication(field: &Field, order: ElementOrder) -> Cocycle {
        let (group, elems) = Group::additive_group_of(field, order);
        let mut table = Vec::with_capacity(elems.len() * elems.len());
        for &a in &elems {
            for &b in &elems {
                table.push(field.mul(a, b));
            }
        }
        Cocycle { group, field: field.clone(), table }
    }

    /// `∂φ`; a map with `φ(1) ≠ 0` is first shifted by `-φ(1)`, and the shift
    /// is returned alongside the cocycle.
    pub fn coboundary(group: Group, field: Field, phi: &[Fe]) -> Result<(Cocycle, Fe)> {
        let v = group.order();
        if phi.len() != v {
            return Err(Error::DomainMismatch(format!("map has {} values, group order is {v}", phi.len())));
        }
        if phi.iter().any(|&x| x as usize >= field.q()) {
            return Err(Error::DomainMismatch("map value is not a field element".into()));
        }
        let shift = phi[0];
        let phi: Vec<Fe> = phi.iter().map(|&x| field.sub(x, shift)).collect();
        let table: Vec<Fe> = (0..v)
            .into_par_iter()
            .flat_map_iter(|g| {
                let (phi, field, group) = (&phi, &field, &group);
                (0..v).map(move |h| field.sub(field.sub(phi[group.mul(g, h)], phi[g]), phi[h]))
            })
            .collect();
        Ok((Cocycle { group, field, table }, shift))
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    #[inline]
    pub fn get(&self, g: usize, h: usize) -> Fe {
        self.table[g * self.order() + h]
    }

    pub fn row(&self, g: usize) -> &[Fe] {
        let v = self.order();
        &self.table[g * v..(g + 1) * v]
    }

    pub fn table(&self) -> &[Fe] {
        &self.table
    }

    pub fn is_symmetric(&self) -> bool {
        let v = self.order();
        (0..v).all(|g| (g + 1..v).all(|h| self.get(g, h) == self.get(h, g)))
    }

    /// `-ψ`, again a cocycle over the same group.
    pub fn negated(&self) -> Cocycle {
        let table = self.table.iter().map(|&x| self.field.neg(x)).collect();
        Cocycle { group: self.group.clone(), field: self.field.clone(), table }
    }

    fn check_normalized(&self) -> Result<()> {
        let v = self.order();
        for g in 0..v {
            if self.get(0, g) != 0 {
                return Err(Error::NotNormalized(0, g));
            }
            if self.get(g, 0) != 0 {
                return Err(Error::NotNormalized(g, 0));
            }
        }
        Ok(())
    }

    fn violates(&self, g: usize, h: usize, k: usize) -> bool {
        let f = &self.field;
        let gr = &self.group;
        let lhs = f.add(self.get(g, h), self.get(gr.mul(g, h), k));
        let rhs = f.add(self.get(g, gr.mul(h, k)), self.get(h, k));
        lhs != rhs
    }

    fn identity_violation(&self) -> Option<(usize, usize, usize)> {
        let v = self.order();
        if v <= EXHAUSTIVE_IDENTITY {
            (0..v).into_par_iter().find_map_first(|g| {
                (0..v).find_map(|h| (0..v).find(|&k| self.violates(g, h, k)).map(|k| (g, h, k)))
            })
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            (0..SAMPLED_TRIPLES).find_map(|_| {
                let (g, h, k) = (rng.gen_range(0..v), rng.gen_range(0..v), rng.gen_range(0..v));
                self.violates(g, h, k).then_some((g, h, k))
            })
        }
    }

    fn row_witness(&self, g: usize, lambda: usize) -> Option<OrthogonalityWitness> {
        let mut counts = vec![0usize; self.field.q()];
        for &x in self.row(g) {
            counts[x as usize] += 1;
        }
        counts
            .iter()
            .position(|&c| c != lambda)
            .map(|u| OrthogonalityWitness { g, u: u as Fe, count: counts[u] })
    }

    /// `None` when every non-identity row hits each field element exactly
    /// `v/q` times; otherwise the first offending row.
    pub fn orthogonality(&self) -> Result<Option<OrthogonalityWitness>> {
        let (v, q) = (self.order(), self.field.q());
        if v % q != 0 {
            return Err(Error::DivisibilityViolated { divisor: q, order: v });
        }
        let lambda = v / q;
        Ok((1..v).into_par_iter().find_map_first(|g| self.row_witness(g, lambda)))
    }

    pub fn is_orthogonal(&self) -> Result<bool> {
        Ok(self.orthogonality()?.is_none())
    }

    /// `(ψ⊗ψ')((g,g'),(h,h')) = ψ(g,h) + ψ'(g',h')` over `G × G'` with
    /// G-major indexing, so that `M_{ψ⊗ψ'}` is the Kronecker sum of the
    /// two matrices.
    pub fn tensor(&self, other: &Cocycle) -> Result<Cocycle> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let group = Group::direct_product(&self.group, &other.group);
        let (v, w) = (self.order(), other.order());
        let n = v * w;
        let f = &self.field;
        let table: Vec<Fe> = (0..n)
            .into_par_iter()
            .flat_map_iter(|a| {
                let (a1, a2) = (a / w, a % w);
                (0..n).map(move |b| f.add(self.get(a1, b / w), other.get(a2, b % w)))
            })
            .collect();
        Ok(Cocycle { group, field: self.field.clone(), table })
    }

    /// `M_ψ`, the table read as a matrix with the group's indexing.
    pub fn matrix(&self) -> Matrix {
        Matrix::from_parts_unchecked(self.field.clone(), self.order(), self.order(), self.table.clone())
    }

    /// `M_ψ` as a generalized Hadamard matrix, certified through
    /// orthogonality of `ψ`.
    pub fn gh_matrix(&self) -> Result<GhMatrix> {
        if let Some(w) = self.orthogonality()? {
            return Err(Error::NotOrthogonal { g: w.g, u: w.u as u32, count: w.count });
        }
        Ok(GhMatrix::from_parts_unchecked(self.field.clone(), self.order(), self.table.clone()))
    }
}
