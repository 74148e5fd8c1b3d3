//! Incremental row reduction over GF(q).

use crate::field::{Fe, Field};

/// A basis kept in reduced echelon form: every stored vector has a pivot
/// entry equal to 1 and zeros at the pivots of the other vectors.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    field: Field,
    len: usize,
    rows: Vec<Vec<Fe>>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(field: &Field, len: usize) -> EchelonBasis {
        EchelonBasis { field: field.clone(), len, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn vectors(&self) -> &[Vec<Fe>] {
        &self.rows
    }

    /// `v - Σ v[pivot_i] * row_i`, which is zero iff `v` lies in the span.
    pub fn reduce(&self, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(v.len(), self.len);
        let f = &self.field;
        let mut v = v.to_vec();
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = v[piv];
            if c == 0 {
                continue;
            }
            let nc = f.neg(c);
            for (x, &r) in v.iter_mut().zip(row) {
                if r != 0 {
                    *x = f.add(*x, f.mul(nc, r));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Fe]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v` to the basis; returns false when it was already in the span.
    pub fn insert(&mut self, v: &[Fe]) -> bool {
        let mut r = self.reduce(v);
        let Some(piv) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let f = &self.field;
        let inv = f.inv(r[piv]).expect("pivot is nonzero");
        for x in r.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let c = row[piv];
            if c != 0 {
                let nc = f.neg(c);
                for (x, &y) in row.iter_mut().zip(&r) {
                    if y != 0 {
                        *x = f.add(*x, f.mul(nc, y));
                    }
                }
            }
        }
        self.rows.push(r);
        self.pivots.push(piv);
        true
    }
}

/// Dimension of the span of `vectors`.
pub fn rank_of<'a, I>(field: &Field, len: usize, vectors: I) -> usize
where
    I: IntoIterator<Item = &'a [Fe]>,
{
    let mut basis = EchelonBasis::new(field, len);
    for v in vectors {
        basis.insert(v);
    }
    basis.dim()
}
