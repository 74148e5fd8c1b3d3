//! Generalized Hadamard matrices over `(F_q, +)`: verification,
//! normalization, Sylvester-type constructions and Kronecker sums.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};

/// A dense matrix over GF(q) that has not been checked for any property.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl Matrix {
    pub fn new(field: Field, rows: usize, cols: usize, data: Vec<Fe>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch { left: data.len(), right: rows * cols });
        }
        if data.iter().any(|&x| x as usize >= field.q()) {
            return Err(Error::DomainMismatch("entry is not a field element".into()));
        }
        Ok(Matrix { field, rows, cols, data })
    }

    pub(crate) fn from_parts_unchecked(field: Field, rows: usize, cols: usize, data: Vec<Fe>) -> Matrix {
        Matrix { field, rows, cols, data }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Fe] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.data[i * self.cols + j]
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        Matrix { field: self.field.clone(), rows: self.cols, cols: self.rows, data }
    }
}

/// A verified GH(q, v/q) matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct GhMatrix {
    field: Field,
    v: usize,
    data: Vec<Fe>,
}

/// The multiset `{h_ik - h_jk}` of the first non-flat row pair.
fn pair_witness(f: &Field, a: &[Fe], b: &[Fe], lambda: usize, counts: &mut [usize]) -> Option<(Fe, usize)> {
    counts.iter_mut().for_each(|c| *c = 0);
    for (&x, &y) in a.iter().zip(b) {
        counts[f.sub(x, y) as usize] += 1;
    }
    counts.iter().position(|&c| c != lambda).map(|u| (u as Fe, counts[u]))
}

fn first_violation(m: &Matrix) -> Result<Option<(usize, usize, Fe, usize)>> {
    if m.rows != m.cols {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    let (v, q) = (m.rows, m.field.q());
    if v % q != 0 {
        return Err(Error::DivisibilityViolated { divisor: q, order: v });
    }
    let lambda = v / q;
    let row = |i: usize| &m.data[i * v..(i + 1) * v];
    Ok((0..v).into_par_iter().find_map_first(|i| {
        let mut counts = vec![0usize; q];
        (i + 1..v).find_map(|j| pair_witness(&m.field, row(i), row(j), lambda, &mut counts).map(|(u, c)| (i, j, u, c)))
    }))
}

/// Checks that every pair of distinct rows has a flat difference multiset.
/// The error names the first offending pair `(i, j)` in lexicographic order.
pub fn is_gh(m: &Matrix) -> Result<GhMatrix> {
    if let Some((i, j, u, count)) = first_violation(m)? {
        return Err(Error::NotGeneralizedHadamard { i, j, u: u as u32, count });
    }
    Ok(GhMatrix { field: m.field.clone(), v: m.rows, data: m.data.clone() })
}

/// [`is_gh`] for both `M` and `M^T`.
pub fn is_gh_with_transpose(m: &Matrix) -> Result<GhMatrix> {
    is_gh(&m.transpose())?;
    is_gh(m)
}

impl GhMatrix {
    pub(crate) fn from_parts_unchecked(field: Field, v: usize, data: Vec<Fe>) -> GhMatrix {
        debug_assert_eq!(data.len(), v * v);
        GhMatrix { field, v, data }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.v
    }

    /// `λ = v/q`.
    pub fn lambda(&self) -> usize {
        self.v / self.field.q()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.data[i * self.v + j]
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.v..(i + 1) * self.v]
    }

    pub fn data(&self) -> &[Fe] {
        &self.data
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_parts_unchecked(self.field.clone(), self.v, self.v, self.data.clone())
    }

    pub fn is_normalized(&self) -> bool {
        (0..self.v).all(|k| self.get(0, k) == 0 && self.get(k, 0) == 0)
    }

    /// Subtracts the first row from every row, then the first column from
    /// every column. The result is GH again and has zero first row/column.
    pub fn normalize(&self) -> GhMatrix {
        let (v, f) = (self.v, &self.field);
        let mut data: Vec<Fe> = (0..v * v).map(|x| f.sub(self.data[x], self.data[x % v])).collect();
        for i in 0..v {
            let c = data[i * v];
            for x in &mut data[i * v..(i + 1) * v] {
                *x = f.sub(*x, c);
            }
        }
        GhMatrix { field: self.field.clone(), v, data }
    }
}

/// `S_q`: `entries[i][j] = e_i · e_j` with elements in encoding order.
pub fn sylvester(field: &Field) -> GhMatrix {
    sylvester_in_order(field, &field.elements().collect::<Vec<_>>())
}

/// `S_q` with rows and columns indexed by `elems` (a permutation of the
/// field elements starting with 0).
pub fn sylvester_in_order(field: &Field, elems: &[Fe]) -> GhMatrix {
    let data = elems.iter().flat_map(|&a| elems.iter().map(move |&b| field.mul(a, b))).collect();
    GhMatrix { field: field.clone(), v: elems.len(), data }
}

/// `S^t = S_q ⊕ S^{t-1}`, a GH(q, q^{t-1}).
pub fn sylvester_power(field: &Field, t: u32) -> Result<GhMatrix> {
    if t == 0 {
        return Err(Error::DomainMismatch("Sylvester power must be at least 1".into()));
    }
    let s = sylvester(field);
    let mut out = s.clone();
    for _ in 1..t {
        out = kronecker_sum_uniform(&s, &out)?;
    }
    Ok(out)
}

/// `D_(p,m,k) = [x·y]` over `V = GF(p^m)^k` in lexicographic order
/// (first coordinate most significant).
pub fn gen_sylvester(p: u32, m: u32, k: u32) -> Result<GhMatrix> {
    if k == 0 {
        return Err(Error::DomainMismatch("dimension k must be at least 1".into()));
    }
    let field = Field::with_default(p, m)?;
    let q = field.q();
    let n = q.checked_pow(k).filter(|&n| n <= 1 << 16).ok_or(Error::SizeGateExceeded { size: usize::MAX, limit: 1 << 16 })?;
    let coords = |mut x: usize| {
        let mut c = vec![0 as Fe; k as usize];
        for slot in c.iter_mut().rev() {
            *slot = (x % q) as Fe;
            x /= q;
        }
        c
    };
    let vecs: Vec<Vec<Fe>> = (0..n).map(coords).collect();
    let f = &field;
    let data = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let vecs = &vecs;
            (0..n).map(move |j| vecs[i].iter().zip(&vecs[j]).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
        })
        .collect();
    Ok(GhMatrix { field, v: n, data })
}

/// `H ⊕ (B_0,…,B_{v-1})`: block `(i,j)` is `h_ij + B_i`, laid out with
/// global row index `i·v' + s`.
pub fn kronecker_sum(h: &GhMatrix, bs: &[GhMatrix]) -> Result<GhMatrix> {
    if bs.len() != h.v {
        return Err(Error::LengthMismatch { left: bs.len(), right: h.v });
    }
    let w = bs[0].v;
    for b in bs {
        if b.field != h.field {
            return Err(Error::FieldMismatch);
        }
        if b.v != w {
            return Err(Error::OrderMismatch(w, b.v));
        }
    }
    let n = h.v * w;
    let f = &h.field;
    let data = (0..n)
        .into_par_iter()
        .flat_map_iter(|r| {
            let (i, s) = (r / w, r % w);
            let b = &bs[i];
            (0..n).map(move |c| f.add(h.get(i, c / w), b.get(s, c % w)))
        })
        .collect();
    Ok(GhMatrix { field: h.field.clone(), v: n, data })
}

/// `H ⊕ B` with every block built from the same `B`.
pub fn kronecker_sum_uniform(h: &GhMatrix, b: &GhMatrix) -> Result<GhMatrix> {
    kronecker_sum(h, &vec![b.clone(); h.v])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::Cocycle;
    use crate::group::ElementOrder;

    fn gf(p: u32, m: u32) -> Field {
        Field::with_default(p, m).unwrap()
    }

    const GH41: [Fe; 16] = [0, 0, 0, 0, 0, 1, 3, 2, 0, 3, 2, 1, 0, 2, 1, 3];

    const GH33: [Fe; 81] = [
        0, 0, 0, 0, 0, 0, 0, 0, 0, //
        0, 1, 2, 0, 1, 2, 0, 1, 2, //
        0, 2, 1, 0, 2, 1, 0, 2, 1, //
        0, 0, 0, 1, 1, 1, 2, 2, 2, //
        0, 1, 2, 1, 2, 0, 2, 0, 1, //
        0, 2, 1, 1, 0, 2, 2, 1, 0, //
        0, 0, 0, 2, 2, 2, 1, 1, 1, //
        0, 1, 2, 2, 0, 1, 1, 2, 0, //
        0, 2, 1, 2, 1, 0, 1, 0, 2,
    ];

    #[test]
    fn example_4x4_over_gf4_is_gh41() {
        let m = Matrix::new(gf(2, 2), 4, 4, GH41.to_vec()).unwrap();
        let h = is_gh_with_transpose(&m).unwrap();
        assert_eq!(h.lambda(), 1);
        assert!(h.is_normalized());
    }

    #[test]
    fn divisibility_and_shape_gates() {
        let m = Matrix::new(gf(3, 1), 1, 1, vec![0]).unwrap();
        assert_eq!(is_gh(&m).unwrap_err(), Error::DivisibilityViolated { divisor: 3, order: 1 });
        let m = Matrix::new(gf(3, 1), 1, 3, vec![0; 3]).unwrap();
        assert_eq!(is_gh(&m).unwrap_err(), Error::NotSquare { rows: 1, cols: 3 });
    }

    #[test]
    fn corrupted_entry_names_the_row_pair() {
        let mut d = GH33.to_vec();
        d[4 * 9 + 5] = 1; // row 4, column 5: 0 -> 1
        let m = Matrix::new(gf(3, 1), 9, 9, d.clone()).unwrap();
        let Error::NotGeneralizedHadamard { i, j, u, count } = is_gh(&m).unwrap_err() else { panic!() };
        assert!(i == 4 || j == 4);
        // recount the reported pair directly
        let c = (0..9).filter(|&k| (3 + d[i * 9 + k] - d[j * 9 + k]) % 3 == u as Fe).count();
        assert_eq!(c, count);
        assert_ne!(count, 3);
    }

    #[test]
    fn normalize_is_idempotent_and_preserves_gh() {
        let f = gf(2, 2);
        // permute rows of the 4x4 example and shift a column so it is not normalized
        let order = [2, 0, 3, 1];
        let mut d: Vec<Fe> = order.iter().flat_map(|&i| GH41[i * 4..i * 4 + 4].to_vec()).collect();
        for i in 0..4 {
            d[i * 4 + 2] = f.add(d[i * 4 + 2], 3);
        }
        let h = is_gh(&Matrix::new(f, 4, 4, d).unwrap()).unwrap();
        assert!(!h.is_normalized());
        let n = h.normalize();
        assert!(n.is_normalized());
        is_gh_with_transpose(&n.to_matrix()).unwrap();
        assert_eq!(n.normalize(), n);
    }

    #[test]
    fn sylvester_gf3_by_hand() {
        assert_eq!(sylvester(&gf(3, 1)).data(), &[0, 0, 0, 0, 1, 2, 0, 2, 1]);
    }

    #[test]
    fn sylvester_gf8_in_power_order_is_circulant_of_logs() {
        let f = gf(2, 3);
        let (_, elems) = crate::group::Group::additive_group_of(&f, ElementOrder::PrimitivePower);
        let s = sylvester_in_order(&f, &elems);
        // row x^i, column x^j holds x^(i+j)
        for i in 1..8 {
            for j in 1..8 {
                assert_eq!(s.get(i, j), f.exp(((i - 1 + j - 1) % 7) as u32));
            }
        }
        is_gh(&s.to_matrix()).unwrap();
    }

    #[test]
    fn sylvester_power_two_over_gf3_is_example() {
        assert_eq!(sylvester_power(&gf(3, 1), 2).unwrap().data(), &GH33[..]);
        assert_eq!(sylvester_power(&gf(5, 1), 1).unwrap(), sylvester(&gf(5, 1)));
    }

    #[test]
    fn generalized_sylvester_agrees_with_powers() {
        assert_eq!(gen_sylvester(3, 1, 2).unwrap().data(), &GH33[..]);
        let d = gen_sylvester(2, 2, 2).unwrap();
        assert_eq!(d.order(), 16);
        let h = is_gh(&d.to_matrix()).unwrap();
        assert_eq!(h.lambda(), 4);
        assert_eq!(d, sylvester_power(&gf(2, 2), 2).unwrap());
        assert_eq!(gen_sylvester(5, 1, 1).unwrap(), sylvester(&gf(5, 1)));
    }

    #[test]
    fn kronecker_sum_degenerate_and_mixed() {
        let f = gf(3, 1);
        let s = sylvester(&f);
        let one = GhMatrix::from_parts_unchecked(f.clone(), 1, vec![0]);
        assert_eq!(kronecker_sum_uniform(&s, &one).unwrap(), s);
        let other = sylvester(&gf(2, 2));
        assert_eq!(kronecker_sum_uniform(&s, &other).unwrap_err(), Error::FieldMismatch);
        let s9 = sylvester_power(&f, 2).unwrap();
        assert_eq!(kronecker_sum(&s, &[s.clone(), s9.clone(), s.clone()]).unwrap_err(), Error::OrderMismatch(3, 9));
        // distinct blocks still give a GH matrix
        let t = s.normalize();
        let mixed = kronecker_sum(&s, &[s.clone(), t.clone(), s.clone()]).unwrap();
        is_gh(&mixed.to_matrix()).unwrap();
    }

    #[test]
    fn kronecker_sum_matches_tensor_of_cocycles() {
        let f = gf(3, 1);
        let s3 = Cocycle::multiplication(&f, ElementOrder::Encoding);
        let s9 = s3.tensor(&s3).unwrap();
        let t = s3.tensor(&s9).unwrap();
        let k = kronecker_sum_uniform(&s3.gh_matrix().unwrap(), &s9.gh_matrix().unwrap()).unwrap();
        assert_eq!(t.table(), k.data());
    }
}
