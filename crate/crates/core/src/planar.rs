//! Planar power maps `φ(g) = g^{(3^b+1)/2}` on GF(3^a) and the rank/kernel
//! table of the codes of their coboundaries.

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;

use crate::cocycle::Cocycle;
use crate::code::GhCode;
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::group::{ElementOrder, Group};

/// Defining polynomials of GF(3^a), coefficients `c_0..c_a`. Each is the
/// smallest monic irreducible by encoding; degree 4 is `2 + x + x^4`.
pub const PINNED_POLYNOMIALS: &[(u32, &[u32])] = &[
    (4, &[2, 1, 0, 0, 1]),
    (5, &[1, 2, 0, 0, 0, 1]),
    (6, &[2, 1, 0, 0, 0, 0, 1]),
    (7, &[2, 0, 1, 0, 0, 0, 0, 1]),
    (8, &[2, 0, 1, 0, 0, 0, 0, 0, 1]),
    (9, &[1, 0, 1, 2, 0, 0, 0, 0, 0, 1]),
    (10, &[1, 0, 2, 0, 0, 0, 0, 0, 0, 0, 1]),
];

/// Largest `a` attempted by default, and with `--big`.
pub const DEFAULT_BUDGET: u32 = 6;
pub const BIG_BUDGET: u32 = 7;

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `b` with `gcd(a,b) = 1`, `b` odd and `3 ≤ b ≤ a-1`.
pub fn admissible_pairs(a: u32) -> Vec<u32> {
    (3..a).filter(|&b| b % 2 == 1 && gcd(a, b) == 1).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlanarParams {
    pub a: u32,
    pub b: u32,
}

impl PlanarParams {
    /// Parameters in the restricted range `3 ≤ b ≤ a-1`.
    pub fn new(a: u32, b: u32) -> Result<PlanarParams> {
        if a < 4 || !admissible_pairs(a).contains(&b) {
            return Err(Error::InadmissibleParams(a, b));
        }
        Ok(PlanarParams { a, b })
    }

    /// The full planar range `1 < b < 2a-1`, `b` odd, `gcd(a,b) = 1`;
    /// `b` and `2a - b` give equivalent codes.
    pub fn unrestricted(a: u32, b: u32) -> Result<PlanarParams> {
        if a < 2 || b <= 1 || b >= 2 * a - 1 || b.is_multiple_of(2) || gcd(a, b) != 1 {
            return Err(Error::InadmissibleParams(a, b));
        }
        Ok(PlanarParams { a, b })
    }

    /// `(3^b + 1)/2`.
    pub fn exponent(&self) -> i64 {
        (3i64.pow(self.b) + 1) / 2
    }
}

pub fn pinned_polynomial(a: u32) -> Option<&'static [u32]> {
    PINNED_POLYNOMIALS.iter().find(|(d, _)| *d == a).map(|(_, p)| *p)
}

/// GF(3^a) with the pinned polynomial (the default one outside the table).
pub fn planar_field(a: u32) -> Result<Field> {
    match pinned_polynomial(a) {
        Some(poly) => Field::new(3, a, poly),
        None => Field::with_default(3, a),
    }
}

fn check_field(params: PlanarParams, field: &Field) -> Result<()> {
    if field.p() != 3 || field.m() != params.a {
        return Err(Error::DomainMismatch(format!("planar map for a = {} needs GF(3^{})", params.a, params.a)));
    }
    Ok(())
}

/// `φ(g) = g^e` tabulated in encoding order.
pub fn planar_map(params: PlanarParams, field: &Field) -> Result<Vec<Fe>> {
    check_field(params, field)?;
    let e = params.exponent();
    field.elements().map(|g| field.pow(g, e)).collect()
}

/// `∂φ(g,h) = φ(g+h) - φ(g) - φ(h)` over `(GF(3^a), +)` in encoding order.
pub fn planar_coboundary(params: PlanarParams, field: &Field) -> Result<Cocycle> {
    let phi = planar_map(params, field)?;
    let (group, _) = Group::additive_group_of(field, ElementOrder::Encoding);
    Ok(Cocycle::coboundary(group, field.clone(), &phi)?.0)
}

/// For every `h ≠ 0`, `g ↦ φ(g+h) - φ(g)` permutes the field.
pub fn is_planar(field: &Field, phi: &[Fe]) -> bool {
    let q = field.q();
    (1..q as Fe).into_par_iter().all(|h| {
        let mut seen = vec![false; q];
        field.elements().all(|g| {
            let d = field.sub(phi[field.add(g, h) as usize], phi[g as usize]) as usize;
            !std::mem::replace(&mut seen[d], true)
        })
    })
}

/// `r(b) = 3·2^{b-1} - 1`.
pub fn conjectured_rank(b: u32) -> usize {
    3 * (1usize << (b - 1)) - 1
}

#[derive(Clone, Debug, PartialEq)]
pub enum CellStatus {
    Computed { rank: usize, kernel: usize, seconds: f64 },
    Inadmissible,
    SkippedBudget,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table1Cell {
    pub a: u32,
    pub b: u32,
    pub status: CellStatus,
}

impl Table1Cell {
    pub fn v(&self) -> usize {
        3usize.pow(self.a)
    }

    pub fn conjecture(&self) -> usize {
        conjectured_rank(self.b)
    }

    /// `Some(rank == r(b))` for computed cells.
    pub fn matches_conjecture(&self) -> Option<bool> {
        match self.status {
            CellStatus::Computed { rank, .. } => Some(rank == self.conjecture()),
            _ => None,
        }
    }
}

impl fmt::Display for Table1Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} ", self.a, self.b, self.v())?;
        match &self.status {
            CellStatus::Computed { rank, kernel, seconds } => write!(
                f,
                "{rank} {kernel} {} {} {seconds:.2}",
                self.conjecture(),
                if *rank == self.conjecture() { "match" } else { "mismatch" }
            ),
            CellStatus::Inadmissible => write!(f, "- - {} inadmissible -", self.conjecture()),
            CellStatus::SkippedBudget => write!(f, "- - {} skipped(budget) -", self.conjecture()),
        }
    }
}

/// `(rank, kernel)` of `C_{a,b}`.
pub fn rank_kernel(params: PlanarParams, seed: u64) -> Result<(usize, usize)> {
    let field = planar_field(params.a)?;
    let code = GhCode::new(planar_coboundary(params, &field)?.gh_matrix()?)?;
    Ok((code.rank(), code.kernel(seed).dim))
}

/// One cell; `a > budget` yields [`Error::BudgetExceeded`].
pub fn table1_cell(a: u32, b: u32, budget: u32, seed: u64) -> Result<Table1Cell> {
    let params = PlanarParams::new(a, b)?;
    if a > budget {
        return Err(Error::BudgetExceeded(format!("a = {a} exceeds the budget a ≤ {budget}")));
    }
    let start = Instant::now();
    let (rank, kernel) = rank_kernel(params, seed)?;
    let seconds = start.elapsed().as_secs_f64();
    Ok(Table1Cell { a, b, status: CellStatus::Computed { rank, kernel, seconds } })
}

/// All cells for `a` in `a_range` and odd `b` in `b_range`; inadmissible and
/// over-budget cells are marked and the run continues.
pub fn table1(
    a_range: std::ops::RangeInclusive<u32>,
    b_range: std::ops::RangeInclusive<u32>,
    budget: u32,
    seed: u64,
) -> Vec<Table1Cell> {
    let mut cells = Vec::new();
    for b in b_range.filter(|b| b % 2 == 1) {
        for a in a_range.clone() {
            let status = match table1_cell(a, b, budget, seed) {
                Ok(cell) => cell.status,
                Err(Error::InadmissibleParams(..)) => CellStatus::Inadmissible,
                Err(Error::BudgetExceeded(_)) => CellStatus::SkippedBudget,
                Err(e) => panic!("planar construction failed for ({a},{b}): {e}"),
            };
            cells.push(Table1Cell { a, b, status });
        }
    }
    cells
}
