//! Permutations of coordinate sets, 0-based internally.
//!
//! A permutation acts on vectors by moving the entry at position `i` to
//! position `images[i]`, i.e. `(pi v)_i = v_{pi^{-1}(i)}`, and composition is
//! `(f.compose(g))(i) = f(g(i))`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn new(images: Vec<u32>) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(Error::NotAPermutation(format!("{images:?}")));
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Perm {
        debug_assert!(Perm::new(images.clone()).is_ok());
        Perm { images }
    }

    pub fn identity(n: usize) -> Perm {
        Perm { images: (0..n as u32).collect() }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Perm) -> Result<Perm> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch { left: self.len(), right: other.len() });
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Perm) -> Perm {
        Perm { images: other.images.iter().map(|&j| self.images[j as usize]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Perm { images: inv }
    }

    pub fn apply<T: Copy>(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.len() {
            return Err(Error::LengthMismatch { left: self.len(), right: v.len() });
        }
        Ok(self.apply_unchecked(v))
    }

    pub(crate) fn apply_unchecked<T: Copy>(&self, v: &[T]) -> Vec<T> {
        let mut out = v.to_vec();
        for (i, &j) in self.images.iter().enumerate() {
            out[j as usize] = v[i];
        }
        out
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|&(i, &j)| i == j as usize).count()
    }

    /// Disjoint cycle notation, 1-based, fixed points omitted; the identity
    /// prints as `()`.
    pub fn cycle_form(&self) -> String {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = String::new();
        for start in 0..n {
            if seen[start] || self.image(start) == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push((i + 1).to_string());
                i = self.image(i);
            }
            out.push('(');
            out.push_str(&cycle.join(","));
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }

    /// Inverse of [`Perm::cycle_form`] on `n` points.
    pub fn parse_cycles(s: &str, n: usize) -> Result<Perm> {
        let bad = || Error::NotAPermutation(s.to_string());
        let mut images: Vec<u32> = (0..n as u32).collect();
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "()" || s == "I" || s.is_empty() {
            return Ok(Perm { images });
        }
        let mut seen = vec![false; n];
        for chunk in s.split(')') {
            if chunk.is_empty() {
                continue;
            }
            let body = chunk.strip_prefix('(').ok_or_else(bad)?;
            let pts = body
                .split(',')
                .map(|t| t.parse::<usize>().ok().filter(|&x| x >= 1 && x <= n).map(|x| x - 1))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(bad)?;
            for (k, &a) in pts.iter().enumerate() {
                if seen[a] {
                    return Err(bad());
                }
                seen[a] = true;
                images[a] = pts[(k + 1) % pts.len()] as u32;
            }
        }
        Ok(Perm { images })
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{}", self.cycle_form())
    }
}
