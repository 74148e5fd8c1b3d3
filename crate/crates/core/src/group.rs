//! Finite groups on index sets `0..order` with identity `0`.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::perm::Perm;

/// Anything that multiplies indices `0..order()`, with `0` the identity.
pub trait FiniteGroup {
    fn order(&self) -> usize;
    fn op(&self, a: usize, b: usize) -> usize;
    fn inv(&self, a: usize) -> usize;
}

#[derive(Clone)]
enum Repr {
    Table { table: Vec<u32>, inverse: Vec<u32> },
    /// Z_p^k with tuples in lexicographic order; index = base-p integer.
    Elementary { p: u32, k: u32 },
}

#[derive(Clone)]
pub struct Group {
    order: usize,
    repr: Repr,
    labels: Option<Vec<String>>,
}

const EXHAUSTIVE_ASSOCIATIVITY: usize = 512;
const SAMPLED_TRIPLES: usize = 1_000_000;

impl Group {
    /// Validates identity row/column, the Latin-square property and
    /// associativity (exhaustive up to order 512, 10^6 seeded samples above).
    pub fn from_table(order: usize, table: Vec<u32>) -> Result<Group> {
        if order == 0 || table.len() != order * order {
            return Err(Error::InvalidGroup(format!("table of length {} for order {order}", table.len())));
        }
        let at = |i: usize, j: usize| table[i * order + j] as usize;
        for i in 0..order {
            if at(0, i) != i || at(i, 0) != i {
                return Err(Error::InvalidGroup(format!("index 0 is not the identity at {i}")));
            }
        }
        let mut seen = vec![0usize; order];
        for i in 0..order {
            for j in 0..order {
                let x = at(i, j);
                if x >= order || seen[x] == 2 * i + 1 {
                    return Err(Error::InvalidGroup(format!("row {i} is not a permutation")));
                }
                seen[x] = 2 * i + 1;
            }
        }
        for j in 0..order {
            for i in 0..order {
                let x = at(i, j);
                if seen[x] == 2 * j + 2 {
                    return Err(Error::InvalidGroup(format!("column {j} is not a permutation")));
                }
                seen[x] = 2 * j + 2;
            }
        }
        let assoc = |a: usize, b: usize, c: usize| at(at(a, b), c) == at(a, at(b, c));
        if order <= EXHAUSTIVE_ASSOCIATIVITY {
            for a in 0..order {
                for b in 0..order {
                    for c in 0..order {
                        if !assoc(a, b, c) {
                            return Err(Error::InvalidGroup(format!("not associative at ({a},{b},{c})")));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..SAMPLED_TRIPLES {
                let (a, b, c) = (rng.gen_range(0..order), rng.gen_range(0..order), rng.gen_range(0..order));
                if !assoc(a, b, c) {
                    return Err(Error::InvalidGroup(format!("not associative at ({a},{b},{c})")));
                }
            }
        }
        let mut inverse = vec![0u32; order];
        for i in 0..order {
            inverse[i] = (0..order).find(|&j| at(i, j) == 0).unwrap() as u32;
        }
        Ok(Group { order, repr: Repr::Table { table, inverse }, labels: None })
    }

    pub fn elementary_abelian(p: u32, k: u32) -> Result<Group> {
        if !crate::field::is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        let order = (p as usize).checked_pow(k).ok_or_else(|| Error::InvalidGroup("order overflow".into()))?;
        Ok(Group { order, repr: Repr::Elementary { p, k }, labels: None })
    }

    /// The cyclic group Z_n (handy for tests and small examples).
    pub fn cyclic(n: usize) -> Group {
        let table = (0..n * n).map(|x| ((x / n + x % n) % n) as u32).collect();
        let inverse = (0..n).map(|i| ((n - i) % n) as u32).collect();
        Group { order: n, repr: Repr::Table { table, inverse }, labels: None }
    }

    /// G×H with G-major indexing `(g, h) -> g * |H| + h`.
    pub fn direct_product(g: &Group, h: &Group) -> Group {
        if let (Repr::Elementary { p, k }, Repr::Elementary { p: p2, k: k2 }) = (&g.repr, &h.repr) {
            if p == p2 {
                return Group { order: g.order * h.order, repr: Repr::Elementary { p: *p, k: k + k2 }, labels: None };
            }
        }
        let (n, m) = (g.order, h.order);
        let order = n * m;
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                let (a1, a2) = (a / m, a % m);
                let (b1, b2) = (b / m, b % m);
                table.push((g.mul(a1, b1) * m + h.mul(a2, b2)) as u32);
            }
        }
        let inverse = (0..order).map(|a| (g.inverse(a / m) * m + h.inverse(a % m)) as u32).collect();
        Group { order, repr: Repr::Table { table, inverse }, labels: None }
    }

    /// `(F_q, +)` with elements in encoding order, or in the order
    /// `0, 1, g, g^2, ..., g^{q-2}` of the primitive element. Returns the group
    /// together with the field element carried by each index.
    pub fn additive_group_of(field: &Field, mode: ElementOrder) -> (Group, Vec<Fe>) {
        match mode {
            ElementOrder::Encoding => {
                let g = Group::elementary_abelian(field.p(), field.m()).expect("field characteristic is prime");
                (g, field.elements().collect())
            }
            ElementOrder::PrimitivePower => {
                let q = field.q();
                let mut elems: Vec<Fe> = vec![0];
                elems.extend((0..q as u32 - 1).map(|k| field.exp(k)));
                let mut index = vec![0u32; q];
                for (i, &e) in elems.iter().enumerate() {
                    index[e as usize] = i as u32;
                }
                let mut table = Vec::with_capacity(q * q);
                for &a in &elems {
                    for &b in &elems {
                        table.push(index[field.add(a, b) as usize]);
                    }
                }
                let inverse = elems.iter().map(|&a| index[field.neg(a) as usize]).collect();
                let labels = elems.iter().map(|&e| field.power_label(e)).collect();
                let g = Group { order: q, repr: Repr::Table { table, inverse }, labels: Some(labels) };
                (g, elems)
            }
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.repr {
            Repr::Table { table, .. } => table[a * self.order + b] as usize,
            Repr::Elementary { p: 2, .. } => a ^ b,
            Repr::Elementary { p, .. } => {
                let p = *p as usize;
                let (mut a, mut b) = (a, b);
                let (mut out, mut place) = (0, 1);
                while a > 0 || b > 0 {
                    out += ((a % p + b % p) % p) * place;
                    a /= p;
                    b /= p;
                    place *= p;
                }
                out
            }
        }
    }

    #[inline]
    pub fn inverse(&self, a: usize) -> usize {
        match &self.repr {
            Repr::Table { inverse, .. } => inverse[a] as usize,
            Repr::Elementary { p: 2, .. } => a,
            Repr::Elementary { p, .. } => {
                let p = *p as usize;
                let (mut a, mut out, mut place) = (a, 0, 1);
                while a > 0 {
                    out += ((p - a % p) % p) * place;
                    a /= p;
                    place *= p;
                }
                out
            }
        }
    }

    pub fn is_elementary_abelian(&self) -> Option<(u32, u32)> {
        match self.repr {
            Repr::Elementary { p, k } => Some((p, k)),
            Repr::Table { .. } => None,
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Group> {
        if labels.len() != self.order {
            return Err(Error::LengthMismatch { left: labels.len(), right: self.order });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }

    pub fn cayley_table(&self) -> Vec<u32> {
        (0..self.order * self.order).map(|x| self.mul(x / self.order, x % self.order) as u32).collect()
    }

    /// Same group with element `i` renamed `perm(i)`; `perm` must fix 0.
    pub fn relabel(&self, perm: &Perm) -> Result<Group> {
        if perm.len() != self.order || perm.image(0) != 0 {
            return Err(Error::InvalidGroup("relabeling must fix the identity".into()));
        }
        let n = self.order;
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[perm.image(a) * n + perm.image(b)] = perm.image(self.mul(a, b)) as u32;
            }
        }
        Group::from_table(n, table)
    }

    pub fn is_abelian(&self) -> bool {
        let gens = generators(self);
        gens.iter().all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }
}

impl FiniteGroup for Group {
    fn order(&self) -> usize {
        self.order
    }
    fn op(&self, a: usize, b: usize) -> usize {
        self.mul(a, b)
    }
    fn inv(&self, a: usize) -> usize {
        self.inverse(a)
    }
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.repr {
            Repr::Elementary { p, k } => write!(f, "Group(Z_{p}^{k})"),
            Repr::Table { .. } => write!(f, "Group(order {})", self.order),
        }
    }
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        if self.order != other.order {
            return false;
        }
        match (&self.repr, &other.repr) {
            (Repr::Elementary { p, k }, Repr::Elementary { p: p2, k: k2 }) => p == p2 && k == k2,
            _ => (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == other.mul(a, b))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementOrder {
    Encoding,
    PrimitivePower,
}

/// A greedy generating set: each generator lies outside the subgroup
/// generated by the previous ones.
pub fn generators<G: FiniteGroup + ?Sized>(g: &G) -> Vec<usize> {
    let n = g.order();
    let mut inside = vec![false; n];
    inside[0] = true;
    let mut members = vec![0usize];
    let mut gens = Vec::new();
    for x in 0..n {
        if inside[x] {
            continue;
        }
        gens.push(x);
        // closure under right multiplication by every generator
        let mut frontier = members.clone();
        while let Some(y) = frontier.pop() {
            for &s in &gens {
                let z = g.op(y, s);
                if !inside[z] {
                    inside[z] = true;
                    members.push(z);
                    frontier.push(z);
                }
            }
        }
        if members.len() == n {
            break;
        }
    }
    gens
}

/// Subgroup generated by `gens`, as a membership mask.
pub fn subgroup_closure<G: FiniteGroup + ?Sized>(g: &G, gens: &[usize]) -> Vec<bool> {
    let mut inside = vec![false; g.order()];
    inside[0] = true;
    let mut frontier = vec![0usize];
    while let Some(y) = frontier.pop() {
        for &s in gens {
            let z = g.op(y, s);
            if !inside[z] {
                inside[z] = true;
                frontier.push(z);
            }
        }
    }
    inside
}

pub fn element_order<G: FiniteGroup + ?Sized>(g: &G, x: usize) -> u64 {
    let mut y = x;
    let mut k = 1;
    while y != 0 {
        y = g.op(y, x);
        k += 1;
    }
    k
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupStructure {
    /// Elementary divisors (prime-power orders of the cyclic factors),
    /// largest first.
    Abelian(Vec<u64>),
    NonAbelian { order: u64, exponent: u64, center: u64, derived: u64 },
}

impl GroupStructure {
    pub fn invariants(&self) -> Option<&[u64]> {
        match self {
            GroupStructure::Abelian(v) => Some(v),
            GroupStructure::NonAbelian { .. } => None,
        }
    }
}

impl fmt::Display for GroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupStructure::Abelian(v) => {
                let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "[{}]", s.join(","))
            }
            GroupStructure::NonAbelian { order, exponent, center, derived } => {
                write!(f, "nonabelian(order={order},exponent={exponent},center={center},derived={derived})")
            }
        }
    }
}

/// Elementary divisors of an abelian group, or `None` if it is not abelian.
///
/// For each prime `p` the number of cyclic factors of order at least `p^k`
/// equals `log_p |Ω_k| - log_p |Ω_{k-1}|` where `Ω_k = {x : x^{p^k} = 1}`,
/// so the element orders determine the decomposition.
pub fn abelian_invariants<G: FiniteGroup + ?Sized>(g: &G) -> Option<Vec<u64>> {
    let gens = generators(g);
    let commute = gens.iter().all(|&a| gens.iter().all(|&b| g.op(a, b) == g.op(b, a)));
    if !commute {
        return None;
    }
    let orders: Vec<u64> = (0..g.order()).map(|x| element_order(g, x)).collect();
    let n = g.order() as u64;
    let mut out = Vec::new();
    for p in prime_divisors(n) {
        let mut counts = vec![1u64]; // |Ω_0| = 1
        let mut pk = 1u64;
        loop {
            pk *= p;
            let c = orders.iter().filter(|&&o| pk.is_multiple_of(o)).count() as u64;
            counts.push(c);
            if c == *counts.iter().rev().nth(1).unwrap() {
                break;
            }
        }
        let logs: Vec<u32> = counts.iter().map(|&c| ilog(c, p)).collect();
        // at_least[k] = number of factors of order >= p^k
        let at_least: Vec<u32> = (1..logs.len()).map(|k| logs[k] - logs[k - 1]).collect();
        for k in 0..at_least.len() {
            let exact = at_least[k] - at_least.get(k + 1).copied().unwrap_or(0);
            for _ in 0..exact {
                out.push(p.pow(k as u32 + 1));
            }
        }
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    Some(out)
}

fn ilog(mut c: u64, p: u64) -> u32 {
    let mut k = 0;
    while c > 1 {
        debug_assert_eq!(c % p, 0);
        c /= p;
        k += 1;
    }
    k
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Elementary divisors when abelian; otherwise order, exponent, center
/// order and derived-subgroup order.
pub fn group_structure<G: FiniteGroup + ?Sized>(g: &G) -> GroupStructure {
    if let Some(inv) = abelian_invariants(g) {
        return GroupStructure::Abelian(inv);
    }
    let n = g.order();
    let gens = generators(g);
    let exponent = (0..n).map(|x| element_order(g, x)).fold(1u64, lcm);
    let center = (0..n).filter(|&x| gens.iter().all(|&s| g.op(x, s) == g.op(s, x))).count() as u64;
    // derived subgroup: normal closure of generator commutators
    let comm = |a: usize, b: usize| g.op(g.op(g.inv(a), g.inv(b)), g.op(a, b));
    let mut dgens: Vec<usize> = Vec::new();
    for &a in &gens {
        for &b in &gens {
            let c = comm(a, b);
            if c != 0 {
                dgens.push(c);
            }
        }
    }
    let mut inside = subgroup_closure(g, &dgens);
    loop {
        let mut grew = false;
        let members: Vec<usize> = (0..n).filter(|&x| inside[x]).collect();
        for &x in &members {
            for &s in &gens {
                let c = g.op(g.op(g.inv(s), x), s);
                if !inside[c] {
                    dgens.push(c);
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
        inside = subgroup_closure(g, &dgens);
    }
    let derived = inside.iter().filter(|&&b| b).count() as u64;
    GroupStructure::NonAbelian { order: n as u64, exponent, center, derived }
}

fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Group formed by a set of permutations closed under composition, indexed
/// by position in `perms` (which must start with the identity).
pub struct PermGroup {
    perms: Vec<Perm>,
    index: HashMap<Perm, usize>,
}

impl PermGroup {
    pub fn new(perms: Vec<Perm>) -> Result<PermGroup> {
        let index: HashMap<Perm, usize> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        if index.len() != perms.len() {
            return Err(Error::InvalidGroup("repeated permutation".into()));
        }
        if perms.first().is_none_or(|p| !p.is_identity()) {
            return Err(Error::InvalidGroup("first permutation must be the identity".into()));
        }
        let checked = if perms.len() <= 1000 { perms.len() } else { 8 };
        for a in &perms {
            for b in perms.iter().take(checked) {
                if !index.contains_key(&a.compose_unchecked(b)) {
                    return Err(Error::InvalidGroup("not closed under composition".into()));
                }
            }
        }
        Ok(PermGroup { perms, index })
    }

    pub fn perms(&self) -> &[Perm] {
        &self.perms
    }
}

impl FiniteGroup for PermGroup {
    fn order(&self) -> usize {
        self.perms.len()
    }
    fn op(&self, a: usize, b: usize) -> usize {
        *self.index.get(&self.perms[a].compose_unchecked(&self.perms[b])).expect("closed under composition")
    }
    fn inv(&self, a: usize) -> usize {
        self.index[&self.perms[a].inverse()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;

    #[test]
    fn elementary_abelian_3_2() {
        let g = Group::elementary_abelian(3, 2).unwrap();
        assert_eq!(g.order(), 9);
        for x in 1..9 {
            assert_eq!(element_order(&g, x), 3);
        }
        // (1,2) + (2,2) = (0,1)
        assert_eq!(g.mul(5, 8), 1);
        assert_eq!(g.inverse(5), 7);
        assert!(Group::elementary_abelian(4, 2).is_err());
    }

    #[test]
    fn klein_four_indexing() {
        // {1, a, b, ab}: a*b = ab, a*ab = b
        let g = Group::elementary_abelian(2, 2).unwrap();
        assert_eq!(g.mul(1, 2), 3);
        assert_eq!(g.mul(1, 3), 2);
        assert_eq!(g.mul(3, 3), 0);
    }

    #[test]
    fn elementary_tables_validate() {
        for (p, k) in [(2, 3), (3, 2), (5, 1), (3, 4)] {
            let g = Group::elementary_abelian(p, k).unwrap();
            Group::from_table(g.order(), g.cayley_table()).unwrap();
        }
    }

    #[test]
    fn rejects_bad_tables() {
        // identity fails
        assert!(Group::from_table(2, vec![1, 0, 0, 1]).is_err());
        // not Latin
        assert!(Group::from_table(3, vec![0, 1, 2, 1, 1, 0, 2, 0, 1]).is_err());
        // a Latin square with identity that is not associative (order 5 loop)
        let loop5 = vec![
            0, 1, 2, 3, 4, 1, 0, 3, 4, 2, 2, 4, 0, 1, 3, 3, 2, 4, 0, 1, 4, 3, 1, 2, 0,
        ];
        assert!(matches!(Group::from_table(5, loop5), Err(Error::InvalidGroup(_))));
    }

    #[test]
    fn gf8_primitive_power_table_matches_addition_table() {
        let f = Field::with_default(2, 3).unwrap();
        let (g, elems) = Group::additive_group_of(&f, ElementOrder::PrimitivePower);
        // row "1", column "x" is x^3
        assert_eq!(g.label(g.mul(1, 2)), "x^3");
        assert_eq!(elems[g.mul(1, 2)], f.exp(3));
        // last row is x^6: x^6 + x^6 = 0 and x^5 + x^6 = x
        assert_eq!(g.label(7), "x^6");
        assert_eq!(g.label(g.mul(6, 7)), "x");
    }

    #[test]
    fn encoding_mode_identity_column() {
        let f = Field::with_default(3, 2).unwrap();
        let (g, _) = Group::additive_group_of(&f, ElementOrder::Encoding);
        for i in 0..g.order() {
            assert_eq!(g.mul(i, 0), i);
        }
    }

    #[test]
    fn gf4_orders_are_isomorphic_by_relabeling() {
        let f = Field::with_default(2, 2).unwrap();
        let (a, ea) = Group::additive_group_of(&f, ElementOrder::Encoding);
        let (b, eb) = Group::additive_group_of(&f, ElementOrder::PrimitivePower);
        // exhaustive search over bijections fixing 0
        let mut found = false;
        let rest: Vec<u32> = vec![1, 2, 3];
        for p in permutations(&rest) {
            let mut images = vec![0u32];
            images.extend(p);
            let ok = (0..4).all(|x| (0..4).all(|y| images[a.mul(x, y)] as usize == b.mul(images[x] as usize, images[y] as usize)));
            found |= ok;
        }
        assert!(found);
        // the element-carrying relabeling is one of them
        let map: Vec<u32> = ea.iter().map(|e| eb.iter().position(|x| x == e).unwrap() as u32).collect();
        assert_eq!(a.relabel(&Perm::new(map).unwrap()).unwrap(), b);
    }

    fn permutations(v: &[u32]) -> Vec<Vec<u32>> {
        if v.len() <= 1 {
            return vec![v.to_vec()];
        }
        let mut out = Vec::new();
        for i in 0..v.len() {
            let mut rest = v.to_vec();
            let x = rest.remove(i);
            for mut p in permutations(&rest) {
                p.insert(0, x);
                out.push(p);
            }
        }
        out
    }

    #[test]
    fn invariants_of_small_groups() {
        assert_eq!(abelian_invariants(&Group::elementary_abelian(3, 3).unwrap()), Some(vec![3, 3, 3]));
        assert_eq!(abelian_invariants(&Group::cyclic(12)), Some(vec![4, 3]));
        let z4z2 = Group::direct_product(&Group::cyclic(4), &Group::cyclic(2));
        assert_eq!(abelian_invariants(&z4z2), Some(vec![4, 2]));
        let z8z4z2 = Group::direct_product(&Group::cyclic(8), &Group::direct_product(&Group::cyclic(4), &Group::cyclic(2)));
        assert_eq!(abelian_invariants(&z8z4z2), Some(vec![8, 4, 2]));
        assert_eq!(abelian_invariants(&Group::cyclic(1)), Some(vec![]));
    }

    #[test]
    fn symmetric_group_descriptor() {
        // S_3 as permutations of 3 points
        let perms: Vec<Perm> = ["()", "(1,2)", "(1,3)", "(2,3)", "(1,2,3)", "(1,3,2)"]
            .iter()
            .map(|s| Perm::parse_cycles(s, 3).unwrap())
            .collect();
        let s3 = PermGroup::new(perms).unwrap();
        assert_eq!(abelian_invariants(&s3), None);
        assert_eq!(
            group_structure(&s3),
            GroupStructure::NonAbelian { order: 6, exponent: 6, center: 1, derived: 3 }
        );
    }

    #[test]
    fn invariants_survive_random_relabeling() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let groups = [
            Group::elementary_abelian(3, 4).unwrap(),
            Group::direct_product(&Group::cyclic(9), &Group::cyclic(3)),
            Group::direct_product(&Group::cyclic(4), &Group::cyclic(4)),
        ];
        for g in &groups {
            let want = abelian_invariants(g);
            for _ in 0..3 {
                let mut rest: Vec<u32> = (1..g.order() as u32).collect();
                rest.shuffle(&mut rng);
                let mut images = vec![0u32];
                images.extend(rest);
                let h = g.relabel(&Perm::new(images).unwrap()).unwrap();
                assert_eq!(abelian_invariants(&h), want);
            }
        }
    }
}
