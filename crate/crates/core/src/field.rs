//! Arithmetic in GF(p^m).
//!
//! Elements are handled as their canonical integer encoding
//! `e = c_0 + c_1 p + ... + c_{m-1} p^{m-1}` where `c_i` are the coefficients
//! of the polynomial-basis representation. Multiplication goes through
//! exponent/logarithm tables of a primitive element, addition through Zech
//! logarithms, so every operation is a handful of table lookups.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Integer encoding of a field element.
pub type Fe = u16;

const NO_ZECH: u32 = u32::MAX;

#[derive(Clone)]
pub struct Field {
    inner: Arc<Tables>,
}

struct Tables {
    p: u32,
    m: u32,
    q: u32,
    poly: Vec<u32>,
    primitive: Fe,
    /// `exp[k] = g^k`, doubled so `log a + log b` never needs a reduction.
    exp: Vec<Fe>,
    log: Vec<u32>,
    /// `zech[k] = log(1 + g^k)`, or `NO_ZECH` when `1 + g^k = 0`.
    zech: Vec<u32>,
    neg: Vec<Fe>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
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

/// Remainder of `a` modulo the monic polynomial `b`, coefficients mod `p`.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let shift = r.len() - db;
            for i in 0..db {
                r[shift + i] = (r[shift + i] + (p - lead) * b[i]) % p;
            }
        }
    }
    r
}

/// Trial division by every monic polynomial of degree 1..=m/2.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let m = poly.len() - 1;
    for d in 1..=m / 2 {
        let count = (p as u64).pow(d as u32);
        for e in 0..count {
            let mut div: Vec<u32> = (0..d).map(|i| ((e / (p as u64).pow(i as u32)) % p as u64) as u32).collect();
            div.push(1);
            if poly_rem(poly, &div, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible of degree `m` over GF(p), ordered by the
/// integer encoding of its low coefficients.
pub fn default_polynomial(p: u32, m: u32) -> Result<Vec<u32>> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    let total = (p as u64).pow(m);
    for e in 0..total {
        let mut poly: Vec<u32> = (0..m).map(|i| ((e / (p as u64).pow(i)) % p as u64) as u32).collect();
        poly.push(1);
        if is_irreducible(&poly, p) {
            return Ok(poly);
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Field {
    pub fn new(p: u32, m: u32, poly: &[u32]) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if m == 0 || poly.len() != m as usize + 1 || poly[m as usize] != 1 || poly.iter().any(|&c| c >= p) {
            return Err(Error::NotMonic { degree: m });
        }
        let q64 = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
        if q64 > Fe::MAX as u64 {
            return Err(Error::FieldTooLarge(q64));
        }
        if !is_irreducible(poly, p) {
            return Err(Error::NotIrreducible(poly.to_vec()));
        }
        Ok(Field { inner: Arc::new(Tables::build(p, m, poly.to_vec())) })
    }

    /// GF(p^m) with the default polynomial.
    pub fn with_default(p: u32, m: u32) -> Result<Field> {
        let poly = default_polynomial(p, m)?;
        Field::new(p, m, &poly)
    }

    pub fn p(&self) -> u32 {
        self.inner.p
    }
    pub fn m(&self) -> u32 {
        self.inner.m
    }
    pub fn q(&self) -> usize {
        self.inner.q as usize
    }
    pub fn poly(&self) -> &[u32] {
        &self.inner.poly
    }
    pub fn primitive(&self) -> Fe {
        self.inner.primitive
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let t = &*self.inner;
        let q1 = t.q - 1;
        let la = t.log[a as usize];
        let lb = t.log[b as usize];
        let d = if lb >= la { lb - la } else { lb + q1 - la };
        let z = t.zech[d as usize];
        if z == NO_ZECH {
            0
        } else {
            t.exp[(la + z) as usize]
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        self.inner.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a == 0 || b == 0 {
            return 0;
        }
        let t = &*self.inner;
        t.exp[(t.log[a as usize] + t.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let t = &*self.inner;
        let q1 = t.q - 1;
        Ok(t.exp[((q1 - t.log[a as usize]) % q1) as usize])
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^k` for any integer `k`; negative exponents go through the inverse.
    pub fn pow(&self, a: Fe, k: i64) -> Result<Fe> {
        if a == 0 {
            return match k.signum() {
                0 => Ok(1),
                1 => Ok(0),
                _ => Err(Error::DivisionByZero),
            };
        }
        let t = &*self.inner;
        let q1 = (t.q - 1) as i64;
        let l = (t.log[a as usize] as i64 * k.rem_euclid(q1)).rem_euclid(q1);
        Ok(t.exp[l as usize])
    }

    /// Discrete logarithm to the base of the primitive element.
    pub fn log(&self, a: Fe) -> Option<u32> {
        (a != 0).then(|| self.inner.log[a as usize])
    }

    pub fn exp(&self, k: u32) -> Fe {
        self.inner.exp[(k % (self.inner.q - 1)) as usize]
    }

    /// Scalar multiple `n * a` with `n` an integer (repeated addition).
    pub fn times(&self, n: u64, a: Fe) -> Fe {
        let n = (n % self.inner.p as u64) as u32;
        let mut acc = 0;
        for _ in 0..n {
            acc = self.add(acc, a);
        }
        acc
    }

    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        let p = self.inner.p;
        let mut e = a as u32;
        (0..self.inner.m)
            .map(|_| {
                let c = e % p;
                e /= p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Fe> {
        if coeffs.len() != self.inner.m as usize {
            return Err(Error::LengthMismatch { left: coeffs.len(), right: self.inner.m as usize });
        }
        let p = self.inner.p;
        let mut e = 0u32;
        for &c in coeffs.iter().rev() {
            if c >= p {
                return Err(Error::DomainMismatch(format!("coefficient {c} >= {p}")));
            }
            e = e * p + c;
        }
        Ok(e as Fe)
    }

    pub fn element(&self, value: Fe) -> Result<FieldElement> {
        if value as usize >= self.q() {
            return Err(Error::DomainMismatch(format!("encoding {value} outside GF({})", self.q())));
        }
        Ok(FieldElement { field: self.clone(), value })
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        0..self.inner.q as Fe
    }

    /// `p=<p> m=<m> poly=<c_0>,...,<c_m>`
    pub fn header(&self) -> String {
        let poly: Vec<String> = self.inner.poly.iter().map(|c| c.to_string()).collect();
        format!("p={} m={} poly={}", self.inner.p, self.inner.m, poly.join(","))
    }

    /// Print an element as a power of the primitive element (`0`, `1`, `x`,
    /// `x^k`). The symbol is `x` when the primitive element is the class of
    /// `x` itself, `g` otherwise.
    pub fn power_label(&self, a: Fe) -> String {
        let sym = self.power_symbol();
        match self.log(a) {
            None => "0".into(),
            Some(0) => "1".into(),
            Some(1) => sym.to_string(),
            Some(k) => format!("{sym}^{k}"),
        }
    }

    pub fn parse_power_label(&self, s: &str) -> Option<Fe> {
        let sym = self.power_symbol();
        let s = s.trim();
        match s {
            "0" => Some(0),
            "1" => Some(1),
            _ if s == sym => Some(self.exp(1)),
            _ => {
                let rest = s.strip_prefix(sym)?.strip_prefix('^')?;
                rest.parse::<u32>().ok().map(|k| self.exp(k))
            }
        }
    }

    fn power_symbol(&self) -> &'static str {
        if self.inner.m > 1 && self.inner.primitive as u32 == self.inner.p {
            "x"
        } else {
            "g"
        }
    }
}

impl Tables {
    fn build(p: u32, m: u32, poly: Vec<u32>) -> Tables {
        let q = p.pow(m);
        let digits = |e: u32| -> Vec<u32> {
            let mut e = e;
            (0..m)
                .map(|_| {
                    let c = e % p;
                    e /= p;
                    c
                })
                .collect()
        };
        let undigits = |c: &[u32]| -> u32 { c.iter().rev().fold(0, |acc, &d| acc * p + d) };
        let mul_slow = |a: u32, b: u32| -> u32 {
            let (da, db) = (digits(a), digits(b));
            let mut prod = vec![0u32; 2 * m as usize];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            let mut r = poly_rem(&prod, &poly, p);
            r.resize(m as usize, 0);
            undigits(&r)
        };
        let add_slow = |a: u32, b: u32| -> u32 {
            let s: Vec<u32> = digits(a).iter().zip(digits(b)).map(|(x, y)| (x + y) % p).collect();
            undigits(&s)
        };

        let q1 = q - 1;
        let factors = prime_factors(q1 as u64);
        let order_is_full = |g: u32| -> bool {
            factors.iter().all(|&r| {
                let mut acc = 1u32;
                for _ in 0..(q1 as u64 / r) {
                    acc = mul_slow(acc, g);
                }
                acc != 1
            })
        };
        let primitive = if q == 2 {
            1
        } else {
            // prefer the class of x when it is primitive
            let x = if m > 1 { p } else { 2 };
            if order_is_full(x) {
                x
            } else {
                (2..q).find(|&g| order_is_full(g)).expect("primitive element exists")
            }
        };

        let mut exp = vec![0 as Fe; 2 * q1 as usize];
        let mut log = vec![0u32; q as usize];
        let mut acc = 1u32;
        for k in 0..q1 {
            exp[k as usize] = acc as Fe;
            exp[(k + q1) as usize] = acc as Fe;
            log[acc as usize] = k;
            acc = mul_slow(acc, primitive);
        }
        let zech = (0..q1)
            .map(|k| {
                let s = add_slow(1, exp[k as usize] as u32);
                if s == 0 {
                    NO_ZECH
                } else {
                    log[s as usize]
                }
            })
            .collect();
        let neg = (0..q)
            .map(|e| undigits(&digits(e).iter().map(|&c| (p - c) % p).collect::<Vec<_>>()) as Fe)
            .collect();
        Tables { p, m, q, poly, primitive: primitive as Fe, exp, log, zech, neg }
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.poly == other.inner.poly)
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}) [{}]", self.inner.q, self.header())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
    Pow(i64),
}

/// A field element bound to its field, for checked arithmetic at API
/// boundaries. Internal algorithms work on raw [`Fe`] encodings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: Fe,
}

impl FieldElement {
    pub fn value(&self) -> Fe {
        self.value
    }
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Unary operations (`Neg`, `Inv`, `Pow`) ignore `other`.
    pub fn arith(&self, other: &FieldElement, op: ArithOp) -> Result<FieldElement> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let f = &self.field;
        let (a, b) = (self.value, other.value);
        let value = match op {
            ArithOp::Add => f.add(a, b),
            ArithOp::Sub => f.sub(a, b),
            ArithOp::Mul => f.mul(a, b),
            ArithOp::Div => f.div(a, b)?,
            ArithOp::Neg => f.neg(a),
            ArithOp::Inv => f.inv(a)?,
            ArithOp::Pow(k) => f.pow(a, k)?,
        };
        Ok(FieldElement { field: f.clone(), value })
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.arith(other, ArithOp::Add)
    }
    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.arith(other, ArithOp::Sub)
    }
    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.arith(other, ArithOp::Mul)
    }
    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.arith(other, ArithOp::Div)
    }
    pub fn neg(&self) -> FieldElement {
        FieldElement { field: self.field.clone(), value: self.field.neg(self.value) }
    }
    pub fn inv(&self) -> Result<FieldElement> {
        Ok(FieldElement { field: self.field.clone(), value: self.field.inv(self.value)? })
    }
    pub fn pow(&self, k: i64) -> Result<FieldElement> {
        Ok(FieldElement { field: self.field.clone(), value: self.field.pow(self.value, k)? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Schoolbook multiplication on coefficient vectors, independent of the
    /// log tables.
    fn oracle_mul(f: &Field, a: Fe, b: Fe) -> Fe {
        let (p, m) = (f.p(), f.m() as usize);
        let (ca, cb) = (f.coeffs(a), f.coeffs(b));
        let mut prod = vec![0u32; 2 * m];
        for i in 0..m {
            for j in 0..m {
                prod[i + j] = (prod[i + j] + ca[i] * cb[j]) % p;
            }
        }
        // reduce using x^m = -(c_0 + ... + c_{m-1} x^{m-1})
        for d in (m..2 * m).rev() {
            let lead = prod[d];
            prod[d] = 0;
            for i in 0..m {
                prod[d - m + i] = (prod[d - m + i] + lead * (p - f.poly()[i])) % p;
            }
        }
        f.from_coeffs(&prod[..m]).unwrap()
    }

    fn oracle_add(f: &Field, a: Fe, b: Fe) -> Fe {
        let c: Vec<u32> = f.coeffs(a).iter().zip(f.coeffs(b)).map(|(x, y)| (x + y) % f.p()).collect();
        f.from_coeffs(&c).unwrap()
    }

    #[test]
    fn gf81_from_planar_polynomial() {
        let f = Field::new(3, 4, &[2, 1, 0, 0, 1]).unwrap();
        assert_eq!(f.q(), 81);
        // x * x^3 = x^4 = 2x + 1
        assert_eq!(f.mul(3, 27), 7);
        assert_eq!(f.poly(), default_polynomial(3, 4).unwrap().as_slice());
    }

    #[test]
    fn prime_field() {
        let f = Field::new(3, 1, &[0, 1]).unwrap();
        assert_eq!(f.add(2, 2), 1);
        assert_eq!(f.mul(2, 2), 1);
        assert_eq!(f.neg(1), 2);
    }

    #[test]
    fn construction_errors() {
        // x^4 + 1 = (x^2+x+2)(x^2+2x+2) over GF(3)
        assert!(matches!(Field::new(3, 4, &[1, 0, 0, 0, 1]), Err(Error::NotIrreducible(_))));
        assert_eq!(Field::new(4, 1, &[0, 1]).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(Field::new(3, 2, &[1, 0, 2]), Err(Error::NotMonic { .. })));
        assert!(matches!(Field::new(3, 2, &[1, 1]), Err(Error::NotMonic { .. })));
    }

    #[test]
    fn x4_plus_1_factors_found_by_trial_division() {
        let p = 3;
        let a = [2, 1, 1];
        let b = [2, 2, 1];
        let mut prod = [0u32; 5];
        for i in 0..3 {
            for j in 0..3 {
                prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
            }
        }
        assert_eq!(prod, [1, 0, 0, 0, 1]);
    }

    #[test]
    fn tables_agree_with_schoolbook_arithmetic() {
        for (p, m) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3), (5, 2), (2, 8)] {
            let f = Field::with_default(p, m).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), oracle_mul(&f, a, b), "GF({p}^{m}) {a}*{b}");
                    assert_eq!(f.add(a, b), oracle_add(&f, a, b), "GF({p}^{m}) {a}+{b}");
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for (p, m) in [(2, 2), (3, 2), (2, 4), (7, 1)] {
            let f = Field::with_default(p, m).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                assert_eq!(f.times(p as u64, a), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in f.elements() {
                    for c in f.elements() {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn fermat_in_gf81() {
        let f = Field::new(3, 4, &[2, 1, 0, 0, 1]).unwrap();
        for g in 1..81 {
            assert_eq!(f.pow(g, 80).unwrap(), 1);
            assert_eq!(f.pow(g, -1).unwrap(), f.inv(g).unwrap());
        }
        assert_eq!(f.pow(0, 0).unwrap(), 1);
        assert_eq!(f.pow(0, -2), Err(Error::DivisionByZero));
    }

    #[test]
    fn encoding_round_trip() {
        let f = Field::with_default(3, 3).unwrap();
        for a in f.elements() {
            assert_eq!(f.from_coeffs(&f.coeffs(a)).unwrap(), a);
        }
    }

    #[test]
    fn checked_elements() {
        let f = Field::with_default(2, 2).unwrap();
        let g = Field::with_default(3, 1).unwrap();
        let a = f.element(2).unwrap();
        let b = g.element(1).unwrap();
        assert_eq!(a.add(&b), Err(Error::FieldMismatch));
        let zero = f.element(0).unwrap();
        assert_eq!(a.div(&zero), Err(Error::DivisionByZero));
        assert_eq!(a.arith(&a, ArithOp::Pow(3)).unwrap().value(), 1);
        assert_eq!(a.add(&a.neg()).unwrap().value(), 0);
    }

    #[test]
    fn gf8_power_labels() {
        let f = Field::with_default(2, 3).unwrap();
        assert_eq!(f.poly(), &[1, 1, 0, 1]);
        assert_eq!(f.primitive(), 2);
        assert_eq!(f.power_label(f.add(1, 2)), "x^3");
        for a in f.elements() {
            assert_eq!(f.parse_power_label(&f.power_label(a)), Some(a));
        }
    }

    #[test]
    fn header_format() {
        let f = Field::new(3, 4, &[2, 1, 0, 0, 1]).unwrap();
        assert_eq!(f.header(), "p=3 m=4 poly=2,1,0,0,1");
    }
}
