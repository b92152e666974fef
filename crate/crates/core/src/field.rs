//! Finite fields GF(p^e) in polynomial basis.
//!
//! An element is stored as its integer encoding `Σ cᵢ·pⁱ`, where `c₀ … c_{e-1}`
//! are the little-endian coefficients of its polynomial representative modulo
//! the field's irreducible modulus. The encoding is canonical, so equality of
//! elements is integer equality, and it doubles as the serialization format.
//!
//! Multiplication goes through log/exp tables built once per field. Addition is
//! XOR in characteristic 2, plain modular addition for prime fields, and a
//! lookup table (or digit-wise arithmetic for the largest fields) otherwise.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

const ADD_TABLE_LIMIT: u32 = 256;

/// A finite field GF(p^e) with an explicit irreducible modulus.
///
/// Cloning is cheap; all clones share the same tables.
#[derive(Clone)]
pub struct Field {
    inner: Arc<Inner>,
}

struct Inner {
    p: u32,
    e: u32,
    q: u32,
    /// e+1 coefficients, little-endian, monic.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Option<Vec<u32>>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.e == other.inner.e
                && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.e == 1 {
            write!(f, "GF({})", self.inner.p)
        } else {
            write!(f, "GF({}^{}; {})", self.inner.p, self.inner.e, format_poly(&self.inner.modulus))
        }
    }
}

fn format_poly(coeffs: &[u32]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
        terms.push(match i {
            0 => coef,
            1 => format!("{coef}x"),
            _ => format!("{coef}x^{i}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
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

/// Splits `q` into `(p, e)` with `q = p^e`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let (mut rest, mut e) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p as u32, e))
}

// Polynomials over GF(p) as little-endian coefficient vectors.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let factor = (u64::from(*r.last().unwrap()) * u64::from(lead_inv) % u64::from(p)) as u32;
        for (i, &mc) in m.iter().enumerate() {
            let t = (u64::from(factor) * u64::from(mc) % u64::from(p)) as u32;
            r[shift + i] = (r[shift + i] + p - t) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime, so a^(p-2) is the inverse.
    let (mut base, mut exp, mut acc) = (u64::from(a % p), p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % u64::from(p);
        }
        base = base * base % u64::from(p);
        exp >>= 1;
    }
    acc as u32
}

fn digits(mut value: u32, p: u32, e: u32) -> Vec<u32> {
    (0..e)
        .map(|_| {
            let d = value % p;
            value /= p;
            d
        })
        .collect()
}

fn undigits(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// True if the monic polynomial `m` (degree ≥ 1) has no monic factor of degree
/// between 1 and deg/2.
fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut divisor = digits(code as u32, p, d as u32);
            divisor.push(1);
            if poly_rem(m, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree `e` over GF(p),
/// ordered by the integer encoding of its lower coefficients.
pub fn default_modulus(p: u32, e: u32) -> Vec<u32> {
    let count = (p as u64).pow(e);
    for code in 0..count {
        let mut m = digits(code as u32, p, e);
        m.push(1);
        if e == 1 || is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("an irreducible polynomial exists for every degree")
}

impl Field {
    /// Creates GF(p^e). Without a modulus, the default irreducible is used.
    pub fn new(p: u32, e: u32, modulus: Option<&[u32]>) -> Result<Self> {
        if !is_prime(u64::from(p)) {
            return Err(Error::NotPrime(u64::from(p)));
        }
        if e == 0 {
            return Err(Error::ZeroDegree);
        }
        let q = (p as u64)
            .checked_pow(e)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or_else(|| Error::FieldTooLarge((p as u64).saturating_pow(e)))?;
        let modulus = match modulus {
            _ if e == 1 => vec![0, 1],
            None => default_modulus(p, e),
            Some(m) => {
                if m.len() != e as usize + 1 || m[e as usize] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::BadModulus { expected: e });
                }
                if !is_irreducible(m, p) {
                    return Err(Error::ReducibleModulus { p });
                }
                m.to_vec()
            }
        };
        Ok(Self::build(p, e, q as u32, modulus))
    }

    /// GF(p) for a prime p.
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1, None)
    }

    /// The field of order `q` with the default modulus.
    pub fn with_order(q: u64) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::new(p, e, None)
    }

    fn build(p: u32, e: u32, q: u32, modulus: Vec<u32>) -> Self {
        let add = if p != 2 && e > 1 && q <= ADD_TABLE_LIMIT {
            let mut t = vec![0; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = digit_add(a, b, p, e);
                }
            }
            Some(t)
        } else {
            None
        };
        let slow_mul = |a: u32, b: u32| -> u32 {
            let (da, db) = (digits(a, p, e), digits(b, p, e));
            let mut prod = vec![0u32; 2 * e as usize];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = ((u64::from(prod[i + j]) + u64::from(x) * u64::from(y)) % u64::from(p)) as u32;
                }
            }
            let mut r = poly_rem(&prod, &modulus, p);
            r.resize(e as usize, 0);
            undigits(&r, p)
        };
        let (exp, log) = if q == 2 {
            (vec![1, 1], vec![0, 0])
        } else {
            let mut found = None;
            for g in 2..q {
                let mut exp = Vec::with_capacity(q as usize);
                let mut x = 1;
                loop {
                    exp.push(x);
                    x = slow_mul(x, g);
                    if x == 1 {
                        break;
                    }
                }
                if exp.len() == (q - 1) as usize {
                    found = Some(exp);
                    break;
                }
            }
            let mut exp = found.expect("multiplicative group is cyclic");
            let mut log = vec![0u32; q as usize];
            for (i, &x) in exp.iter().enumerate() {
                log[x as usize] = i as u32;
            }
            // doubled so that log a + log b indexes without a reduction
            let copy = exp.clone();
            exp.extend(copy);
            (exp, log)
        };
        Field { inner: Arc::new(Inner { p, e, q, modulus, exp, log, add }) }
    }

    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.e
    }

    /// Number of elements q.
    pub fn order(&self) -> u32 {
        self.inner.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let i = &*self.inner;
        if i.p == 2 {
            a ^ b
        } else if i.e == 1 {
            let s = a + b;
            if s >= i.p {
                s - i.p
            } else {
                s
            }
        } else if let Some(t) = &i.add {
            t[(a * i.q + b) as usize]
        } else {
            digit_add(a, b, i.p, i.e)
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let i = &*self.inner;
        if i.p == 2 || a == 0 {
            a
        } else if i.e == 1 {
            i.p - a
        } else {
            let mut d = digits(a, i.p, i.e);
            for c in &mut d {
                *c = (i.p - *c) % i.p;
            }
            undigits(&d, i.p)
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let i = &*self.inner;
        i.exp[(i.log[a as usize] + i.log[b as usize]) as usize]
    }

    /// Multiplicative inverse. Panics on zero; use [`Field::checked_inv`] when
    /// the operand is untrusted.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.checked_inv(a).expect("inverse of zero")
    }

    pub fn checked_inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let i = &*self.inner;
        let l = i.log[a as usize];
        Some(if l == 0 { 1 } else { i.exp[(i.q - 1 - l) as usize] })
    }

    #[inline]
    pub fn div(&self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: u32, n: u64) -> u32 {
        if n == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let i = &*self.inner;
        let l = (u64::from(i.log[a as usize]) * (n % u64::from(i.q - 1))) % u64::from(i.q - 1);
        i.exp[l as usize]
    }

    /// Little-endian polynomial coefficients of an element.
    pub fn coefficients(&self, a: u32) -> Vec<u32> {
        digits(a, self.inner.p, self.inner.e)
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> Result<u32> {
        let p = self.inner.p;
        if coeffs.len() != self.inner.e as usize || coeffs.iter().any(|&c| c >= p) {
            return Err(Error::Format(format!("expected {} coefficients below {p}", self.inner.e)));
        }
        Ok(undigits(coeffs, p))
    }

    pub fn contains(&self, value: u64) -> bool {
        value < u64::from(self.inner.q)
    }

    /// Wraps an integer-encoded value as a checked element.
    pub fn element(&self, value: u64) -> Result<FieldElement> {
        if !self.contains(value) {
            return Err(Error::NotAnElement { value, q: self.inner.q });
        }
        Ok(FieldElement { field: self.clone(), value: value as u32 })
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.inner.q
    }

    /// A generator of the multiplicative group.
    pub fn primitive_element(&self) -> u32 {
        self.inner.exp[1 % self.inner.exp.len()]
    }
}

fn digit_add(mut a: u32, mut b: u32, p: u32, e: u32) -> u32 {
    let (mut out, mut scale) = (0, 1);
    for _ in 0..e {
        let d = (a % p + b % p) % p;
        out += d * scale;
        scale *= p;
        a /= p;
        b /= p;
    }
    out
}

/// The four field operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// An element that remembers its field, for checked arithmetic at API
/// boundaries. Hot loops work on raw `u32` encodings through [`Field`].
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: u32,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}∈{:?}", self.value, self.field)
    }
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn apply(&self, rhs: &FieldElement, op: ArithOp) -> Result<FieldElement> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch);
        }
        let f = &self.field;
        let (a, b) = (self.value, rhs.value);
        let value = match op {
            ArithOp::Add => f.add(a, b),
            ArithOp::Sub => f.sub(a, b),
            ArithOp::Mul => f.mul(a, b),
            ArithOp::Div => f.mul(a, f.checked_inv(b).ok_or(Error::DivisionByZero)?),
        };
        Ok(FieldElement { field: f.clone(), value })
    }

    pub fn inverse(&self) -> Result<FieldElement> {
        let value = self.field.checked_inv(self.value).ok_or(Error::DivisionByZero)?;
        Ok(FieldElement { field: self.field.clone(), value })
    }
}
