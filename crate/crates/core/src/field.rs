//! Arithmetic in GF(p^e).
//!
//! Elements are encoded as integers in `[0, q)`: base-p digit `k` of the
//! code is the coefficient of `α^k` in the polynomial basis, where `α` is a
//! root of the field modulus. The modulus is the lexicographically smallest
//! monic irreducible polynomial of degree `e`, comparing coefficients from
//! the constant term upward, so two processes building the same `(p, e)`
//! always agree on every code.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Integer code of a field element. See the module docs for the encoding.
pub type FieldElement = u32;

/// Largest field order accepted by [`Field::new`].
pub const MAX_ORDER: u64 = 1 << 16;

/// Field orders up to this bound get a full addition table.
const ADD_TABLE_LIMIT: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{e} exceeds the cap of {max}")]
    TooLarge { p: u64, e: u32, max: u64 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("element code {code} is out of range for GF({q})")]
    OutOfRange { code: FieldElement, q: u32 },
    #[error("division by zero")]
    DivisionByZero,
}

struct Tables {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    /// `exp[i] = g^i` for a fixed primitive element `g`, doubled in length so
    /// that `exp[log a + log b]` never needs a reduction.
    exp: Vec<FieldElement>,
    log: Vec<u32>,
    neg: Vec<FieldElement>,
    add: Option<Vec<FieldElement>>,
}

/// A finite field GF(p^e). Cheap to clone; all clones share their tables.
#[derive(Clone)]
pub struct Field {
    t: Arc<Tables>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.t, &other.t)
            || (self.t.p == other.t.p && self.t.modulus == other.t.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.t.p)
            .field("e", &self.t.e)
            .field("modulus", &self.t.modulus)
            .finish()
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.t.q)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^e` with `p` prime.
pub fn factor_prime_power(q: u64) -> Result<(u64, u32), FieldError> {
    if q < 2 {
        return Err(FieldError::NotPrimePower(q));
    }
    let p = (2..=q).find(|d| q % d == 0).unwrap();
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        return Err(FieldError::NotPrimePower(q));
    }
    Ok((p, e))
}

// Polynomials over GF(p) as ascending coefficient vectors, no trailing zeros.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem_monic(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            let sub = lead * c % p;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_trim(&mut out);
    out
}

fn digits(code: u32, p: u32, e: u32) -> Vec<u32> {
    let mut c = code;
    let mut v = Vec::with_capacity(e as usize);
    for _ in 0..e {
        v.push(c % p);
        c /= p;
    }
    v
}

fn from_digits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-p
/// digits of `idx` (constant term least significant).
fn monic_from_index(idx: u32, p: u32, deg: u32) -> Vec<u32> {
    let mut v = digits(idx, p, deg);
    v.push(1);
    v
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = (f.len() - 1) as u32;
    for d in 1..=deg / 2 {
        for idx in 0..p.pow(d) {
            let g = monic_from_index(idx, p, d);
            if poly_rem_monic(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree `e` over GF(p),
/// comparing `(c0, c1, ..., c_{e-1})` from the constant term.
fn canonical_modulus(p: u32, e: u32) -> Vec<u32> {
    let count = p.pow(e);
    (0..count)
        .map(|idx| {
            // reversed digit order: c0 is the most significant
            let mut coeffs = digits(idx, p, e);
            coeffs.reverse();
            coeffs.push(1);
            coeffs
        })
        .find(|f| is_irreducible(f, p))
        .expect("an irreducible polynomial of every degree exists")
}

impl Field {
    /// Builds GF(p^e) with its canonical modulus.
    pub fn new(p: u64, e: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if e == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let too_large = FieldError::TooLarge { p, e, max: MAX_ORDER };
        let q = p.checked_pow(e).ok_or(too_large.clone())?;
        if q > MAX_ORDER {
            return Err(too_large);
        }
        let (p, q) = (p as u32, q as u32);
        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            canonical_modulus(p, e)
        };
        Ok(Self::with_modulus(p, e, q, modulus))
    }

    /// Builds GF(q) for a prime power `q`.
    pub fn from_order(q: u64) -> Result<Self, FieldError> {
        let (p, e) = factor_prime_power(q)?;
        Self::new(p, e)
    }

    fn with_modulus(p: u32, e: u32, q: u32, modulus: Vec<u32>) -> Self {
        let mul_slow = |a: u32, b: u32| -> u32 {
            if e == 1 {
                return a * b % p;
            }
            let prod = poly_mul(&digits(a, p, e), &digits(b, p, e), p);
            let mut r = poly_rem_monic(&prod, &modulus, p);
            r.resize(e as usize, 0);
            from_digits(&r, p)
        };

        let order = q - 1;
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        'gen: for g in 1..q {
            let mut x = 1u32;
            for i in 0..order {
                if i > 0 && x == 1 {
                    continue 'gen;
                }
                exp[i as usize] = x;
                x = mul_slow(x, g);
            }
            break;
        }
        for i in 0..order as usize {
            exp[i + order as usize] = exp[i];
            log[exp[i] as usize] = i as u32;
        }

        let neg = (0..q)
            .map(|a| {
                let d: Vec<u32> = digits(a, p, e).iter().map(|&x| (p - x) % p).collect();
                from_digits(&d, p)
            })
            .collect();

        let mut t = Tables {
            p,
            e,
            q,
            modulus,
            exp,
            log,
            neg,
            add: None,
        };
        if q <= ADD_TABLE_LIMIT && p != 2 {
            let mut table = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = add_digitwise(&t, a, b);
                }
            }
            t.add = Some(table);
        }
        Field { t: Arc::new(t) }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.t.p
    }

    #[inline]
    pub fn e(&self) -> u32 {
        self.t.e
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.t.q
    }

    /// Ascending coefficients of the modulus (`[0, 1]` for prime fields).
    pub fn modulus(&self) -> &[u32] {
        &self.t.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        0..self.t.q
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        1..self.t.q
    }

    #[inline]
    pub fn contains(&self, a: FieldElement) -> bool {
        a < self.t.q
    }

    pub fn check(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if self.contains(a) {
            Ok(a)
        } else {
            Err(FieldError::OutOfRange { code: a, q: self.t.q })
        }
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.t.p == 2 {
            return a ^ b;
        }
        if self.t.e == 1 {
            let s = a + b;
            return if s >= self.t.p { s - self.t.p } else { s };
        }
        match &self.t.add {
            Some(table) => table[(a * self.t.q + b) as usize],
            None => add_digitwise(&self.t, a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.t.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a == 0 || b == 0 {
            return 0;
        }
        let t = &self.t;
        t.exp[(t.log[a as usize] + t.log[b as usize]) as usize]
    }

    /// Multiplicative inverse. Panics on zero; use [`Field::checked_inv`]
    /// when the input is untrusted.
    #[inline]
    pub fn inv(&self, a: FieldElement) -> FieldElement {
        assert!(a != 0, "inverse of zero in {self}");
        let t = &self.t;
        let order = t.q - 1;
        t.exp[((order - t.log[a as usize]) % order) as usize]
    }

    #[inline]
    pub fn div(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: FieldElement, k: u64) -> FieldElement {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.t.q - 1) as u64;
        let l = self.t.log[a as usize] as u64 * (k % order) % order;
        self.t.exp[l as usize]
    }

    pub fn checked_add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.add(self.check(a)?, self.check(b)?))
    }

    pub fn checked_mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(self.check(a)?, self.check(b)?))
    }

    pub fn checked_inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        match self.check(a)? {
            0 => Err(FieldError::DivisionByZero),
            a => Ok(self.inv(a)),
        }
    }

    /// Image of the integer `k` under `Z -> GF(q)`.
    pub fn from_int(&self, k: u64) -> FieldElement {
        (k % self.t.p as u64) as FieldElement
    }

    /// Reference multiplication by polynomial product and reduction, kept
    /// independent of the log tables so tests can compare the two.
    pub fn mul_by_reduction(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let (p, e) = (self.t.p, self.t.e);
        if e == 1 {
            return a * b % p;
        }
        let prod = poly_mul(&digits(a, p, e), &digits(b, p, e), p);
        let mut r = poly_rem_monic(&prod, &self.t.modulus, p);
        r.resize(e as usize, 0);
        from_digits(&r, p)
    }
}

fn add_digitwise(t: &Tables, mut a: u32, mut b: u32) -> u32 {
    let (p, e) = (t.p, t.e);
    let mut out = 0;
    let mut place = 1;
    for _ in 0..e {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_fields() -> Vec<Field> {
        [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16]
            .iter()
            .map(|&q| Field::from_order(q).unwrap())
            .collect()
    }

    #[test]
    fn construction_examples() {
        let f = Field::new(2, 1).unwrap();
        assert_eq!(f.q(), 2);
        assert_eq!(Field::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(Field::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn gf9_modulus_by_exhaustive_scan() {
        // monic quadratics over GF(3) with no root, smallest by (c0, c1)
        let mut irreducible = Vec::new();
        for c0 in 0..3u32 {
            for c1 in 0..3u32 {
                if (0..3u32).all(|x| (x * x + c1 * x + c0) % 3 != 0) {
                    irreducible.push((c0, c1));
                }
            }
        }
        assert_eq!(irreducible[0], (1, 0));
        assert_eq!(irreducible.len(), 3);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Field::new(4, 1).unwrap_err(), FieldError::NotPrime(4));
        assert_eq!(Field::new(2, 0).unwrap_err(), FieldError::ZeroDegree);
        assert!(matches!(Field::new(2, 17), Err(FieldError::TooLarge { .. })));
        assert!(matches!(Field::new(257, 2), Err(FieldError::TooLarge { .. })));
        assert!(Field::new(2, 16).is_ok());
        assert_eq!(Field::from_order(6).unwrap_err(), FieldError::NotPrimePower(6));
        assert_eq!(factor_prime_power(49).unwrap(), (7, 2));
    }

    #[test]
    fn add_examples() {
        assert_eq!(Field::from_order(2).unwrap().add(1, 1), 0);
        assert_eq!(Field::from_order(4).unwrap().add(2, 3), 1);
        assert_eq!(Field::from_order(9).unwrap().add(3, 7), 1);
    }

    #[test]
    fn mul_examples() {
        assert_eq!(Field::from_order(2).unwrap().mul(1, 1), 1);
        assert_eq!(Field::from_order(4).unwrap().mul(2, 2), 3);
        assert_eq!(Field::from_order(9).unwrap().mul(3, 3), 2);
    }

    #[test]
    fn inv_examples() {
        assert_eq!(Field::from_order(2).unwrap().inv(1), 1);
        assert_eq!(Field::from_order(4).unwrap().inv(2), 3);
        assert_eq!(Field::from_order(5).unwrap().inv(2), 3);
        let f = Field::from_order(5).unwrap();
        assert_eq!(f.checked_inv(0), Err(FieldError::DivisionByZero));
        assert!(matches!(f.checked_add(5, 1), Err(FieldError::OutOfRange { .. })));
        assert!(matches!(f.checked_mul(1, 9), Err(FieldError::OutOfRange { .. })));
    }

    #[test]
    fn enumerate_examples() {
        for q in [2u64, 3, 4] {
            let f = Field::from_order(q).unwrap();
            assert_eq!(f.elements().collect::<Vec<_>>(), (0..q as u32).collect::<Vec<_>>());
        }
    }

    #[test]
    fn tables_agree_with_reduction() {
        for f in all_fields() {
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul_by_reduction(a, b), "{f}: {a}*{b}");
                }
            }
        }
    }

    #[test]
    fn field_axioms() {
        for f in all_fields() {
            for a in f.elements() {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                    assert_eq!(f.pow(a, (f.q() - 1) as u64), 1);
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    let p = f.p() as u64;
                    assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
                    for c in f.elements() {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn large_field_without_add_table() {
        let f = Field::new(3, 6).unwrap();
        for a in (0..f.q()).step_by(37) {
            assert_eq!(f.sub(f.add(a, 500), 500), a);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
                assert_eq!(f.mul(a, 17), f.mul_by_reduction(a, 17));
            }
        }
    }
}
