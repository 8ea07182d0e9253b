//! Arithmetic in GF(q), q = p^r.
//!
//! Elements are stored as their index in `0..q`: the base-`p` digits of the
//! index are the coefficients of the polynomial-basis representative, least
//! significant digit first. So in GF(4) = GF(2)[x]/(x^2+x+1) the element `x`
//! has index 2 and `x + 1` has index 3.
//!
//! The reduction polynomial is always the smallest monic irreducible of degree
//! `r`, ordering candidates by their coefficients from the highest degree down.
//! Fields with `q <= 1024` carry full addition, multiplication and inverse
//! tables built at construction.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order accepted by [`FieldSpec::new`].
pub const MAX_ORDER: u64 = 1 << 20;

/// Fields up to this order get precomputed lookup tables.
pub const TABLE_ORDER: u32 = 1 << 10;

#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    /// Caller guarantees `i < q` for the field in use.
    #[inline]
    pub(crate) fn from_index_unchecked(i: u32) -> FieldElement {
        FieldElement(i)
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone)]
struct Tables {
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

/// A finite field GF(p^r) with a fixed polynomial basis.
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    r: u32,
    q: u32,
    /// Monic modulus, coefficients from degree 0 up to degree `r`. Empty for prime fields.
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("r", &self.r)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.r == other.r && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Splits `q` into `(p, r)` with `q = p^r`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut r = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        r += 1;
    }
    (rest == 1).then_some((p, r))
}

impl FieldSpec {
    /// GF(p^r) with the deterministically chosen modulus.
    pub fn new(p: u64, r: u32) -> Result<Self> {
        let (p, r, q) = check_order(p, r)?;
        let modulus = if r == 1 {
            Vec::new()
        } else {
            smallest_irreducible(p, r)
        };
        Ok(Self::build(p, r, q, modulus))
    }

    /// GF(q) for a prime power `q`.
    pub fn from_order(q: u64) -> Result<Self> {
        match prime_power(q) {
            Some((p, r)) => Self::new(p, r),
            None => Err(Error::NotPrime(q)),
        }
    }

    /// GF(p^r) reduced by a caller-chosen monic `modulus` (coefficients low to high,
    /// leading 1 included). The polynomial is checked for irreducibility.
    pub fn with_modulus(p: u64, r: u32, modulus: &[u32]) -> Result<Self> {
        let (p, r, q) = check_order(p, r)?;
        if r == 1 {
            return Ok(Self::build(p, r, q, Vec::new()));
        }
        if modulus.len() != r as usize + 1
            || modulus[r as usize] != 1
            || modulus.iter().any(|&c| c >= p)
        {
            return Err(Error::Precondition(format!(
                "modulus must be monic of degree {r} with coefficients below {p}"
            )));
        }
        if !is_irreducible(modulus, p) {
            return Err(Error::Precondition("modulus is reducible".into()));
        }
        Ok(Self::build(p, r, q, modulus.to_vec()))
    }

    fn build(p: u32, r: u32, q: u32, modulus: Vec<u32>) -> Self {
        let mut field = FieldSpec {
            p,
            r,
            q,
            modulus,
            tables: None,
        };
        if q <= TABLE_ORDER {
            field.tables = Some(field.make_tables());
        }
        field
    }

    fn make_tables(&self) -> Tables {
        let q = self.q as usize;
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for a in 0..q {
            for b in a..q {
                let s = self.add_slow(a as u32, b as u32) as u16;
                let m = self.mul_slow(a as u32, b as u32) as u16;
                add[a * q + b] = s;
                add[b * q + a] = s;
                mul[a * q + b] = m;
                mul[b * q + a] = m;
            }
        }
        let mut neg = vec![0u16; q];
        let mut inv = vec![0u16; q];
        for a in 0..q {
            neg[a] = self.neg_slow(a as u32) as u16;
            if a != 0 {
                // every row of the multiplication table is a permutation
                let row = &mul[a * q..(a + 1) * q];
                inv[a] = row
                    .iter()
                    .position(|&v| v == 1)
                    .expect("field has inverses") as u16;
            }
        }
        Tables { add, mul, neg, inv }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn r(&self) -> u32 {
        self.r
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients from degree 0 to `r`; empty for a prime field.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn element(&self, index: u32) -> Result<FieldElement> {
        if index < self.q {
            Ok(FieldElement(index))
        } else {
            Err(Error::ElementOutOfRange { index, q: self.q })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    /// The image of the integer `n` under `Z -> GF(q)`.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.tables {
            Some(t) => FieldElement(t.add[(a.0 * self.q + b.0) as usize] as u32),
            None => FieldElement(self.add_slow(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        match &self.tables {
            Some(t) => FieldElement(t.neg[a.0 as usize] as u32),
            None => FieldElement(self.neg_slow(a.0)),
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.tables {
            Some(t) => FieldElement(t.mul[(a.0 * self.q + b.0) as usize] as u32),
            None => FieldElement(self.mul_slow(a.0, b.0)),
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::InverseOfZero);
        }
        Ok(match &self.tables {
            Some(t) => FieldElement(t.inv[a.0 as usize] as u32),
            None => self.pow(a, self.q as u64 - 2),
        })
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut d = vec![0; self.r as usize];
        for slot in d.iter_mut() {
            *slot = a % self.p;
            a /= self.p;
        }
        d
    }

    fn undigits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        if self.r == 1 {
            return (a + b) % self.p;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.undigits(&s)
    }

    fn neg_slow(&self, a: u32) -> u32 {
        if self.r == 1 {
            return (self.p - a) % self.p;
        }
        let d: Vec<u32> = self
            .digits(a)
            .iter()
            .map(|&x| (self.p - x) % self.p)
            .collect();
        self.undigits(&d)
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        if self.r == 1 {
            return ((a as u64 * b as u64) % p) as u32;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let r = self.r as usize;
        let mut prod = vec![0u64; 2 * r - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // reduce with x^r = -(m_0 + ... + m_{r-1} x^{r-1})
        for deg in (r..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for (i, &m) in self.modulus[..r].iter().enumerate() {
                let idx = deg - r + i;
                prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
            }
        }
        let d: Vec<u32> = prod[..r].iter().map(|&c| c as u32).collect();
        self.undigits(&d)
    }
}

fn check_order(p: u64, r: u32) -> Result<(u32, u32, u32)> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if r == 0 {
        return Err(Error::ZeroDegree);
    }
    let q = (p as u128).checked_pow(r).unwrap_or(u128::MAX);
    if q > MAX_ORDER as u128 {
        return Err(Error::FieldTooLarge { p, r });
    }
    Ok((p as u32, r, q as u32))
}

/// Smallest monic irreducible of degree `r` over GF(p), coefficients low to high.
fn smallest_irreducible(p: u32, r: u32) -> Vec<u32> {
    let count = (p as u64).pow(r);
    for lower in 0..count {
        let mut poly = Vec::with_capacity(r as usize + 1);
        let mut rest = lower;
        for _ in 0..r {
            poly.push((rest % p as u64) as u32);
            rest /= p as u64;
        }
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Exhaustive check: no monic factor of degree `1..=deg/2`.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    if poly[0] == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for lower in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut rest = lower;
            for _ in 0..d {
                divisor.push((rest % p as u64) as u32);
                rest /= p as u64;
            }
            divisor.push(1);
            if poly_rem_is_zero(poly, &divisor, p) {
                return false;
            }
        }
    }
    true
}

/// Whether the monic `divisor` divides `poly` over GF(p).
fn poly_rem_is_zero(poly: &[u32], divisor: &[u32], p: u32) -> bool {
    let p = p as u64;
    let mut rem: Vec<u64> = poly.iter().map(|&c| c as u64).collect();
    let dd = divisor.len() - 1;
    for deg in (dd..rem.len()).rev() {
        let c = rem[deg];
        if c == 0 {
            continue;
        }
        for (i, &m) in divisor.iter().enumerate() {
            let idx = deg - dd + i;
            rem[idx] = (rem[idx] + (p - c) * m as u64) % p;
        }
    }
    rem[..dd].iter().all(|&c| c == 0)
}
