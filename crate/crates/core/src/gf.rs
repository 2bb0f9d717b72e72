//! Exact arithmetic in prime fields GF(p), p < 2^16, and in GF(2^8).
//!
//! Elements are always stored in canonical form `[0, q)`, so equality of
//! [`FieldElement`]s is plain integer equality. A [`FieldSpec`] is cheap to
//! clone; the GF(2^8) log/antilog tables live behind an `Arc`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Reduction polynomial x^8 + x^4 + x^3 + x + 1.
pub const AES_POLY: u32 = 0x11B;

/// Largest supported prime modulus bound (exclusive upper bound on `p` is 2^16).
pub const MAX_PRIME: u32 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Prime,
    BinaryExtension,
}

/// A canonical field element.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(transparent)]
pub struct FieldElement(u16);

impl FieldElement {
    pub const ZERO: Self = Self(0);
    pub const ONE: Self = Self(1);

    #[inline]
    pub fn value(self) -> u16 {
        self.0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Gf256Tables {
    log: [u8; 256],
    // Doubled so that exp[log a + log b] never needs a reduction.
    exp: [u8; 510],
}

/// The alphabet `F_q` all codes operate over.
#[derive(Clone)]
pub struct FieldSpec {
    kind: FieldKind,
    param: u32,
    order: u32,
    tables: Option<Arc<Gf256Tables>>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.param == other.param
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FieldKind::Prime => write!(f, "GF({})", self.param),
            FieldKind::BinaryExtension => write!(f, "GF(2^8, {:#x})", self.param),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FieldSpec {
    /// The prime field GF(p).
    pub fn prime(p: u32) -> Result<Self> {
        if p >= MAX_PRIME {
            return Err(Error::InvalidField(format!("modulus {p} exceeds 2^16")));
        }
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("modulus {p} is not prime")));
        }
        Ok(Self {
            kind: FieldKind::Prime,
            param: p,
            order: p,
            tables: None,
        })
    }

    /// GF(2^8) modulo the given 9-bit reduction polynomial (e.g. `0x11B`).
    pub fn binary_extension(poly: u32) -> Result<Self> {
        if poly >> 8 != 1 {
            return Err(Error::InvalidField(format!(
                "reduction polynomial {poly:#x} is not of degree 8"
            )));
        }
        if !is_irreducible_gf2(poly) {
            return Err(Error::InvalidField(format!(
                "reduction polynomial {poly:#x} is reducible over GF(2)"
            )));
        }
        Ok(Self {
            kind: FieldKind::BinaryExtension,
            param: poly,
            order: 256,
            tables: Some(Arc::new(build_tables(poly))),
        })
    }

    /// GF(2^8) with the AES polynomial.
    pub fn gf256() -> Self {
        Self::binary_extension(AES_POLY).expect("AES polynomial is irreducible")
    }

    /// Picks the field by order: a prime `q`, or `q = 256` with `poly`
    /// (default [`AES_POLY`]).
    pub fn from_order(q: u32, poly: Option<u32>) -> Result<Self> {
        match (q, poly) {
            (256, p) => Self::binary_extension(p.unwrap_or(AES_POLY)),
            (_, Some(_)) => Err(Error::InvalidField(
                "a reduction polynomial only applies to q = 256".into(),
            )),
            (q, None) => Self::prime(q),
        }
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    /// The prime modulus, or the reduction polynomial for GF(2^8).
    pub fn param(&self) -> u32 {
        self.param
    }

    /// Field order `q`.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn log2_order(&self) -> f64 {
        (self.order as f64).log2()
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// Checked conversion; fails unless `v < q`.
    pub fn element(&self, v: u64) -> Result<FieldElement> {
        if v < self.order as u64 {
            Ok(FieldElement(v as u16))
        } else {
            Err(Error::NonCanonical {
                value: v,
                order: self.order,
            })
        }
    }

    /// Maps an integer into the field: `v mod p` for prime fields, the low
    /// byte for GF(2^8).
    pub fn reduce(&self, v: u64) -> FieldElement {
        match self.kind {
            FieldKind::Prime => FieldElement((v % self.order as u64) as u16),
            FieldKind::BinaryExtension => FieldElement((v & 0xFF) as u16),
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order).map(|v| FieldElement(v as u16))
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        (a.0 as u32) < self.order
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match self.kind {
            FieldKind::Prime => {
                let s = a.0 as u32 + b.0 as u32;
                FieldElement(if s >= self.order { s - self.order } else { s } as u16)
            }
            FieldKind::BinaryExtension => FieldElement(a.0 ^ b.0),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        match self.kind {
            FieldKind::Prime if a.0 != 0 => FieldElement((self.order - a.0 as u32) as u16),
            _ => a,
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.tables {
            None => FieldElement(((a.0 as u32 * b.0 as u32) % self.order) as u16),
            Some(t) => {
                if a.0 == 0 || b.0 == 0 {
                    FieldElement::ZERO
                } else {
                    let i = t.log[a.index()] as usize + t.log[b.index()] as usize;
                    FieldElement(t.exp[i] as u16)
                }
            }
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(match &self.tables {
            None => FieldElement(mod_inverse(a.0 as u32, self.order) as u16),
            Some(t) => FieldElement(t.exp[(255 - t.log[a.index()] as usize) % 255] as u16),
        })
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` with `0^0 = 1`.
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
}

/// Deterministic trial-division primality test (inputs are below 2^16).
pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn mod_inverse(a: u32, p: u32) -> u32 {
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    t0.rem_euclid(p as i64) as u32
}

fn degree(p: u32) -> i32 {
    31 - p.leading_zeros() as i32
}

fn gf2_poly_rem(mut a: u32, b: u32) -> u32 {
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

/// Irreducibility over GF(2) by trial division with every polynomial of
/// degree at most half the input's degree.
pub fn is_irreducible_gf2(poly: u32) -> bool {
    let d = degree(poly);
    if d < 1 {
        return false;
    }
    for divisor in 2u32..(1 << (d / 2 + 1)) {
        if gf2_poly_rem(poly, divisor) == 0 {
            return false;
        }
    }
    true
}

/// Carry-less multiply of two bytes followed by reduction modulo `poly`.
/// This is the defining GF(2^8) product; the lookup tables are checked
/// against it.
pub fn clmul_reduce(a: u8, b: u8, poly: u32) -> u8 {
    let mut acc = 0u32;
    for bit in 0..8 {
        if (b >> bit) & 1 == 1 {
            acc ^= (a as u32) << bit;
        }
    }
    gf2_poly_rem(acc, poly) as u8
}

fn build_tables(poly: u32) -> Gf256Tables {
    // Not every irreducible polynomial has x as a primitive root (0x11B
    // does not), so search for a generator of the multiplicative group.
    let generator = (2u16..=255)
        .map(|g| g as u8)
        .find(|&g| {
            let mut v = 1u8;
            for i in 1..=255 {
                v = clmul_reduce(v, g, poly);
                if v == 1 {
                    return i == 255;
                }
            }
            false
        })
        .expect("multiplicative group of a field is cyclic");

    let mut log = [0u8; 256];
    let mut exp = [0u8; 510];
    let mut v = 1u8;
    for i in 0..255 {
        exp[i] = v;
        exp[i + 255] = v;
        log[v as usize] = i as u8;
        v = clmul_reduce(v, generator, poly);
    }
    Gf256Tables { log, exp }
}
