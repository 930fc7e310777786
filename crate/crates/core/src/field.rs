//! Exact arithmetic in GF(p^k).
//!
//! A [`GaloisField`] owns the lookup tables of one finite field; elements are
//! lightweight [`Fq`] handles that are only meaningful together with the field
//! that produced them. Internally an element is stored as `log_g(x) + 1` for a
//! fixed primitive element `g` (zero is stored as `0`), so multiplication is an
//! index addition and addition goes through a Zech logarithm table.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest field order for which tables are built.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("GF({p}^{k}) exceeds the supported order {MAX_FIELD_ORDER}")]
    TooLarge { p: u32, k: u32 },
    #[error("order {m} is divisible by the characteristic {p}")]
    OrderDivisibleByCharacteristic { m: u64, p: u32 },
    #[error("GF({p}^{k}) has no element of order {m}")]
    InsufficientField { p: u32, k: u32, m: u64 },
    #[error("requested order must be positive")]
    ZeroOrder,
    #[error("field mismatch: GF({0}^{1}) vs GF({2}^{3})")]
    Mismatch(u32, u32, u32, u32),
    #[error("GF({p}^{k}) does not embed into GF({p}^{j})")]
    NotSubfield { p: u32, k: u32, j: u32 },
    #[error("invalid coordinates for GF({p}^{k}): {coords:?}")]
    BadCoordinates { p: u32, k: u32, coords: Vec<u32> },
    #[error("multi-index length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
}

/// Handle to an element of some [`GaloisField`].
///
/// `Fq::ZERO` and `Fq::ONE` are the same in every field.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fq(u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Tables {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus, little-endian, length k + 1.
    modulus: Vec<u32>,
    /// exp[i] = integer encoding of g^i, i < q - 1.
    exp: Vec<u32>,
    /// log[enc] = i with g^i = enc (enc != 0).
    log: Vec<u32>,
    /// zech[i] = handle of 1 + g^i.
    zech: Vec<Fq>,
    /// log of -1.
    neg_one: u32,
}

/// The finite field GF(p^k) with a deterministic modulus.
///
/// The modulus is the smallest monic irreducible polynomial of degree `k`
/// when the coefficient sequence `(c_{k-1}, ..., c_0)` is compared
/// lexicographically, so the same `(p, k)` always yields the same field
/// presentation.
#[derive(Clone)]
pub struct GaloisField(Arc<Tables>);

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus)
    }
}

impl Eq for GaloisField {}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.k)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
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

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    out.sort_unstable();
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

// Dense polynomials over GF(p), little-endian, used only while building tables.
mod fp_poly {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn inv_mod(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64 % p as u64;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u32
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm && !r.is_empty() {
            let shift = r.len() - 1 - dm;
            let c = (*r.last().unwrap() as u64 * lead_inv as u64 % p as u64) as u32;
            for (i, &mi) in m.iter().enumerate() {
                let v = r[shift + i] as u64 + (p as u64 - c as u64) * mi as u64;
                r[shift + i] = (v % p as u64) as u32;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let out: Vec<u32> = out.into_iter().map(|v| v as u32).collect();
        rem(&out, m, p)
    }

    pub fn pow_mod(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
        let mut result = vec![1u32];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                result = mul_mod(&result, &b, m, p);
            }
            b = mul_mod(&b, &b, m, p);
            e >>= 1;
        }
        rem(&result, m, p)
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let mut out = vec![0u32; n];
        for (i, o) in out.iter_mut().enumerate() {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            *o = (x + p - y) % p;
        }
        trim(&mut out);
        out
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Rabin's irreducibility test for a monic polynomial of degree k.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let k = (f.len() - 1) as u64;
        if k == 1 {
            return true;
        }
        let x = vec![0, 1];
        let frob = |i: u64| -> Vec<u32> {
            let mut r = x.clone();
            for _ in 0..i {
                r = pow_mod(&r, p as u64, f, p);
            }
            r
        };
        if sub(&frob(k), &rem(&x, f, p), p) != Vec::<u32>::new() {
            return false;
        }
        for r in super::prime_factors(k) {
            let h = sub(&frob(k / r), &x, p);
            let g = gcd(f, &h, p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

impl GaloisField {
    /// Builds GF(p^k) with the deterministic modulus.
    pub fn new(p: u32, k: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u64).checked_pow(k).filter(|&q| q <= MAX_FIELD_ORDER);
        let q = q.ok_or(FieldError::TooLarge { p, k })? as u32;

        let modulus = Self::smallest_irreducible(p, k);
        let encode = |c: &[u32]| -> u32 { c.iter().rev().fold(0u32, |acc, &d| acc * p + d) };
        let decode = |mut e: u32| -> Vec<u32> {
            let mut out = vec![0u32; k as usize];
            for o in out.iter_mut() {
                *o = e % p;
                e /= p;
            }
            out
        };

        let qm1 = (q - 1) as u64;
        let factors = prime_factors(qm1);
        let generator = (1..q)
            .map(|e| {
                let mut d = decode(e);
                fp_poly::trim(&mut d);
                d
            })
            .find(|g| {
                factors.iter().all(|&r| {
                    let v = fp_poly::pow_mod(g, qm1 / r, &modulus, p);
                    v != vec![1]
                })
            })
            .expect("multiplicative group of a finite field is cyclic");

        let mut exp = Vec::with_capacity(qm1 as usize);
        let mut log = vec![0u32; q as usize];
        let mut cur = vec![1u32];
        for i in 0..qm1 {
            let mut padded = cur.clone();
            padded.resize(k as usize, 0);
            let enc = encode(&padded);
            exp.push(enc);
            log[enc as usize] = i as u32;
            cur = fp_poly::mul_mod(&cur, &generator, &modulus, p);
        }
        let mut zech = Vec::with_capacity(qm1 as usize);
        for i in 0..qm1 as usize {
            let mut d = decode(exp[i]);
            d[0] = (d[0] + 1) % p;
            let enc = encode(&d);
            zech.push(if enc == 0 { Fq::ZERO } else { Fq(log[enc as usize] + 1) });
        }
        let neg_one = if p == 2 { 0 } else { (qm1 / 2) as u32 };

        Ok(GaloisField(Arc::new(Tables { p, k, q, modulus, exp, log, zech, neg_one })))
    }

    fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
        let count = (p as u64).pow(k);
        for c in 0..count {
            let mut f = Vec::with_capacity(k as usize + 1);
            let mut e = c;
            for _ in 0..k {
                f.push((e % p as u64) as u32);
                e /= p as u64;
            }
            f.push(1);
            if fp_poly::is_irreducible(&f, p) {
                return f;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.k
    }

    /// Number of elements.
    pub fn order(&self) -> u32 {
        self.0.q
    }

    /// Monic modulus coefficients `c_0, ..., c_{k-1}, 1`.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    fn qm1(&self) -> u32 {
        self.0.q - 1
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let qm1 = self.qm1();
        let la = a.0 - 1;
        let lb = b.0 - 1;
        let d = if lb >= la { lb - la } else { lb + qm1 - la };
        let z = self.0.zech[d as usize];
        if z.0 == 0 {
            Fq::ZERO
        } else {
            let s = la + z.0 - 1;
            Fq(if s >= qm1 { s - qm1 } else { s } + 1)
        }
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        if a.0 == 0 {
            return a;
        }
        let s = a.0 - 1 + self.0.neg_one;
        let qm1 = self.qm1();
        Fq(if s >= qm1 { s - qm1 } else { s } + 1)
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a.0 == 0 || b.0 == 0 {
            return Fq::ZERO;
        }
        let s = a.0 - 1 + b.0 - 1;
        let qm1 = self.qm1();
        Fq(if s >= qm1 { s - qm1 } else { s } + 1)
    }

    /// `a + b * c`.
    #[inline]
    pub fn mul_add(&self, a: Fq, b: Fq, c: Fq) -> Fq {
        self.add(a, self.mul(b, c))
    }

    pub fn try_inv(&self, a: Fq) -> Option<Fq> {
        if a.0 == 0 {
            None
        } else {
            let qm1 = self.qm1();
            Some(Fq((qm1 - (a.0 - 1)) % qm1 + 1))
        }
    }

    /// Panics on zero.
    pub fn inv(&self, a: Fq) -> Fq {
        self.try_inv(a).expect("inverse of zero")
    }

    pub fn div(&self, a: Fq, b: Fq) -> Fq {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Fq, e: i64) -> Fq {
        if a.0 == 0 {
            return if e == 0 { Fq::ONE } else { Fq::ZERO };
        }
        let qm1 = self.qm1() as i64;
        let l = ((a.0 - 1) as i64 * e.rem_euclid(qm1)).rem_euclid(qm1);
        Fq(l as u32 + 1)
    }

    /// Image of an integer under `Z -> GF(p^k)`.
    pub fn from_int(&self, n: i64) -> Fq {
        let r = n.rem_euclid(self.0.p as i64) as u32;
        if r == 0 {
            Fq::ZERO
        } else {
            Fq(self.0.log[r as usize] + 1)
        }
    }

    /// `g^i` for the fixed primitive element `g`.
    pub fn primitive_power(&self, i: i64) -> Fq {
        let l = i.rem_euclid(self.qm1() as i64);
        Fq(l as u32 + 1)
    }

    /// The fixed primitive element.
    pub fn primitive_element(&self) -> Fq {
        self.primitive_power(1)
    }

    /// Discrete logarithm to base [`Self::primitive_element`].
    pub fn log(&self, a: Fq) -> Option<u32> {
        if a.0 == 0 {
            None
        } else {
            Some(a.0 - 1)
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: Fq) -> Option<u64> {
        let l = self.log(a)? as u64;
        let qm1 = self.qm1() as u64;
        Some(qm1 / gcd(l, qm1))
    }

    /// Integer encoding `c_0 + c_1 p + ... + c_{k-1} p^{k-1}` of the coordinates.
    pub fn encode(&self, a: Fq) -> u32 {
        if a.0 == 0 {
            0
        } else {
            self.0.exp[(a.0 - 1) as usize]
        }
    }

    pub fn decode(&self, enc: u32) -> Option<Fq> {
        if enc >= self.0.q {
            None
        } else if enc == 0 {
            Some(Fq::ZERO)
        } else {
            Some(Fq(self.0.log[enc as usize] + 1))
        }
    }

    /// Coordinates with respect to the power basis `1, x, ..., x^{k-1}`.
    pub fn coords(&self, a: Fq) -> Vec<u32> {
        let mut e = self.encode(a);
        let p = self.0.p;
        (0..self.0.k)
            .map(|_| {
                let d = e % p;
                e /= p;
                d
            })
            .collect()
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<Fq, FieldError> {
        let p = self.0.p;
        if coords.len() != self.0.k as usize || coords.iter().any(|&c| c >= p) {
            return Err(FieldError::BadCoordinates { p, k: self.0.k, coords: coords.to_vec() });
        }
        let enc = coords.iter().rev().fold(0u32, |acc, &d| acc * p + d);
        Ok(self.decode(enc).expect("encoding in range"))
    }

    /// All elements, zero first, then `g^0, g^1, ...`.
    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.0.q).map(Fq)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Fq> {
        (1..self.0.q).map(Fq)
    }

    /// Some `r` with `r^n = a`, chosen deterministically (smallest discrete log).
    pub fn nth_root(&self, a: Fq, n: u64) -> Option<Fq> {
        if a.0 == 0 {
            return Some(Fq::ZERO);
        }
        let qm1 = self.qm1() as u64;
        let l = (a.0 - 1) as u64;
        let g = gcd(n % qm1, qm1);
        let g = if g == 0 { qm1 } else { g };
        if l % g != 0 {
            return None;
        }
        // Solve n * x = l (mod qm1).
        let m = qm1 / g;
        let n_red = (n / g) % m;
        let l_red = l / g;
        let x = if m == 1 { 0 } else { (l_red % m) * modinv(n_red, m) % m };
        Some(Fq(x as u32 + 1))
    }

    pub fn is_prime_field_element(&self, a: Fq) -> bool {
        self.encode(a) < self.0.p
    }

    pub fn element(&self, a: Fq) -> FieldElement {
        FieldElement { p: self.0.p, k: self.0.k, coords: self.coords(a) }
    }

    pub fn from_element(&self, e: &FieldElement) -> Result<Fq, FieldError> {
        if e.p != self.0.p || e.k != self.0.k {
            return Err(FieldError::Mismatch(e.p, e.k, self.0.p, self.0.k));
        }
        self.from_coords(&e.coords)
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor { p: self.0.p, k: self.0.k, modulus: self.0.modulus.clone() }
    }

    pub fn ensure_same(&self, other: &GaloisField) -> Result<(), FieldError> {
        if self == other {
            Ok(())
        } else {
            Err(FieldError::Mismatch(self.0.p, self.0.k, other.0.p, other.0.k))
        }
    }

    /// Human-readable form, `3` in a prime field, `[c0,c1]` otherwise.
    pub fn display(&self, a: Fq) -> String {
        if self.0.k == 1 {
            self.encode(a).to_string()
        } else {
            format!("{:?}", self.coords(a))
        }
    }
}

fn modpow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

fn modinv(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    old_s.rem_euclid(m as i128) as u64
}

/// Serialized field element `{p, k, coords}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldElement {
    pub p: u32,
    pub k: u32,
    pub coords: Vec<u32>,
}

/// Serialized field presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub k: u32,
    pub modulus: Vec<u32>,
}

pub fn make_field(p: u32, k: u32) -> Result<GaloisField, FieldError> {
    GaloisField::new(p, k)
}

/// Deterministic element of exact multiplicative order `m`: `g^((q-1)/m)`.
pub fn root_of_unity(field: &GaloisField, m: u64) -> Result<Fq, FieldError> {
    let p = field.characteristic();
    if m == 0 {
        return Err(FieldError::ZeroOrder);
    }
    if m % p as u64 == 0 {
        return Err(FieldError::OrderDivisibleByCharacteristic { m, p });
    }
    let qm1 = field.order() as u64 - 1;
    if qm1 % m != 0 {
        return Err(FieldError::InsufficientField { p, k: field.degree(), m });
    }
    Ok(field.primitive_power((qm1 / m) as i64))
}

/// Canonical embedding of a subfield into a larger field of the same characteristic.
#[derive(Clone)]
pub struct FieldEmbedding {
    source: GaloisField,
    target: GaloisField,
    images: Vec<Fq>,
}

impl fmt::Debug for FieldEmbedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} -> {:?}", self.source, self.target)
    }
}

impl FieldEmbedding {
    /// Sends the class of `x` to the root of the source modulus with the
    /// smallest discrete log in the target.
    pub fn new(source: &GaloisField, target: &GaloisField) -> Result<Self, FieldError> {
        let (p, k, j) = (source.characteristic(), source.degree(), target.degree());
        if target.characteristic() != p || j % k != 0 {
            return Err(FieldError::NotSubfield { p, k, j });
        }
        let modulus = source.modulus();
        let eval = |r: Fq| -> Fq {
            modulus.iter().rev().fold(Fq::ZERO, |acc, &c| {
                target.add(target.mul(acc, r), target.from_int(c as i64))
            })
        };
        let root = target
            .elements()
            .find(|&r| eval(r).is_zero())
            .expect("subfield modulus splits in the larger field");
        let images = source
            .elements()
            .map(|a| {
                source.coords(a).iter().rev().fold(Fq::ZERO, |acc, &c| {
                    target.add(target.mul(acc, root), target.from_int(c as i64))
                })
            })
            .collect();
        Ok(FieldEmbedding { source: source.clone(), target: target.clone(), images })
    }

    pub fn identity(field: &GaloisField) -> Self {
        FieldEmbedding { source: field.clone(), target: field.clone(), images: field.elements().collect() }
    }

    #[inline]
    pub fn map(&self, a: Fq) -> Fq {
        self.images[a.0 as usize]
    }

    pub fn source(&self) -> &GaloisField {
        &self.source
    }

    pub fn target(&self) -> &GaloisField {
        &self.target
    }
}

/// Smallest GF(p^j), `k | j`, whose multiplicative group has an element of order `m`.
pub fn extend_field(field: &GaloisField, m: u64) -> Result<(GaloisField, FieldEmbedding), FieldError> {
    let p = field.characteristic();
    if m == 0 {
        return Err(FieldError::ZeroOrder);
    }
    if m % p as u64 == 0 {
        return Err(FieldError::OrderDivisibleByCharacteristic { m, p });
    }
    let k = field.degree();
    let mut j = k;
    // Multiplicative order of p mod m bounds the search.
    let step = modpow(p as u64, k as u64, m);
    let mut power = step;
    loop {
        if power % m == 1 % m {
            break;
        }
        j += k;
        power = (power as u128 * step as u128 % m as u128) as u64;
        if j > 64 * k {
            return Err(FieldError::TooLarge { p, k: j });
        }
    }
    if j == k {
        return Ok((field.clone(), FieldEmbedding::identity(field)));
    }
    let big = GaloisField::new(p, j)?;
    let emb = FieldEmbedding::new(field, &big)?;
    Ok((big, emb))
}

fn small_binom_mod(n: u64, k: u64, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * modinv(den, p) % p
}

/// `binom(a, b) mod p` by Lucas' theorem.
pub fn binom_mod_p(a: u64, b: u64, p: u32) -> u32 {
    let p = p as u64;
    let (mut a, mut b) = (a, b);
    let mut acc = 1u64;
    while a > 0 || b > 0 {
        let (ad, bd) = (a % p, b % p);
        if bd > ad {
            return 0;
        }
        acc = acc * small_binom_mod(ad, bd, p) % p;
        a /= p;
        b /= p;
    }
    acc as u32
}

/// `prod_i binom(a_i + b_i, a_i) mod p`.
pub fn multi_binom(a: &[u32], b: &[u32], p: u32) -> Result<u32, FieldError> {
    if a.len() != b.len() {
        return Err(FieldError::LengthMismatch(a.len(), b.len()));
    }
    let mut acc = 1u64;
    for (&x, &y) in a.iter().zip(b) {
        acc = acc * binom_mod_p(x as u64 + y as u64, x as u64, p) as u64 % p as u64;
        if acc == 0 {
            break;
        }
    }
    Ok(acc as u32)
}
