//! Exact fields for the residual identity: the rationals, prime fields, and their
//! Gaussian extensions by `i`.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Minimal exact field interface used by row assembly.
pub trait Field:
    Sized
    + Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Data needed to embed rationals (the modulus for prime fields).
    type Ctx: Copy + Send + Sync;

    fn from_rational(ctx: Self::Ctx, q: &BigRational) -> Option<Self>;
    fn from_int(ctx: Self::Ctx, v: i64) -> Self;
    fn vanishes(&self) -> bool;
    fn try_inv(&self) -> Option<Self>;
}

impl Field for BigRational {
    type Ctx = ();

    fn from_rational(_: (), q: &BigRational) -> Option<Self> {
        Some(q.clone())
    }

    fn from_int(_: (), v: i64) -> Self {
        BigRational::from_integer(v.into())
    }

    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }

    fn try_inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

/// Element of `Z/pZ` for a prime `p < 2^32`, carrying its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp {
    v: u64,
    p: u64,
}

impl Fp {
    #[inline]
    pub fn new(v: u64, p: u64) -> Self {
        Self { v: v % p, p }
    }

    #[inline]
    pub fn value(&self) -> u64 {
        self.v
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }
}

/// `a^{-1} mod p` for `a` nonzero mod prime `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

/// Reduces a big integer into `0..p`.
pub fn reduce(v: &BigInt, p: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue below modulus")
}

impl Add for Fp {
    type Output = Fp;
    #[inline]
    fn add(self, o: Fp) -> Fp {
        let s = self.v + o.v;
        Fp { v: if s >= self.p { s - self.p } else { s }, p: self.p }
    }
}

impl Sub for Fp {
    type Output = Fp;
    #[inline]
    fn sub(self, o: Fp) -> Fp {
        Fp { v: if self.v >= o.v { self.v - o.v } else { self.v + self.p - o.v }, p: self.p }
    }
}

impl Mul for Fp {
    type Output = Fp;
    #[inline]
    fn mul(self, o: Fp) -> Fp {
        Fp { v: self.v * o.v % self.p, p: self.p }
    }
}

impl Neg for Fp {
    type Output = Fp;
    #[inline]
    fn neg(self) -> Fp {
        Fp { v: if self.v == 0 { 0 } else { self.p - self.v }, p: self.p }
    }
}

impl Field for Fp {
    type Ctx = u64;

    fn from_rational(p: u64, q: &BigRational) -> Option<Self> {
        let den = reduce(q.denom(), p);
        if den == 0 {
            return None;
        }
        Some(Fp { v: reduce(q.numer(), p) * inv_mod(den, p) % p, p })
    }

    fn from_int(p: u64, v: i64) -> Self {
        Fp { v: v.rem_euclid(p as i64) as u64, p }
    }

    fn vanishes(&self) -> bool {
        self.v == 0
    }

    fn try_inv(&self) -> Option<Self> {
        (self.v != 0).then(|| Fp { v: inv_mod(self.v, self.p), p: self.p })
    }
}

/// `re + i im` over a base field in which `-1` is not a square.
#[derive(Debug, Clone, PartialEq)]
pub struct Gaussian<K> {
    pub re: K,
    pub im: K,
}

impl<K: Field> Gaussian<K> {
    pub fn new(re: K, im: K) -> Self {
        Self { re, im }
    }

    pub fn real(re: K, ctx: K::Ctx) -> Self {
        Self { re, im: K::from_int(ctx, 0) }
    }

    pub fn imag(im: K, ctx: K::Ctx) -> Self {
        Self { re: K::from_int(ctx, 0), im }
    }

    pub fn zero(ctx: K::Ctx) -> Self {
        Self::real(K::from_int(ctx, 0), ctx)
    }

    pub fn one(ctx: K::Ctx) -> Self {
        Self::real(K::from_int(ctx, 1), ctx)
    }

    pub fn is_zero(&self) -> bool {
        self.re.vanishes() && self.im.vanishes()
    }

    pub fn scale(&self, k: &K) -> Self {
        Self { re: self.re.clone() * k.clone(), im: self.im.clone() * k.clone() }
    }

    /// Multiplication by `i`.
    pub fn times_i(&self) -> Self {
        Self { re: -self.im.clone(), im: self.re.clone() }
    }

    pub fn inv(&self) -> Option<Self> {
        let norm = self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone();
        let n = norm.try_inv()?;
        Some(Self { re: self.re.clone() * n.clone(), im: -(self.im.clone() * n) })
    }
}

impl<K: Field> Add for Gaussian<K> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { re: self.re + o.re, im: self.im + o.im }
    }
}

impl<K: Field> Sub for Gaussian<K> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { re: self.re - o.re, im: self.im - o.im }
    }
}

impl<K: Field> Neg for Gaussian<K> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { re: -self.re, im: -self.im }
    }
}

impl<K: Field> Mul for Gaussian<K> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let re = self.re.clone() * o.re.clone() - self.im.clone() * o.im.clone();
        let im = self.re * o.im + self.im * o.re;
        Self { re, im }
    }
}

/// Largest `|re|` or `|im|` of an exact Gaussian rational.
pub fn gaussian_magnitude(g: &Gaussian<BigRational>) -> BigRational {
    let (a, b) = (g.re.abs(), g.im.abs());
    if a > b {
        a
    } else {
        b
    }
}

/// Primes `p = 3 (mod 4)` below `2^31`, descending; `F_p[i]` is a field for each.
pub fn gaussian_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut c: u64 = (1u64 << 31) - 1;
    while out.len() < count {
        if c % 4 == 3 && is_prime(c) {
            out.push(c);
        }
        c -= 2;
    }
    out
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    true
}

/// Combines `a mod m` with `b mod p` into the residue modulo `m p`.
pub fn crt_combine(a: &BigInt, m: &BigInt, b: u64, p: u64) -> BigInt {
    let a_mod_p = reduce(a, p);
    let m_mod_p = reduce(m, p);
    let diff = (b + p - a_mod_p) % p;
    let k = diff * inv_mod(m_mod_p, p) % p;
    a + m * BigInt::from(k)
}

/// Smallest-height `r/s` with `r = a s (mod m)`, `|r|, s <= sqrt(m/2)`.
pub fn rational_reconstruction(a: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || s1.abs() > bound {
        return None;
    }
    Some(BigRational::new(r1, s1))
}
