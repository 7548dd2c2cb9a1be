//! Finite fields GF(p^e) with an explicit modulus polynomial.
//!
//! Elements are encoded as `u32` integers `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`
//! where `c_i` are the power-basis coordinates modulo the field's modulus.
//! For `e = 1` the encoding is the residue itself, and in every extension the
//! prime subfield occupies the encodings `0..p`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type Elem = u32;

/// Upper bound on `q` for log/exp multiplication tables.
const LOG_TABLE_MAX: u64 = 1 << 22;
/// Upper bound on `q` for a full addition table.
const ADD_TABLE_MAX: u64 = 1024;
/// Primes up to this size use a per-call multiplication table in `axpy`.
const SMALL_PRIME: u32 = 256;

#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<Inner>,
}

struct Inner {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    /// exp[i] = g^i for i in 0..2(q-1); empty for prime fields and huge fields.
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Vec<u32>,
    neg: Vec<u32>,
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

fn prime_factors(mut n: u64) -> Vec<u64> {
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

/// Builds GF(p^e) using the smallest monic irreducible modulus of degree `e`.
///
/// Candidate moduli `x^e + c_{e-1} x^{e-1} + ... + c_0` are ordered by the
/// integer `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`, so the higher coefficients
/// are the most significant. For `e = 1` the modulus is `x`.
pub fn make_field(p: u64, e: u32) -> Result<FieldSpec> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if e < 1 {
        return Err(Error::InvalidDegree);
    }
    let q = (p as u128).checked_pow(e).unwrap_or(u128::MAX);
    if q > (1u128 << 31) || p > (1 << 16) {
        return Err(Error::FieldTooLarge { p, e });
    }
    let p32 = p as u32;
    if e == 1 {
        return Ok(FieldSpec::from_parts(p32, 1, vec![0, 1]));
    }
    let tail_count = p.pow(e);
    for code in 0..tail_count {
        let mut f = digits(code, p32, e as usize);
        f.push(1);
        if fp_is_irreducible(&f, p32) {
            return Ok(FieldSpec::from_parts(p32, e, f));
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

/// Builds a field from a caller-supplied modulus, checking irreducibility.
pub fn field_with_modulus(p: u64, modulus: &[u32]) -> Result<FieldSpec> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let p32 = p as u32;
    if modulus.len() < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p32) {
        return Err(Error::Malformed(format!("modulus {modulus:?} is not monic over GF({p})")));
    }
    let e = (modulus.len() - 1) as u32;
    let q = (p as u128).checked_pow(e).unwrap_or(u128::MAX);
    if q > (1u128 << 31) {
        return Err(Error::FieldTooLarge { p, e });
    }
    if e == 1 {
        // every linear modulus gives the same field; keep the canonical one
        return Ok(FieldSpec::from_parts(p32, 1, vec![0, 1]));
    }
    if !fp_is_irreducible(modulus, p32) {
        return Err(Error::Malformed(format!("modulus {modulus:?} is reducible over GF({p})")));
    }
    Ok(FieldSpec::from_parts(p32, e, modulus.to_vec()))
}

fn digits(mut code: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((code % p as u64) as u32);
        code /= p as u64;
    }
    out
}

// --- small dense polynomial helpers over GF(p), used only for modulus search ---

fn fp_trim(f: &mut Vec<u32>) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

fn fp_inv(a: u32, p: u32) -> u32 {
    fp_pow(a, p as u64 - 2, p)
}

fn fp_pow(mut a: u32, mut k: u64, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut base = a as u64 % p as u64;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        k >>= 1;
    }
    a = acc as u32;
    a
}

fn fp_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = fp_inv(m[dm], p) as u64;
    while r.len() > dm {
        let dr = r.len() - 1;
        let c = r[dr] as u64 * lead_inv % p as u64;
        for (i, &mi) in m.iter().enumerate() {
            let idx = dr - dm + i;
            r[idx] = ((r[idx] as u64 + (p as u64 - c) * mi as u64) % p as u64) as u32;
        }
        fp_trim(&mut r);
    }
    r
}

fn fp_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|v| v as u32).collect();
    fp_rem(&prod, m, p)
}

fn fp_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    fp_trim(&mut x);
    fp_trim(&mut y);
    while !y.is_empty() {
        let r = fp_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Rabin-style test: `f` of degree `d` is irreducible iff it has no factor of
/// degree `<= d/2`, i.e. `gcd(f, x^(p^i) - x) = 1` for `1 <= i <= d/2`.
fn fp_is_irreducible(f: &[u32], p: u32) -> bool {
    let d = f.len() - 1;
    if d == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let mut xp = vec![0, 1];
    for _ in 1..=d / 2 {
        // xp <- xp^p mod f
        let mut acc = vec![1u32];
        let mut base = xp.clone();
        let mut k = p;
        while k > 0 {
            if k & 1 == 1 {
                acc = fp_mulmod(&acc, &base, f, p);
            }
            base = fp_mulmod(&base, &base, f, p);
            k >>= 1;
        }
        xp = acc;
        let mut diff = xp.clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        fp_trim(&mut diff);
        let g = fp_gcd(f, &diff, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

impl FieldSpec {
    fn from_parts(p: u32, e: u32, modulus: Vec<u32>) -> FieldSpec {
        let q = p.pow(e);
        let mut inner = Inner {
            p,
            e,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            add: Vec::new(),
            neg: Vec::new(),
        };
        if e > 1 {
            inner.neg = (0..q).map(|x| inner.neg_slow(x)).collect();
            if (q as u64) <= ADD_TABLE_MAX {
                let mut add = vec![0u32; (q * q) as usize];
                for a in 0..q {
                    for b in 0..q {
                        add[(a * q + b) as usize] = inner.add_slow(a, b);
                    }
                }
                inner.add = add;
            }
            if (q as u64) <= LOG_TABLE_MAX {
                inner.build_log_tables();
            }
        }
        FieldSpec { inner: Arc::new(inner) }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.inner.p
    }

    #[inline]
    pub fn e(&self) -> u32 {
        self.inner.e
    }

    /// Number of elements.
    #[inline]
    pub fn q(&self) -> u32 {
        self.inner.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.inner.e == 1
    }

    pub fn prime_field(&self) -> FieldSpec {
        if self.is_prime_field() {
            self.clone()
        } else {
            FieldSpec::from_parts(self.inner.p, 1, vec![0, 1])
        }
    }

    /// True when `self` is the prime field of `other` or equal to it.
    pub fn embeds_into(&self, other: &FieldSpec) -> bool {
        self == other || (self.is_prime_field() && self.p() == other.p())
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        0
    }

    #[inline]
    pub fn one(&self) -> Elem {
        1
    }

    /// Image of an integer in the prime subfield.
    pub fn from_i64(&self, v: i64) -> Elem {
        v.rem_euclid(self.inner.p as i64) as Elem
    }

    pub fn contains(&self, x: Elem) -> bool {
        x < self.inner.q
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let f = &*self.inner;
        if f.e == 1 {
            let s = a + b;
            if s >= f.p {
                s - f.p
            } else {
                s
            }
        } else if !f.add.is_empty() {
            f.add[(a * f.q + b) as usize]
        } else {
            f.add_slow(a, b)
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let f = &*self.inner;
        if f.e == 1 {
            if a == 0 {
                0
            } else {
                f.p - a
            }
        } else {
            f.neg[a as usize]
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let f = &*self.inner;
        if f.e == 1 {
            ((a as u64 * b as u64) % f.p as u64) as Elem
        } else if a == 0 || b == 0 {
            0
        } else if !f.log.is_empty() {
            f.exp[(f.log[a as usize] + f.log[b as usize]) as usize]
        } else {
            f.mul_slow(a, b)
        }
    }

    pub fn pow(&self, a: Elem, mut k: u64) -> Elem {
        let mut acc = 1;
        let mut base = a;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero");
        let f = &*self.inner;
        if f.e == 1 {
            fp_inv(a, f.p)
        } else if !f.log.is_empty() {
            let l = f.log[a as usize];
            f.exp[((f.q - 1 - l) % (f.q - 1)) as usize]
        } else {
            self.pow(a, f.q as u64 - 2)
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    pub fn frobenius(&self, a: Elem) -> Elem {
        if self.is_prime_field() {
            a
        } else {
            self.pow(a, self.inner.p as u64)
        }
    }

    /// Power-basis coordinates, low degree first.
    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        digits(a as u64, self.inner.p, self.inner.e as usize)
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<Elem> {
        if c.len() != self.inner.e as usize || c.iter().any(|&x| x >= self.inner.p) {
            return Err(Error::Malformed(format!("{c:?} is not an element of {self}")));
        }
        Ok(c.iter().rev().fold(0u32, |acc, &d| acc * self.inner.p + d))
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.inner.q
    }

    /// `dst += c * src`, the inner loop of elimination.
    #[inline]
    pub fn axpy(&self, dst: &mut [Elem], src: &[Elem], c: Elem) {
        if c == 0 {
            return;
        }
        let f = &*self.inner;
        if f.e == 1 && f.p <= SMALL_PRIME && dst.len() >= f.p as usize {
            let p = f.p;
            let mut table = [0u32; SMALL_PRIME as usize];
            for (s, t) in table.iter_mut().enumerate().take(p as usize) {
                *t = (c * s as u32) % p;
            }
            for (d, &s) in dst.iter_mut().zip(src) {
                let v = *d + table[s as usize];
                *d = if v >= p { v - p } else { v };
            }
        } else if f.e == 1 {
            let p = f.p as u64;
            let c = c as u64;
            for (d, &s) in dst.iter_mut().zip(src) {
                if s != 0 {
                    *d = ((*d as u64 + c * s as u64) % p) as Elem;
                }
            }
        } else if !f.add.is_empty() && dst.len() >= f.q as usize {
            let table: Vec<Elem> = (0..f.q).map(|s| self.mul(c, s)).collect();
            for (d, &s) in dst.iter_mut().zip(src) {
                if s != 0 {
                    *d = f.add[(*d * f.q + table[s as usize]) as usize];
                }
            }
        } else {
            for (d, &s) in dst.iter_mut().zip(src) {
                if s != 0 {
                    *d = self.add(*d, self.mul(c, s));
                }
            }
        }
    }

    pub fn scale_slice(&self, v: &mut [Elem], c: Elem) {
        for x in v.iter_mut() {
            *x = self.mul(*x, c);
        }
    }

    pub fn describe(&self) -> String {
        format!("GF({}^{})", self.inner.p, self.inner.e)
    }
}

impl Inner {
    fn add_slow(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.e {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    fn neg_slow(&self, a: u32) -> u32 {
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.e {
            let d = (self.p - a % self.p) % self.p;
            out += d * place;
            place *= self.p;
            a /= self.p;
        }
        out
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let x = digits(a as u64, self.p, self.e as usize);
        let y = digits(b as u64, self.p, self.e as usize);
        let mut r = fp_mulmod(&x, &y, &self.modulus, self.p);
        r.resize(self.e as usize, 0);
        r.iter().rev().fold(0u32, |acc, &d| acc * self.p + d)
    }

    fn pow_slow(&self, a: u32, mut k: u64) -> u32 {
        let mut acc = 1;
        let mut base = a;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            k >>= 1;
        }
        acc
    }

    fn build_log_tables(&mut self) {
        let order = (self.q - 1) as u64;
        let factors = prime_factors(order);
        let g = (2..self.q)
            .find(|&g| factors.iter().all(|&l| self.pow_slow(g, order / l) != 1))
            .unwrap_or(1);
        let n = (self.q - 1) as usize;
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![0u32; self.q as usize];
        let mut x = 1u32;
        for i in 0..n {
            exp[i] = x;
            exp[i + n] = x;
            log[x as usize] = i as u32;
            x = self.mul_slow(x, g);
        }
        self.exp = exp;
        self.log = log;
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.e == other.inner.e
                && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}; modulus {:?})", self.inner.p, self.inner.e, self.inner.modulus)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}
