//! Dense univariate polynomials over a [`FieldSpec`], coefficients low degree
//! first with no trailing zeros. The zero polynomial is the empty vector.

use super::field::{Elem, FieldSpec};

pub type UPoly = Vec<Elem>;

pub fn trim(f: &mut UPoly) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

/// Degree, or `None` for the zero polynomial.
pub fn degree(f: &[Elem]) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

pub fn add(k: &FieldSpec, a: &[Elem], b: &[Elem]) -> UPoly {
    let n = a.len().max(b.len());
    let mut out: UPoly = (0..n)
        .map(|i| k.add(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0)))
        .collect();
    trim(&mut out);
    out
}

pub fn sub(k: &FieldSpec, a: &[Elem], b: &[Elem]) -> UPoly {
    let n = a.len().max(b.len());
    let mut out: UPoly = (0..n)
        .map(|i| k.sub(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0)))
        .collect();
    trim(&mut out);
    out
}

pub fn mul(k: &FieldSpec, a: &[Elem], b: &[Elem]) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x != 0 {
            k.axpy(&mut out[i..i + b.len()], b, x);
        }
    }
    trim(&mut out);
    out
}

pub fn scale(k: &FieldSpec, a: &[Elem], c: Elem) -> UPoly {
    let mut out: UPoly = a.iter().map(|&x| k.mul(x, c)).collect();
    trim(&mut out);
    out
}

/// Quotient and remainder; panics when dividing by zero.
pub fn divrem(k: &FieldSpec, a: &[Elem], b: &[Elem]) -> (UPoly, UPoly) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let db = b.len() - 1;
    let lead_inv = k.inv(b[db]);
    let mut quot = vec![0; r.len() - db];
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let c = k.mul(r[dr], lead_inv);
        quot[dr - db] = c;
        let shift = dr - db;
        k.axpy(&mut r[shift..], b, k.neg(c));
        trim(&mut r);
    }
    trim(&mut quot);
    (quot, r)
}

pub fn rem(k: &FieldSpec, a: &[Elem], b: &[Elem]) -> UPoly {
    divrem(k, a, b).1
}

pub fn monic(k: &FieldSpec, a: &[Elem]) -> UPoly {
    match a.last() {
        None => Vec::new(),
        Some(&lead) => scale(k, a, k.inv(lead)),
    }
}

/// Monic gcd; `gcd(0, 0) = 0`.
pub fn gcd(k: &FieldSpec, a: &[Elem], b: &[Elem]) -> UPoly {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(k, &x, &y);
        x = y;
        y = r;
    }
    monic(k, &x)
}

pub fn eval(k: &FieldSpec, a: &[Elem], x: Elem) -> Elem {
    a.iter().rev().fold(0, |acc, &c| k.add(k.mul(acc, x), c))
}

pub fn mulmod(k: &FieldSpec, a: &[Elem], b: &[Elem], m: &[Elem]) -> UPoly {
    rem(k, &mul(k, a, b), m)
}

/// `base^exp mod m`.
pub fn powmod(k: &FieldSpec, base: &[Elem], mut exp: u64, m: &[Elem]) -> UPoly {
    let mut acc = rem(k, &[1], m);
    let mut b = rem(k, base, m);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(k, &acc, &b, m);
        }
        b = mulmod(k, &b, &b, m);
        exp >>= 1;
    }
    acc
}

/// `x^(q^e) mod m` by `e` successive `q`-th powers.
pub fn frobenius_power_of_x(k: &FieldSpec, q: u64, e: u32, m: &[Elem]) -> UPoly {
    let mut xp = rem(k, &[0, 1], m);
    for _ in 0..e {
        xp = powmod(k, &xp, q, m);
    }
    xp
}

/// The product of the distinct linear factors of `f` over the field `k`,
/// i.e. `gcd(f, x^q - x)`. For `f = 0` returns the zero polynomial.
pub fn rational_root_part(k: &FieldSpec, f: &[Elem]) -> UPoly {
    if f.is_empty() {
        return Vec::new();
    }
    if f.len() == 1 {
        return vec![1];
    }
    let xq = frobenius_power_of_x(k, k.q() as u64, 1, f);
    let diff = sub(k, &xq, &[0, 1]);
    gcd(k, f, &diff)
}

/// Roots of `f` in `k`, in encoding order, by exhaustive evaluation.
pub fn roots_exhaustive(k: &FieldSpec, f: &[Elem]) -> Vec<Elem> {
    k.elements().filter(|&x| eval(k, f, x) == 0).collect()
}

/// Roots of `f` in `k`, sorted, by equal-degree splitting of the product of
/// its linear factors: `gcd(g, (x + a)^((q-1)/2) - 1)` for odd `q`, and the
/// trace `Σ (a x)^(2^i)` for even `q`, over `a = 0, 1, ...` until `g` splits.
pub fn roots(k: &FieldSpec, f: &[Elem]) -> Vec<Elem> {
    let mut out = Vec::new();
    let g = rational_root_part(k, f);
    if g.len() > 1 {
        split_linear(k, &monic(k, &g), &mut out);
    }
    out.sort_unstable();
    out
}

fn split_linear(k: &FieldSpec, g: &[Elem], out: &mut Vec<Elem>) {
    match g.len() {
        0 | 1 => return,
        2 => {
            out.push(k.neg(g[0]));
            return;
        }
        _ => {}
    }
    let q = k.q() as u64;
    for a in k.elements() {
        let h = if q % 2 == 1 {
            let t = powmod(k, &[a, 1], (q - 1) / 2, g);
            sub(k, &t, &[1])
        } else {
            let mut y = rem(k, &[0, a], g);
            let mut t = y.clone();
            let mut size = 2;
            while size < q {
                y = mulmod(k, &y, &y, g);
                t = add(k, &t, &y);
                size *= 2;
            }
            t
        };
        let d = gcd(k, g, &h);
        if d.len() > 1 && d.len() < g.len() {
            let (other, _) = divrem(k, g, &d);
            split_linear(k, &d, out);
            split_linear(k, &monic(k, &other), out);
            return;
        }
    }
    unreachable!("a squarefree product of linear factors splits for some shift");
}

/// Smallest `e >= 1` such that `f` (over the prime field) has a root in GF(p^e),
/// searching `e <= max_e`.
pub fn min_root_extension(k: &FieldSpec, f: &[Elem], max_e: u32) -> Option<u32> {
    assert!(k.is_prime_field());
    if f.len() <= 1 {
        return None;
    }
    let p = k.p() as u64;
    let mut xp = rem(k, &[0, 1], f);
    for e in 1..=max_e {
        xp = powmod(k, &xp, p, f);
        let diff = sub(k, &xp, &[0, 1]);
        if gcd(k, f, &diff).len() > 1 {
            return Some(e);
        }
    }
    None
}
