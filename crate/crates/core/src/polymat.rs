//! Matrices of homogeneous polynomials over GF(p).
//!
//! Used for the pencil `Σ λ_i A_i` of a module (generic rank over the
//! function field) and for searching common zeros of minors.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{make_field, upoly, Elem, FieldSpec, Matrix};
use crate::par;

/// Up to this many variables fit in a packed monomial key.
pub const MAX_VARS: usize = 4;
const EXP_BITS: u32 = 16;
const EXP_MASK: u64 = (1 << EXP_BITS) - 1;

fn pack(exps: &[u32]) -> u64 {
    let mut key = 0u64;
    for i in 0..MAX_VARS {
        key = (key << EXP_BITS) | exps.get(i).copied().unwrap_or(0) as u64;
    }
    key
}

fn unpack(key: u64, nvars: usize) -> Vec<u32> {
    (0..nvars).map(|i| exponent(key, i)).collect()
}

#[inline]
fn exponent(key: u64, var: usize) -> u32 {
    ((key >> (EXP_BITS * (MAX_VARS - 1 - var) as u32)) & EXP_MASK) as u32
}

fn divides(small: u64, big: u64) -> bool {
    (0..MAX_VARS).all(|v| exponent(small, v) <= exponent(big, v))
}

#[inline]
fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut base = a as u64;
    let mut k = p as u64 - 2;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        k >>= 1;
    }
    acc as u32
}

/// A homogeneous polynomial over GF(p). Terms are kept sorted by monomial in
/// descending lexicographic order (`x_1 > x_2 > ...`), with nonzero
/// coefficients only. The zero polynomial has no terms and is treated as
/// homogeneous of every degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HomPoly {
    p: u32,
    nvars: usize,
    degree: u32,
    terms: Vec<(u64, u32)>,
}

impl HomPoly {
    pub fn zero(p: u32, nvars: usize, degree: u32) -> HomPoly {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables");
        HomPoly { p, nvars, degree, terms: Vec::new() }
    }

    pub fn constant(p: u32, nvars: usize, c: u32) -> HomPoly {
        let mut h = HomPoly::zero(p, nvars, 0);
        if c % p != 0 {
            h.terms.push((0, c % p));
        }
        h
    }

    /// The variable `x_{var+1}`.
    pub fn var(p: u32, nvars: usize, var: usize) -> HomPoly {
        let mut e = vec![0; nvars];
        e[var] = 1;
        HomPoly::monomial(p, &e, 1)
    }

    pub fn monomial(p: u32, exps: &[u32], coef: u32) -> HomPoly {
        let degree = exps.iter().sum();
        let mut h = HomPoly::zero(p, exps.len(), degree);
        if coef % p != 0 {
            h.terms.push((pack(exps), coef % p));
        }
        h
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing
    /// repeated monomials and checking homogeneity.
    pub fn from_terms(p: u32, nvars: usize, terms: &[(Vec<u32>, i64)]) -> Result<HomPoly> {
        if nvars == 0 || nvars > MAX_VARS {
            return Err(Error::Unsupported(format!("{nvars} variables (1..={MAX_VARS} supported)")));
        }
        let mut degree = None;
        let mut acc: BTreeMap<u64, u32> = BTreeMap::new();
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::Malformed(format!("exponent vector {exps:?} for {nvars} variables")));
            }
            if exps.iter().any(|&e| e as u64 > EXP_MASK) {
                return Err(Error::Malformed(format!("exponent too large in {exps:?}")));
            }
            let d: u32 = exps.iter().sum();
            let c = c.rem_euclid(p as i64) as u32;
            if c == 0 {
                continue;
            }
            match degree {
                None => degree = Some(d),
                Some(d0) if d0 != d => {
                    return Err(Error::Malformed(format!("inhomogeneous polynomial (degrees {d0} and {d})")))
                }
                _ => {}
            }
            let slot = acc.entry(pack(exps)).or_insert(0);
            *slot = (*slot + c) % p;
        }
        let terms: Vec<(u64, u32)> = acc.into_iter().rev().filter(|&(_, c)| c != 0).collect();
        Ok(HomPoly { p, nvars, degree: degree.unwrap_or(0), terms })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `(exponents, coefficient)` in descending lexicographic order.
    pub fn terms(&self) -> Vec<(Vec<u32>, u32)> {
        self.terms.iter().map(|&(k, c)| (unpack(k, self.nvars), c)).collect()
    }

    pub fn is_constant(&self) -> bool {
        !self.is_zero() && self.degree == 0
    }

    fn merge(&self, other: &HomPoly, other_scale: u32) -> HomPoly {
        let p = self.p;
        if self.is_zero() {
            let mut h = other.scale(other_scale);
            h.degree = other.degree;
            return h;
        }
        if other.is_zero() || other_scale == 0 {
            return self.clone();
        }
        assert_eq!(self.degree, other.degree, "adding polynomials of different degree");
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let take = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => std::cmp::Ordering::Greater,
                (None, Some(_)) => std::cmp::Ordering::Less,
                (None, None) => unreachable!(),
            };
            match take {
                std::cmp::Ordering::Greater => {
                    out.push(self.terms[i]);
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let (k, c) = other.terms[j];
                    out.push((k, mul_mod(c, other_scale, p)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let (k, a) = self.terms[i];
                    let c = (a + mul_mod(other.terms[j].1, other_scale, p)) % p;
                    if c != 0 {
                        out.push((k, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        HomPoly { p, nvars: self.nvars, degree: self.degree, terms: out }
    }

    pub fn add(&self, other: &HomPoly) -> HomPoly {
        self.merge(other, 1)
    }

    pub fn sub(&self, other: &HomPoly) -> HomPoly {
        self.merge(other, self.p - 1)
    }

    pub fn scale(&self, c: u32) -> HomPoly {
        let c = c % self.p;
        if c == 0 {
            return HomPoly::zero(self.p, self.nvars, self.degree);
        }
        HomPoly {
            p: self.p,
            nvars: self.nvars,
            degree: self.degree,
            terms: self.terms.iter().map(|&(k, a)| (k, mul_mod(a, c, self.p))).collect(),
        }
    }

    pub fn mul(&self, other: &HomPoly) -> HomPoly {
        let degree = self.degree + other.degree;
        if self.is_zero() || other.is_zero() {
            return HomPoly::zero(self.p, self.nvars, degree);
        }
        let p = self.p as u64;
        let mut acc: Vec<(u64, u64)> = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(ka, ca) in &self.terms {
            for &(kb, cb) in &other.terms {
                acc.push((ka + kb, ca as u64 * cb as u64));
            }
        }
        acc.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let mut terms: Vec<(u64, u32)> = Vec::new();
        let mut iter = acc.into_iter().peekable();
        while let Some((k, mut c)) = iter.next() {
            c %= p;
            while let Some(&(k2, c2)) = iter.peek() {
                if k2 != k {
                    break;
                }
                c = (c + c2) % p;
                iter.next();
            }
            if c != 0 {
                terms.push((k, c as u32));
            }
        }
        HomPoly { p: self.p, nvars: self.nvars, degree, terms }
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &HomPoly) -> Option<HomPoly> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let degree = self.degree.checked_sub(divisor.degree);
        if self.is_zero() {
            return Some(HomPoly::zero(self.p, self.nvars, degree.unwrap_or(0)));
        }
        let degree = degree?;
        let (lead_key, lead_coef) = divisor.terms[0];
        let lead_inv = inv_mod(lead_coef, self.p);
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some(&(k, c)) = rem.terms.first() {
            if !divides(lead_key, k) {
                return None;
            }
            let qk = k - lead_key;
            let qc = mul_mod(c, lead_inv, self.p);
            quot.push((qk, qc));
            let shifted = HomPoly {
                p: self.p,
                nvars: self.nvars,
                degree: rem.degree,
                terms: divisor.terms.iter().map(|&(dk, dc)| (dk + qk, mul_mod(dc, qc, self.p))).collect(),
            };
            rem = rem.sub(&shifted);
        }
        Some(HomPoly { p: self.p, nvars: self.nvars, degree, terms: quot })
    }

    /// Value at a point whose coordinates lie in an extension of GF(p).
    pub fn eval(&self, field: &FieldSpec, point: &[Elem]) -> Elem {
        assert_eq!(point.len(), self.nvars);
        let mut acc = 0;
        for &(k, c) in &self.terms {
            let mut t = c;
            for (v, &x) in point.iter().enumerate() {
                let e = exponent(k, v);
                if e > 0 {
                    t = field.mul(t, field.pow(x, e as u64));
                    if t == 0 {
                        break;
                    }
                }
            }
            acc = field.add(acc, t);
        }
        acc
    }

    /// Univariate polynomial in `x_{var+1}` after substituting `values` for
    /// the other coordinates (the entry at `var` is ignored).
    pub fn restrict_to_line(&self, field: &FieldSpec, values: &[Elem], var: usize) -> upoly::UPoly {
        let mut out = vec![0; self.degree as usize + 1];
        for &(k, c) in &self.terms {
            let mut t = c;
            for (v, &x) in values.iter().enumerate() {
                if v == var {
                    continue;
                }
                let e = exponent(k, v);
                if e > 0 {
                    t = if x == 0 { 0 } else { field.mul(t, field.pow(x, e as u64)) };
                    if t == 0 {
                        break;
                    }
                }
            }
            if t != 0 {
                let d = exponent(k, var) as usize;
                out[d] = field.add(out[d], t);
            }
        }
        upoly::trim(&mut out);
        out
    }

    /// For `nvars = 2`: the univariate polynomial obtained by setting the
    /// other variable to 1, indexed by the powers of `x_{var+1}`.
    fn dehomogenize(&self, var: usize) -> upoly::UPoly {
        assert_eq!(self.nvars, 2);
        let mut out = vec![0; self.degree as usize + 1];
        for &(k, c) in &self.terms {
            out[exponent(k, var) as usize] = c;
        }
        upoly::trim(&mut out);
        out
    }

    /// `x1^{deg g} x2^{b}`-style homogenization of `g(x1)` times `x2^b`.
    fn homogenize(p: u32, g: &[Elem], b: u32) -> HomPoly {
        let d = g.len() as u32 - 1;
        let terms: Vec<(Vec<u32>, i64)> =
            g.iter().enumerate().map(|(a, &c)| (vec![a as u32, d - a as u32 + b], c as i64)).collect();
        HomPoly::from_terms(p, 2, &terms).expect("homogeneous by construction")
    }

    /// Normalizes so that the term with the highest power of `x_1` has coefficient 1.
    pub fn monic_in_first(&self) -> HomPoly {
        match self.terms.first() {
            None => self.clone(),
            Some(&(_, c)) => self.scale(inv_mod(c, self.p)),
        }
    }
}

impl fmt::Debug for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|&(k, c)| {
                let mut s = String::new();
                let exps = unpack(k, self.nvars);
                if c != 1 || exps.iter().all(|&e| e == 0) {
                    s.push_str(&c.to_string());
                }
                for (v, &e) in exps.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => s.push_str(&format!("x{}", v + 1)),
                        _ => s.push_str(&format!("x{}^{}", v + 1, e)),
                    }
                }
                s
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// A `rows x cols` matrix of homogeneous polynomials in `nvars` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    p: u32,
    nvars: usize,
    rows: usize,
    cols: usize,
    entries: Vec<HomPoly>,
}

/// Result of [`PolyMatrix::common_zero_search`].
#[derive(Clone, Debug)]
pub enum ZeroSearch {
    Witness { point: Vec<Elem>, field: FieldSpec },
    NotFound { extensions: Vec<u32> },
}

impl PolyMatrix {
    pub fn new(p: u32, nvars: usize, rows: usize, cols: usize, entries: Vec<HomPoly>) -> Result<PolyMatrix> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for {rows}x{cols}", entries.len())));
        }
        if nvars == 0 || nvars > MAX_VARS {
            return Err(Error::Unsupported(format!("{nvars} variables (1..={MAX_VARS} supported)")));
        }
        if entries.iter().any(|h| h.p != p || h.nvars != nvars) {
            return Err(Error::Malformed("entries disagree on characteristic or variable count".into()));
        }
        Ok(PolyMatrix { p, nvars, rows, cols, entries })
    }

    /// The pencil `Σ x_i A_i` of a tuple of prime-field matrices.
    pub fn pencil(gens: &[Matrix]) -> Result<PolyMatrix> {
        let first = gens.first().ok_or_else(|| Error::InvalidParams("empty pencil".into()))?;
        let f = first.field();
        if !f.is_prime_field() {
            return Err(Error::Unsupported("pencils over extension fields".into()));
        }
        let (n, m, r, p) = (first.rows(), first.cols(), gens.len(), f.p());
        if r > MAX_VARS {
            return Err(Error::Unsupported(format!("pencil in {r} variables (at most {MAX_VARS})")));
        }
        let mut entries = Vec::with_capacity(n * m);
        for i in 0..n {
            for j in 0..m {
                let terms: Vec<(Vec<u32>, i64)> = gens
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| a.get(i, j) != 0)
                    .map(|(v, a)| {
                        let mut e = vec![0; r];
                        e[v] = 1;
                        (e, a.get(i, j) as i64)
                    })
                    .collect();
                let mut h = HomPoly::from_terms(p, r, &terms)?;
                h.degree = 1;
                entries.push(h);
            }
        }
        PolyMatrix::new(p, r, n, m, entries)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &HomPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[HomPoly] {
        &self.entries
    }

    /// Common degree of the nonzero entries of each column, if they agree.
    pub fn column_degrees(&self) -> Vec<Option<u32>> {
        (0..self.cols)
            .map(|j| {
                let mut degs = (0..self.rows).map(|i| self.entry(i, j)).filter(|h| !h.is_zero()).map(|h| h.degree);
                let d0 = degs.next()?;
                degs.all(|d| d == d0).then_some(d0)
            })
            .collect()
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows);
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: Option<HomPoly> = None;
                for k in 0..self.cols {
                    let a = self.entry(i, k);
                    let b = other.entry(k, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    let t = a.mul(b);
                    acc = Some(match acc {
                        None => t,
                        Some(s) => s.add(&t),
                    });
                }
                let d = self.entry(i, 0).degree + other.entry(0, j).degree;
                entries.push(acc.unwrap_or_else(|| HomPoly::zero(self.p, self.nvars, d)));
            }
        }
        PolyMatrix { p: self.p, nvars: self.nvars, rows: self.rows, cols: other.cols, entries }
    }

    pub fn pow(&self, k: usize) -> PolyMatrix {
        assert!(k >= 1 && self.rows == self.cols);
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, field: &FieldSpec, point: &[Elem]) -> Matrix {
        Matrix::from_fn(field, self.rows, self.cols, |i, j| self.entry(i, j).eval(field, point))
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                entries.push(self.entry(i, j).clone());
            }
        }
        PolyMatrix { p: self.p, nvars: self.nvars, rows: rows.len(), cols: cols.len(), entries }
    }

    /// Fraction-free (Bareiss) elimination with complete pivoting. Returns
    /// the rank and the last pivot, which for a square matrix of full rank is
    /// the determinant up to the sign of the permutation.
    fn bareiss(&self) -> (usize, Option<HomPoly>, bool) {
        self.bareiss_steps(usize::MAX)
    }

    /// Bareiss elimination stopped after at most `steps` pivots. The last
    /// pivot after `k` steps is a nonzero `k x k` minor.
    fn bareiss_steps(&self, steps: usize) -> (usize, Option<HomPoly>, bool) {
        let (n, m) = (self.rows, self.cols);
        let mut a: Vec<HomPoly> = self.entries.clone();
        let mut prev = HomPoly::constant(self.p, self.nvars, 1);
        let mut negate = false;
        let mut rank = 0;
        let mut last = None;
        for k in 0..n.min(m).min(steps) {
            let pivot = (k..m).find_map(|j| (k..n).find(|&i| !a[i * m + j].is_zero()).map(|i| (i, j)));
            let Some((pi, pj)) = pivot else { break };
            if pi != k {
                for j in 0..m {
                    a.swap(pi * m + j, k * m + j);
                }
                negate = !negate;
            }
            if pj != k {
                for i in 0..n {
                    a.swap(i * m + pj, i * m + k);
                }
                negate = !negate;
            }
            let pivot_entry = a[k * m + k].clone();
            let updated: Vec<(usize, Vec<HomPoly>)> = par::map_range(n - k - 1, |off| {
                let i = k + 1 + off;
                let aik = &a[i * m + k];
                let row: Vec<HomPoly> = (k + 1..m)
                    .map(|j| {
                        let t1 = pivot_entry.mul(&a[i * m + j]);
                        let t2 = if aik.is_zero() { None } else { Some(aik.mul(&a[k * m + j])) };
                        let num = match t2 {
                            Some(t2) => t1.sub(&t2),
                            None => t1,
                        };
                        num.div_exact(&prev).expect("Bareiss division is exact")
                    })
                    .collect();
                (i, row)
            });
            for (i, row) in updated {
                for (off, v) in row.into_iter().enumerate() {
                    a[i * m + k + 1 + off] = v;
                }
                let d = a[i * m + k].degree;
                a[i * m + k] = HomPoly::zero(self.p, self.nvars, d);
            }
            prev = pivot_entry.clone();
            last = Some(pivot_entry);
            rank += 1;
        }
        (rank, last, negate)
    }

    /// Rank over the rational function field GF(p)(x_1..x_n).
    pub fn generic_rank(&self) -> usize {
        self.bareiss().0
    }

    pub fn determinant(&self) -> HomPoly {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let degree: u32 = (0..n).map(|i| self.entry(i, i).degree).sum();
        if n == 0 {
            return HomPoly::constant(self.p, self.nvars, 1);
        }
        match self.bareiss() {
            (r, Some(d), neg) if r == n => {
                if neg {
                    d.scale(self.p - 1)
                } else {
                    d
                }
            }
            _ => HomPoly::zero(self.p, self.nvars, degree),
        }
    }

    /// All `k x k` minors, row combinations outermost, both in lexicographic order.
    pub fn minors(&self, k: usize) -> Vec<HomPoly> {
        let row_sets = combinations(self.rows, k);
        let col_sets = combinations(self.cols, k);
        let mut out = Vec::with_capacity(row_sets.len() * col_sets.len());
        for rs in &row_sets {
            for cs in &col_sets {
                out.push(self.submatrix(rs, cs).determinant());
            }
        }
        out
    }

    /// Gcd of all `k x k` minors for `nvars = 2`, normalized so the term with
    /// the highest power of `x_1` has coefficient 1.
    ///
    /// Computed from determinantal divisors: over the principal ideal domains
    /// GF(p)[x_1] (setting `x_2 = 1`) and GF(p)[x_2] (setting `x_1 = 1`) the
    /// gcd of the `k`-minors is the product of the first `k` invariant
    /// factors. The first gives the affine part, the second the multiplicity
    /// of the point `[1:0]`.
    pub fn bivariate_minor_gcd(&self, k: usize) -> Result<HomPoly> {
        if self.nvars != 2 {
            return Err(Error::InvalidParams(format!("bivariate gcd needs 2 variables, got {}", self.nvars)));
        }
        if k == 0 {
            return Ok(HomPoly::constant(self.p, 2, 1));
        }
        let (rank, minor, _) = self.bareiss_steps(k);
        let minor = match minor {
            Some(d) if rank == k => d,
            _ => return Ok(HomPoly::zero(self.p, 2, 0)),
        };
        let fp = make_field(self.p as u64, 1)?;
        let affine: Vec<upoly::UPoly> = self.entries.iter().map(|h| h.dehomogenize(0)).collect();
        let at_infinity: Vec<upoly::UPoly> = self.entries.iter().map(|h| h.dehomogenize(1)).collect();
        let g = determinantal_divisor(&fp, affine, self.rows, self.cols, k, &minor.dehomogenize(0));
        let h = determinantal_divisor(&fp, at_infinity, self.rows, self.cols, k, &minor.dehomogenize(1));
        let b = h.iter().position(|&c| c != 0).unwrap_or(0) as u32;
        Ok(HomPoly::homogenize(self.p, &g, b))
    }

    /// Reference computation of the same gcd by enumerating minors in order
    /// and stopping as soon as the running gcd is constant. Exponential in
    /// the matrix size; meant for cross-checking small cases.
    pub fn bivariate_minor_gcd_by_enumeration(&self, k: usize) -> Result<HomPoly> {
        if self.nvars != 2 {
            return Err(Error::InvalidParams(format!("bivariate gcd needs 2 variables, got {}", self.nvars)));
        }
        let fp = make_field(self.p as u64, 1)?;
        let mut affine: upoly::UPoly = Vec::new();
        let mut mult_inf: Option<usize> = None;
        for rs in combinations(self.rows, k) {
            for cs in combinations(self.cols, k) {
                let minor = self.submatrix(&rs, &cs).determinant();
                if minor.is_zero() {
                    continue;
                }
                affine = upoly::gcd(&fp, &affine, &minor.dehomogenize(0));
                let inf = minor.dehomogenize(1);
                let ord = inf.iter().position(|&c| c != 0).unwrap_or(0);
                mult_inf = Some(mult_inf.map_or(ord, |m| m.min(ord)));
                if affine.len() == 1 && mult_inf == Some(0) {
                    return Ok(HomPoly::constant(self.p, 2, 1));
                }
            }
        }
        match mult_inf {
            None => Ok(HomPoly::zero(self.p, 2, 0)),
            Some(b) => Ok(HomPoly::homogenize(self.p, &affine, b as u32)),
        }
    }

    /// Sweeps normalized points of `P^{n-1}(GF(p^e))` for `e = 1..=max_e`
    /// and returns the first at which every `k x k` minor vanishes.
    ///
    /// Within one extension the sweep runs over the normalized points in
    /// lexicographic order; for each choice of all but the last coordinate
    /// the minors restrict to univariate polynomials in the last coordinate,
    /// whose common roots are found through their gcd.
    pub fn common_zero_search(&self, k: usize, max_e: u32) -> Result<ZeroSearch> {
        if max_e < 1 {
            return Err(Error::InvalidParams("max_e must be at least 1".into()));
        }
        let minors: Vec<HomPoly> = self.minors(k).into_iter().filter(|h| !h.is_zero()).collect();
        let n = self.nvars;
        for e in 1..=max_e {
            let field = make_field(self.p as u64, e)?;
            if let Some(point) = first_common_zero(&field, &minors, n) {
                return Ok(ZeroSearch::Witness { point, field });
            }
        }
        Ok(ZeroSearch::NotFound { extensions: (1..=max_e).collect() })
    }
}

fn first_common_zero(field: &FieldSpec, minors: &[HomPoly], n: usize) -> Option<Vec<Elem>> {
    let q = field.q() as u64;
    for lead in (0..n).rev() {
        if lead == n - 1 {
            let mut pt = vec![0; n];
            pt[lead] = 1;
            if minors.iter().all(|h| h.eval(field, &pt) == 0) {
                return Some(pt);
            }
            continue;
        }
        let prefix_len = n - 2 - lead;
        let prefixes = q.pow(prefix_len as u32);
        let found = par::find_first(prefixes as usize, |idx| {
            let mut pt = vec![0; n];
            pt[lead] = 1;
            let mut rest = idx as u64;
            for pos in (lead + 1..n - 1).rev() {
                pt[pos] = (rest % q) as Elem;
                rest /= q;
            }
            smallest_root_on_line(field, minors, &pt, n - 1).map(|y| {
                pt[n - 1] = y;
                pt
            })
        });
        if let Some((_, pt)) = found {
            return Some(pt);
        }
    }
    None
}

/// Smallest value of coordinate `var` (in encoding order) at which all
/// polynomials vanish, the other coordinates fixed by `pt`.
fn smallest_root_on_line(field: &FieldSpec, polys: &[HomPoly], pt: &[Elem], var: usize) -> Option<Elem> {
    let mut g: upoly::UPoly = Vec::new();
    for h in polys {
        g = upoly::gcd(field, &g, &h.restrict_to_line(field, pt, var));
        if g.len() == 1 {
            return None;
        }
    }
    if g.is_empty() {
        return Some(0);
    }
    let candidates = if field.q() <= 4096 { g } else { upoly::rational_root_part(field, &g) };
    if candidates.len() <= 1 {
        return None;
    }
    field.elements().find(|&y| upoly::eval(field, &candidates, y) == 0)
}

/// Product of the first `k` invariant factors of a matrix over GF(p)[x],
/// given a nonzero `k x k` minor `d`.
///
/// The product divides `d`, and adding multiples of `d` to entries does not
/// change the `k`-minors modulo `d`, so the elimination runs on remainders
/// mod `d`. This keeps entry degrees below `deg d`.
fn determinantal_divisor(
    k_field: &FieldSpec,
    mut a: Vec<upoly::UPoly>,
    rows: usize,
    cols: usize,
    k: usize,
    d: &[Elem],
) -> upoly::UPoly {
    let f = k_field;
    let d = upoly::monic(f, d);
    assert!(!d.is_empty(), "the given minor must be nonzero");
    if d.len() == 1 {
        return vec![1];
    }
    for x in a.iter_mut() {
        *x = upoly::rem(f, x, &d);
    }
    let idx = |i: usize, j: usize| i * cols + j;
    let mut diag: Vec<upoly::UPoly> = Vec::new();
    for t in 0..rows.min(cols) {
        // smallest-degree nonzero entry of the trailing block
        let mut best: Option<(usize, usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if let Some(d) = upoly::degree(&a[idx(i, j)]) {
                    if best.map_or(true, |b| d < b.2) {
                        best = Some((i, j, d));
                    }
                }
            }
        }
        let Some((bi, bj, _)) = best else { break };
        swap_rows(&mut a, cols, t, bi);
        swap_cols(&mut a, cols, rows, t, bj);
        loop {
            let mut changed = false;
            for i in t + 1..rows {
                if a[idx(i, t)].is_empty() {
                    continue;
                }
                let (q, _) = upoly::divrem(f, &a[idx(i, t)], &a[idx(t, t)]);
                for j in t..cols {
                    let prod = upoly::mul(f, &q, &a[idx(t, j)]);
                    a[idx(i, j)] = upoly::rem(f, &upoly::sub(f, &a[idx(i, j)], &prod), &d);
                }
                if !a[idx(i, t)].is_empty() {
                    swap_rows(&mut a, cols, t, i);
                    changed = true;
                }
            }
            for j in t + 1..cols {
                if a[idx(t, j)].is_empty() {
                    continue;
                }
                let (q, _) = upoly::divrem(f, &a[idx(t, j)], &a[idx(t, t)]);
                for i in t..rows {
                    let prod = upoly::mul(f, &q, &a[idx(i, t)]);
                    a[idx(i, j)] = upoly::rem(f, &upoly::sub(f, &a[idx(i, j)], &prod), &d);
                }
                if !a[idx(t, j)].is_empty() {
                    swap_cols(&mut a, cols, rows, t, j);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        diag.push(upoly::monic(f, &a[idx(t, t)]));
    }
    // entries that vanished mod d stand for d itself
    diag.resize(rows.min(cols), d.clone());
    // enforce the divisibility chain: diag(a, b) ~ diag(gcd, lcm)
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let g = upoly::gcd(f, &diag[i], &diag[j]);
            if g != diag[i] {
                let prod = upoly::mul(f, &diag[i], &diag[j]);
                let (l, _) = upoly::divrem(f, &prod, &g);
                diag[i] = g;
                diag[j] = upoly::monic(f, &l);
            }
        }
    }
    let prod = diag[..k].iter().fold(vec![1], |acc, x| upoly::mul(f, &acc, x));
    upoly::gcd(f, &prod, &d)
}

fn swap_rows(a: &mut [upoly::UPoly], cols: usize, r1: usize, r2: usize) {
    if r1 != r2 {
        for j in 0..cols {
            a.swap(r1 * cols + j, r2 * cols + j);
        }
    }
}

fn swap_cols(a: &mut [upoly::UPoly], cols: usize, rows: usize, c1: usize, c2: usize) {
    if c1 != c2 {
        for i in 0..rows {
            a.swap(i * cols + c1, i * cols + c2);
        }
    }
}

/// `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exps: Vec<u32>,
    coef: i64,
}

#[derive(Serialize, Deserialize)]
struct PolyMatrixJson {
    p: u32,
    nvars: usize,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<TermJson>>,
}

impl PolyMatrix {
    /// `{"p","nvars","rows","cols","entries"}` with `entries` a row-major
    /// list of polynomials, each a list of `{"exps","coef"}` terms.
    pub fn to_json(&self) -> serde_json::Value {
        let j = PolyMatrixJson {
            p: self.p,
            nvars: self.nvars,
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(|h| h.terms().into_iter().map(|(exps, c)| TermJson { exps, coef: c as i64 }).collect())
                .collect(),
        };
        serde_json::to_value(j).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<PolyMatrix> {
        let j: PolyMatrixJson = serde_json::from_value(v.clone()).map_err(|e| Error::Malformed(e.to_string()))?;
        if !crate::exactalg::is_prime(j.p as u64) {
            return Err(Error::NotPrime(j.p as u64));
        }
        let entries = j
            .entries
            .iter()
            .map(|terms| {
                let t: Vec<(Vec<u32>, i64)> = terms.iter().map(|t| (t.exps.clone(), t.coef)).collect();
                HomPoly::from_terms(j.p, j.nvars, &t)
            })
            .collect::<Result<Vec<_>>>()?;
        PolyMatrix::new(j.p, j.nvars, j.rows, j.cols, entries)
    }
}
