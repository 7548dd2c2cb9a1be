//! Heller shifts of the trivial module and cohomology classes as maps `Ω^n(k) → k`.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::cjt::{evaluate, PiPoint};
use crate::error::{Error, Result};
use crate::exactalg::{make_field, projective, Matrix, Subspace};
use crate::modrep::{factors_through_projective, matrix_to_json, omega_n, Convention, ModuleHom, ModuleRep};

pub fn binomial(n: i64, k: i64) -> u64 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `dim H^n(E, k)` for `E` of rank `r`.
pub fn cohomology_dim(r: usize, n: usize) -> usize {
    binomial((n + r) as i64 - 1, r as i64 - 1) as usize
}

/// `dim Ω^n(k) = p^r a_{r,|n|} + (-1)^n`, `dim Ω^0(k) = 1`.
pub fn omega_dim(p: usize, r: usize, n: i64) -> usize {
    let n = n.unsigned_abs() as i64;
    if n == 0 {
        return 1;
    }
    let r = r as i64;
    let a: i64 = (0..n).map(|j| (if j % 2 == 0 { 1 } else { -1 }) * binomial(n + r - 2 - j, r - 1) as i64).sum();
    let v = (p as i64).pow(r as u32) * a + if n % 2 == 0 { 1 } else { -1 };
    v as usize
}

pub fn trivial_module(p: u32, r: usize, convention: Convention) -> Result<ModuleRep> {
    if r == 0 {
        return Err(Error::InvalidParams("rank must be at least 1".into()));
    }
    Ok(ModuleRep::trivial(&make_field(p as u64, 1)?, r, 1, convention))
}

/// `Ω^n(k)` for `E` of rank `r` over GF(p).
pub fn omega_k(p: u32, r: usize, n: i64) -> Result<ModuleRep> {
    let k = trivial_module(p, r, Convention::Primitive)?;
    let m = omega_n(&k, n);
    assert_eq!(m.dim(), omega_dim(p as usize, r, n), "dim Ω^{n}(k) for p = {p}, r = {r}");
    Ok(m)
}

/// A cohomology class of degree `n` carried by a map `Ω^n(k) → k`.
#[derive(Clone, Debug)]
pub struct CocycleClass {
    pub degree: usize,
    pub carrier: ModuleHom,
    pub tag: Option<String>,
}

impl CocycleClass {
    pub fn new(degree: usize, carrier: ModuleHom, tag: Option<String>) -> Result<CocycleClass> {
        if carrier.target().dim() != 1 || carrier.target().gens().iter().any(|a| !a.is_zero()) {
            return Err(Error::DimensionMismatch("a cocycle must land in the trivial module".into()));
        }
        Ok(CocycleClass { degree, carrier, tag })
    }

    /// The carrier as a functional on `Ω^n(k)`.
    pub fn functional(&self) -> &[u32] {
        self.carrier.matrix().row(0)
    }

    pub fn source(&self) -> &Arc<ModuleRep> {
        self.carrier.source()
    }

    pub fn is_stably_zero(&self) -> bool {
        factors_through_projective(&self.carrier)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "source": {"p": self.source().p(), "r": self.source().r(), "omega": self.degree, "dim": self.source().dim()},
            "carrier": matrix_to_json(self.carrier.matrix()),
            "tag": self.tag,
        })
    }
}

fn classes_from_functionals(omega: &Arc<ModuleRep>, degree: usize, rows: &Matrix, tag: impl Fn(usize) -> Option<String>) -> Vec<CocycleClass> {
    let f = omega.field();
    let k = Arc::new(ModuleRep::trivial(f, omega.r(), 1, omega.convention()));
    (0..rows.rows())
        .map(|i| {
            let m = Matrix::from_data(f, 1, omega.dim(), rows.row(i).to_vec()).expect("shape");
            let carrier = ModuleHom::new(omega.clone(), k.clone(), m).expect("functionals vanishing on the radical intertwine");
            CocycleClass { degree, carrier, tag: tag(i) }
        })
        .collect()
}

/// Functionals on `m` vanishing on its radical, one per row.
fn top_functionals(m: &ModuleRep) -> Matrix {
    let rad = m.radical();
    let ann = rad.basis.kernel();
    ann.basis
}

/// A basis of `H^n(E, k)` as maps `Ω^n(k) → k`.
pub fn cohomology_basis(p: u32, r: usize, n: usize) -> Result<Vec<CocycleClass>> {
    if n == 0 {
        return Err(Error::InvalidParams("cohomology degree must be at least 1".into()));
    }
    let omega = Arc::new(omega_k(p, r, n as i64)?);
    let rows = top_functionals(&omega);
    let classes: Vec<CocycleClass> = classes_from_functionals(&omega, n, &rows, |i| Some(format!("degree-{n} basis {i}")))
        .into_iter()
        .filter(|c| !c.is_stably_zero())
        .collect();
    assert_eq!(classes.len(), cohomology_dim(r, n), "dim H^{n}(E,k) for p = {p}, r = {r}");
    Ok(classes)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Restriction {
    Zero,
    Nonzero,
}

/// Restricts `c` along a linear π-point and decides whether it vanishes,
/// i.e. whether the restricted map factors through a projective `K[t]/t^p`-module.
pub fn restrict_cocycle(c: &CocycleClass, q: &PiPoint) -> Result<Restriction> {
    if !q.tail().is_empty() {
        return Err(Error::Unsupported("cocycles are restricted along linear points".into()));
    }
    let src = c.source();
    let f = q.field();
    let t = evaluate(src, q)?;
    let conv = src.convention();
    let source = Arc::new(ModuleRep::new(f, vec![t], conv)?);
    let target = Arc::new(ModuleRep::trivial(f, 1, 1, conv));
    let h = ModuleHom::new(source, target, c.carrier.matrix().base_change(f)?)?;
    Ok(if factors_through_projective(&h) { Restriction::Zero } else { Restriction::Nonzero })
}

/// Functionals on `Ω` that are stably zero after restriction to `q`: a map
/// to `k` factors through a projective `K[t]/t^p`-module iff it lies in the
/// row space of `T^{p-1}`. Intersected with `span` (both over the base field
/// of `omega`, so `q` must be rational).
fn vanishing_at(omega: &ModuleRep, span: &Subspace, q: &[u32]) -> Subspace {
    let f = omega.field();
    let point = PiPoint::linear(f, q.to_vec()).expect("nonzero point");
    let t = evaluate(omega, &point).expect("rational point");
    let norm = t.pow(omega.p() - 1);
    intersect(span, &Subspace::span(&norm))
}

fn intersect(a: &Subspace, b: &Subspace) -> Subspace {
    let f = a.field();
    if a.dim() == 0 || b.dim() == 0 {
        return Subspace::zero(f, a.ambient_dim());
    }
    // x A = y B  ⇔  (x, -y) [A; B] = 0
    let stacked = Matrix::vstack(f, &[&a.basis, &b.basis.neg()]);
    let rel = stacked.transpose().kernel();
    let xs = rel.basis.select_cols(&(0..a.dim()).collect::<Vec<_>>());
    Subspace::span(&xs.mul(&a.basis))
}

/// The degree-`n` classes (as a subspace of functionals on `Ω^n(k)`) whose
/// restrictions vanish at every rational point of the given list.
fn vanishing_subspace(omega: &ModuleRep, points: &[Vec<u32>]) -> Subspace {
    let mut acc = Subspace::span(&top_functionals(omega));
    for q in points {
        acc = vanishing_at(omega, &acc, q);
    }
    acc
}

/// The coordinate class of degree `n` in variable `i`: a class whose
/// restriction vanishes at every rational point with `λ_i = 0` but not at
/// `e_i`. In degree 2 (and degree 1) this is `ζ_i` (resp. `η_i`) up to
/// classes vanishing at every point.
pub fn coordinate_class(p: u32, r: usize, n: usize, i: usize) -> Result<CocycleClass> {
    if i >= r {
        return Err(Error::InvalidParams(format!("coordinate {i} out of range for r = {r}")));
    }
    let omega = Arc::new(omega_k(p, r, n as i64)?);
    let f = omega.field().clone();
    let hyperplane: Vec<Vec<u32>> = projective::points(&f, r).into_iter().filter(|q| q[i] == 0).collect();
    let candidates = vanishing_subspace(&omega, &hyperplane);
    let mut axis = vec![0; r];
    axis[i] = 1;
    let at_axis = vanishing_at(&omega, &candidates, &axis);
    let row = (0..candidates.dim())
        .map(|j| candidates.basis.row(j))
        .find(|v| !at_axis.contains(v))
        .ok_or_else(|| Error::Unsupported(format!("no degree-{n} class supported on λ_{} ≠ 0", i + 1)))?;
    let m = Matrix::from_data(&f, 1, omega.dim(), row.to_vec())?;
    let tag = Some(format!("coordinate-{} degree-{n}", i + 1));
    classes_from_functionals(&omega, n, &m, |_| tag.clone()).pop().ok_or(Error::Inconsistent)
}

/// Nonzero degree-`n` classes whose restrictions vanish at every point of
/// `P^{r-1}(F_p)`.
pub fn everywhere_vanishing_classes(p: u32, r: usize, n: usize) -> Result<Vec<CocycleClass>> {
    let omega = Arc::new(omega_k(p, r, n as i64)?);
    let pts = projective::points(omega.field(), r);
    let sub = vanishing_subspace(&omega, &pts);
    Ok(classes_from_functionals(&omega, n, &sub.basis, |j| Some(format!("vanishing degree-{n} {j}")))
        .into_iter()
        .filter(|c| !c.is_stably_zero())
        .collect())
}
