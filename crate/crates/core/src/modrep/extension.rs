//! Extensions built from maps out of `Ω(N)`, and a randomized isomorphism test.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactalg::{projective, Elem, Matrix};
use crate::jordan::JordanType;

use super::{ModuleHom, ModuleRep, ProjectiveCover};

/// `0 → M → B → N → 0`.
#[derive(Clone, Debug)]
pub struct Extension {
    pub middle: ModuleRep,
    /// `M → B`.
    pub into: ModuleHom,
    /// `B → N`.
    pub onto: ModuleHom,
}

/// The extension of `N = cover.target()` by `M = f.target()` classified by
/// `f: Ω(N) → M`: the pushout `B = (M ⊕ P) / {(f(w), -ι(w))}` of the cover
/// sequence `0 → Ω(N) → P → N → 0` along `f`.
pub fn build_extension(cover: &ProjectiveCover, f: &ModuleHom) -> Result<Extension> {
    let omega = &cover.omega;
    if f.source().as_ref() != omega {
        return Err(Error::DimensionMismatch("map must start at the kernel of the given cover".into()));
    }
    ModuleHom::new(f.source().clone(), f.target().clone(), f.matrix().clone())?;
    let m = f.target();
    let n = cover.target();
    let fl = m.field();
    let free = cover.free_module();
    let (dm, dp) = (m.dim(), free.dim());
    let total = dm + dp;
    let incl = cover.inclusion();

    let mut s = Matrix::zeros(fl, omega.dim(), total);
    for k in 0..omega.dim() {
        let row = s.row_mut(k);
        for i in 0..dm {
            row[i] = f.matrix().get(i, k);
        }
        for i in 0..dp {
            row[dm + i] = fl.neg(incl.get(i, k));
        }
    }
    let rref = s.rref();
    assert_eq!(rref.pivots.len(), omega.dim(), "relations are independent");
    let mut is_pivot = vec![false; total];
    for &c in &rref.pivots {
        is_pivot[c] = true;
    }
    let quotient: Vec<usize> = (0..total).filter(|&c| !is_pivot[c]).collect();
    let rq = rref.rows.select_cols(&quotient);
    // class of the columns of `e` in the basis {e_q : q ∈ quotient}
    let classes = |e: &Matrix| -> Matrix { e.select_rows(&quotient).sub(&rq.transpose().mul(&e.select_rows(&rref.pivots))) };

    let gens: Vec<Matrix> = m
        .gens()
        .iter()
        .zip(free.gens())
        .map(|(a, t)| {
            let x = Matrix::direct_sum(fl, &[a, t]);
            classes(&x.select_cols(&quotient))
        })
        .collect();
    let middle = ModuleRep::from_parts(fl, quotient.len(), gens, m.convention());
    middle.validate()?;
    let middle = Arc::new(middle);

    let embed_m = Matrix::from_fn(fl, total, dm, |i, j| u32::from(i == j));
    let into = ModuleHom::new(m.clone(), middle.clone(), classes(&embed_m))?;
    let to_n = Matrix::hstack(fl, &[&Matrix::zeros(fl, n.dim(), dm), &cover.map]);
    let onto = ModuleHom::new(middle.clone(), Arc::new(n.clone()), to_n.select_cols(&quotient))?;
    Ok(Extension { middle: (*middle).clone(), into, onto })
}

pub const DEFAULT_ISO_DRAWS: usize = 200;

#[derive(Clone, Debug)]
pub struct IsoResult {
    pub isomorphic: bool,
    /// Set when no isomorphism was found but none was ruled out either.
    pub inconclusive: bool,
    pub witness: Option<Matrix>,
}

impl IsoResult {
    fn no() -> IsoResult {
        IsoResult { isomorphic: false, inconclusive: false, witness: None }
    }

    fn yes(x: Matrix) -> IsoResult {
        IsoResult { isomorphic: true, inconclusive: false, witness: Some(x) }
    }
}

/// Las Vegas isomorphism test: cheap invariants first (dimension, Jordan
/// types at the rational points), then a search of `Hom(M, N)` for an
/// invertible element: basis elements, `draws` seeded random combinations,
/// and every combination when the field has at most 9 elements and the hom
/// space has dimension at most 4.
pub fn is_isomorphic(m: &ModuleRep, n: &ModuleRep, seed: u64, draws: usize) -> Result<IsoResult> {
    if m.field() != n.field() {
        return Err(Error::FieldMismatch(m.field().describe(), n.field().describe()));
    }
    if m.r() != n.r() {
        return Err(Error::DimensionMismatch(format!("{} vs {} generators", m.r(), n.r())));
    }
    if m.dim() != n.dim() {
        return Ok(IsoResult::no());
    }
    if m.dim() == 0 {
        return Ok(IsoResult::yes(Matrix::zeros(m.field(), 0, 0)));
    }
    let f = m.field();
    let p = m.p();
    for pt in projective::points(f, m.r()) {
        let at = |x: &ModuleRep| {
            let mut acc = Matrix::zeros(f, x.dim(), x.dim());
            for (a, &c) in x.gens().iter().zip(&pt) {
                if c != 0 {
                    acc = acc.add(&a.scale(c));
                }
            }
            JordanType::from_nilpotent(&acc, p).expect("module generators are nilpotent")
        };
        if at(m) != at(n) {
            return Ok(IsoResult::no());
        }
    }
    let homs = m.hom_space(n)?;
    if homs.is_empty() {
        return Ok(IsoResult::no());
    }
    for h in &homs {
        if h.matrix().is_invertible() {
            return Ok(IsoResult::yes(h.matrix().clone()));
        }
    }
    let q = f.q();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..draws {
        let coeffs: Vec<Elem> = (0..homs.len()).map(|_| rng.gen_range(0..q)).collect();
        let h = ModuleHom::combination(&homs, &coeffs);
        if h.matrix().is_invertible() {
            return Ok(IsoResult::yes(h.matrix().clone()));
        }
    }
    if q <= 9 && homs.len() <= 4 {
        let count = (q as u64).pow(homs.len() as u32);
        for code in 0..count {
            let mut c = code;
            let coeffs: Vec<Elem> = (0..homs.len())
                .map(|_| {
                    let d = (c % q as u64) as Elem;
                    c /= q as u64;
                    d
                })
                .collect();
            let h = ModuleHom::combination(&homs, &coeffs);
            if h.matrix().is_invertible() {
                return Ok(IsoResult::yes(h.matrix().clone()));
            }
        }
        return Ok(IsoResult::no());
    }
    Ok(IsoResult { isomorphic: false, inconclusive: true, witness: None })
}
