//! Free summands, projective covers and Heller shifts.
//!
//! `kE` is a local Frobenius algebra: with the monomial basis `t^a` and the
//! form "coefficient of `t^top` in `xy`" (`top = (p-1,..,p-1)`), every linear
//! functional `f` on a module `M` lifts to the module map
//! `m ↦ Σ_a f(t^{top-a} m) t^a` into `kE`. Splitting off free summands and
//! deciding whether a map factors through a projective both use this lift.

use std::collections::HashMap;
use std::sync::Arc;

use crate::exactalg::{solve_linear, Matrix, Subspace};
use crate::par;

use super::{monomial_exponents, unshift_monomial, ModuleHom, ModuleRep};

/// `θ_M = Π_i A_i^{p-1}`, the action of the socle generator of `kE`.
pub fn theta(m: &ModuleRep) -> Matrix {
    let mut acc = Matrix::identity(m.field(), m.dim());
    for a in m.gens() {
        for _ in 1..m.p() {
            if acc.is_zero() {
                return acc;
            }
            acc = a.mul(&acc);
        }
    }
    acc
}

#[derive(Clone, Debug)]
pub struct SplitFree {
    /// Rank of the free summand.
    pub t: usize,
    /// Complement of the free summand, in the coordinates of `basis`.
    pub core: ModuleRep,
    /// Basis of the core inside the original module.
    pub basis: Subspace,
}

/// Writes `m = kE^t ⊕ core` with `core` free of projective summands.
///
/// `t = rank θ_M`. Vectors `v_j` with `θ v_j` independent generate a free
/// submodule; functionals `f_j` dual to the `θ v_j` lift to a retraction onto
/// it, and the core is the kernel of the retraction:
/// `{m : f_j(t^b m) = 0 for all j, b}`.
pub fn split_free(m: &ModuleRep) -> SplitFree {
    let f = m.field();
    let n = m.dim();
    let th = theta(m);
    let pivots = th.rref().pivots;
    let t = pivots.len();
    if t == 0 {
        let basis = Subspace::span(&Matrix::identity(f, n));
        return SplitFree { t, core: m.clone(), basis };
    }
    let w = th.select_cols(&pivots);
    let duals = solve_linear(&w.transpose(), &Matrix::identity(f, t))
        .expect("columns of θ at pivot positions are independent")
        .particular
        .transpose();
    let p = m.p();
    let r = m.r();
    let size = p.pow(r as u32);
    let mut rows = Vec::with_capacity(t * size);
    for j in 0..t {
        let mut by_monomial: Vec<Vec<u32>> = Vec::with_capacity(size);
        by_monomial.push(duals.row(j).to_vec());
        for idx in 1..size {
            let (i, prev) = first_factor(p, r, idx);
            let v = m.gen(i).vec_mul(&by_monomial[prev]);
            by_monomial.push(v);
        }
        rows.extend(by_monomial);
    }
    let data: Vec<u32> = rows.into_iter().flatten().collect();
    let phi = Matrix::from_data(f, t * size, n, data).expect("shape");
    let basis = phi.kernel();
    assert_eq!(basis.dim() + t * size, n, "free summand accounting");
    let core = m.submodule(&basis);
    SplitFree { t, core, basis }
}

/// Splits `t^a` as `t_i · t^{a - e_i}` with `i` the first variable of positive exponent.
fn first_factor(p: usize, r: usize, idx: usize) -> (usize, usize) {
    let exps = monomial_exponents(p, r, idx);
    let i = exps.iter().position(|&e| e > 0).expect("nonconstant monomial");
    (i, unshift_monomial(p, r, idx, i).expect("positive exponent"))
}

/// Positions of the standard basis vectors spanning a complement of the
/// radical, in increasing order. Their images generate the module.
pub fn cover_generators(m: &ModuleRep) -> Vec<usize> {
    let rad = m.radical();
    let mut is_pivot = vec![false; m.dim()];
    for &c in &rad.positions {
        is_pivot[c] = true;
    }
    (0..m.dim()).filter(|&c| !is_pivot[c]).collect()
}

/// A minimal projective cover `kE^d → M` and its kernel `Ω(M)`.
#[derive(Clone, Debug)]
pub struct ProjectiveCover {
    pub rank: usize,
    /// Basis positions of `M` hit by the free generators.
    pub generators: Vec<usize>,
    /// `dim M x d p^r` matrix of the cover map, free basis as in [`ModuleRep::free`].
    pub map: Matrix,
    /// Kernel of the cover map in the coordinates of the free module.
    pub kernel: Subspace,
    pub omega: ModuleRep,
    target: ModuleRep,
}

impl ProjectiveCover {
    pub fn free_module(&self) -> ModuleRep {
        ModuleRep::free(self.target.field(), self.target.r(), self.rank, self.target.convention())
    }

    pub fn target(&self) -> &ModuleRep {
        &self.target
    }

    pub fn cover_hom(&self) -> ModuleHom {
        ModuleHom::from_parts(Arc::new(self.free_module()), Arc::new(self.target.clone()), self.map.clone())
    }

    /// Inclusion `Ω(M) → kE^d`.
    pub fn inclusion(&self) -> Matrix {
        self.kernel.inclusion()
    }
}

/// Projective cover sending the `j`-th free generator to the `j`-th entry
/// of [`cover_generators`], and its kernel with the induced action.
pub fn projective_cover_omega(m: &ModuleRep) -> ProjectiveCover {
    let f = m.field();
    let (p, r, n) = (m.p(), m.r(), m.dim());
    let generators = cover_generators(m);
    let d = generators.len();
    let size = p.pow(r as u32);
    // blocks[idx] = A^a restricted to the generator columns (n x d)
    let mut blocks: Vec<Matrix> = Vec::with_capacity(size);
    blocks.push(Matrix::from_fn(f, n, d, |i, j| u32::from(i == generators[j])));
    for idx in 1..size {
        let (i, prev) = first_factor(p, r, idx);
        let b = m.gen(i).mul(&blocks[prev]);
        blocks.push(b);
    }
    let total = d * size;
    let mut map = Matrix::zeros(f, n, total);
    for (idx, b) in blocks.iter().enumerate() {
        for row in 0..n {
            for g in 0..d {
                let v = b.get(row, g);
                if v != 0 {
                    map.set(row, g * size + idx, v);
                }
            }
        }
    }
    drop(blocks);
    let kernel = map.kernel();
    let k = kernel.dim();
    // minimality: no kernel vector has a constant term, i.e. θ acts by zero on Ω
    for g in 0..d {
        assert!(
            (0..k).all(|row| kernel.basis.get(row, g * size) == 0),
            "projective cover is not minimal"
        );
    }
    let gens: Vec<Matrix> = (0..r)
        .map(|i| {
            let mut y = Matrix::zeros(f, k, k);
            let rows = par::map_range(k, |j| {
                let pos = kernel.positions[j];
                let (g, idx) = (pos / size, pos % size);
                match unshift_monomial(p, r, idx, i) {
                    None => Vec::new(),
                    Some(prev) => (0..k).map(|col| kernel.basis.get(col, g * size + prev)).collect(),
                }
            });
            for (j, row) in rows.into_iter().enumerate() {
                if !row.is_empty() {
                    y.row_mut(j).copy_from_slice(&row);
                }
            }
            y
        })
        .collect();
    let omega = ModuleRep::from_parts(f, k, gens, m.convention());
    ProjectiveCover { rank: d, generators, map, kernel, omega, target: m.clone() }
}

/// `Ω^n(M)`: iterated kernels of minimal covers for `n > 0`, the
/// projective-free core for `n = 0`, and `(Ω^{-n}(M^#))^#` for `n < 0`.
pub fn omega_n(m: &ModuleRep, n: i64) -> ModuleRep {
    match n {
        0 => split_free(m).core,
        n if n > 0 => {
            let mut cur = m.clone();
            for _ in 0..n {
                cur = projective_cover_omega(&cur).omega;
            }
            cur
        }
        n => omega_n(&m.dual(), -n).dual(),
    }
}

/// Whether `h: M → N` factors through a projective module, equivalently
/// through the projective cover `c: kE^d → N`.
///
/// Every map `M → kE^d` has the form `m ↦ Σ_a (f_j(t^{top-a} m))_j t^a` for
/// functionals `f_1..f_d`, so `c ∘ g = Σ_j Σ_a (A_N^a n_j)(f_j^T A_M^{top-a})`
/// with `n_j` the images of the free generators. Factoring is solvability of
/// this linear system in the `f_j`.
pub fn factors_through_projective(h: &ModuleHom) -> bool {
    if h.is_zero() {
        return true;
    }
    let (src, tgt) = (h.source(), h.target());
    let fl = src.field();
    let (p, r) = (src.p(), src.r());
    let (m, n) = (src.dim(), tgt.dim());
    let gens = cover_generators(tgt);
    let d = gens.len();
    let size = p.pow(r as u32);
    let top = size - 1;

    // images A_N^a n_j, kept only where nonzero (a downward closed set)
    let mut w: Vec<Option<Matrix>> = vec![None; size];
    w[0] = Some(Matrix::from_fn(fl, n, d, |i, j| u32::from(i == gens[j])));
    for idx in 1..size {
        let (i, prev) = first_factor(p, r, idx);
        if let Some(b) = &w[prev] {
            let next = tgt.gen(i).mul(b);
            if !next.is_zero() {
                w[idx] = Some(next);
            }
        }
    }

    let mut powers: HashMap<usize, Matrix> = HashMap::new();
    let mut sys = Matrix::zeros(fl, n * m, d * m);
    for (idx, block) in w.iter().enumerate() {
        let Some(block) = block else { continue };
        let q = source_power(src, top - idx, &mut powers);
        if q.is_zero() {
            continue;
        }
        for x in 0..n {
            for j in 0..d {
                let c = block.get(x, j);
                if c == 0 {
                    continue;
                }
                for z in 0..m {
                    let qrow = q.row(z);
                    for (y, &qv) in qrow.iter().enumerate() {
                        if qv != 0 {
                            let row = sys.row_mut(x * m + y);
                            row[j * m + z] = fl.add(row[j * m + z], fl.mul(c, qv));
                        }
                    }
                }
            }
        }
    }
    let rhs = Matrix::from_data(fl, n * m, 1, h.matrix().data().to_vec()).expect("shape");
    solve_linear(&sys, &rhs).is_ok()
}

/// `A_M^c` for the monomial of index `idx`, memoized.
fn source_power(m: &ModuleRep, idx: usize, memo: &mut HashMap<usize, Matrix>) -> Matrix {
    if let Some(a) = memo.get(&idx) {
        return a.clone();
    }
    let a = if idx == 0 {
        Matrix::identity(m.field(), m.dim())
    } else {
        let (i, prev) = first_factor(m.p(), m.r(), idx);
        let b = source_power(m, prev, memo);
        m.gen(i).mul(&b)
    };
    memo.insert(idx, a.clone());
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{make_field, FieldSpec};
    use crate::jordan::JordanType;
    use crate::modrep::Convention;

    fn k(f: &FieldSpec, r: usize) -> ModuleRep {
        ModuleRep::trivial(f, r, 1, Convention::Primitive)
    }

    /// Oracle for factoring: solve `c ∘ g = h` over all of `Hom(M, kE^d)`.
    fn factors_by_hom_space(h: &ModuleHom) -> bool {
        let cover = projective_cover_omega(h.target());
        let free = cover.free_module();
        let homs = h.source().hom_space(&free).unwrap();
        let f = h.source().field();
        let cols: Vec<Matrix> = homs
            .iter()
            .map(|g| {
                let comp = cover.map.mul(g.matrix());
                Matrix::from_data(f, comp.rows() * comp.cols(), 1, comp.data().to_vec()).unwrap()
            })
            .collect();
        let target = Matrix::from_data(f, h.matrix().rows() * h.matrix().cols(), 1, h.matrix().data().to_vec()).unwrap();
        if cols.is_empty() {
            return h.is_zero();
        }
        let refs: Vec<&Matrix> = cols.iter().collect();
        solve_linear(&Matrix::hstack(f, &refs), &target).is_ok()
    }

    #[test]
    fn split_free_examples() {
        let f = make_field(3, 1).unwrap();
        let free2 = ModuleRep::free(&f, 2, 2, Convention::Primitive);
        let s = split_free(&free2);
        assert_eq!((s.t, s.core.dim()), (2, 0));
        let sum = k(&f, 2).direct_sum(&ModuleRep::free(&f, 2, 1, Convention::Primitive)).unwrap();
        let s = split_free(&sum);
        assert_eq!((s.t, s.core.dim()), (1, 1));
        assert!(s.core.gens().iter().all(|a| a.is_zero()));
    }

    #[test]
    fn split_free_of_restricted_omega() {
        let f = make_field(5, 1).unwrap();
        let om = omega_n(&k(&f, 2), 1);
        assert_eq!(om.dim(), 24);
        let restricted = ModuleRep::new(&f, vec![om.gen(0).clone()], Convention::Primitive).unwrap();
        let s = split_free(&restricted);
        assert_eq!((s.t, s.core.dim()), (4, 4));
        assert_eq!(JordanType::from_nilpotent(s.core.gen(0), 5).unwrap(), JordanType::blocks(5, 4, 1));
        assert!(theta(&s.core).is_zero());
    }

    #[test]
    fn omega_dimensions() {
        let f = make_field(5, 1).unwrap();
        let k2 = k(&f, 2);
        assert_eq!(omega_n(&k2, 1).dim(), 24);
        assert_eq!(omega_n(&k2, 2).dim(), 26);
        assert_eq!(omega_n(&k2, -2).dim(), 26);
        assert_eq!(omega_n(&k2, 0).dim(), 1);
        let f3 = make_field(3, 1).unwrap();
        let om = omega_n(&k(&f3, 3), 2);
        assert_eq!(om.dim(), 55);
        assert!(om.validate().is_ok());
        assert!(projective_cover_omega(&ModuleRep::free(&f3, 2, 1, Convention::Primitive)).omega.dim() == 0);
    }

    #[test]
    fn omega_is_a_module_in_both_conventions() {
        let f = make_field(3, 1).unwrap();
        for conv in [Convention::Primitive, Convention::Group] {
            let kk = ModuleRep::trivial(&f, 2, 1, conv);
            for n in [-2, -1, 1, 2] {
                let om = omega_n(&kk, n);
                assert!(om.validate().is_ok(), "n = {n}");
                assert_eq!(split_free(&om).t, 0);
            }
        }
    }

    #[test]
    fn factoring_examples() {
        let f = make_field(3, 1).unwrap();
        let kk = Arc::new(k(&f, 2));
        let id = ModuleHom::new(kk.clone(), kk.clone(), Matrix::identity(&f, 1)).unwrap();
        assert!(!factors_through_projective(&id));
        let free = Arc::new(ModuleRep::free(&f, 2, 1, Convention::Primitive));
        for h in free.hom_space(&kk).unwrap() {
            assert!(factors_through_projective(&h));
        }
        let om = Arc::new(omega_n(&kk, 1));
        let cocycles = om.hom_space(&kk).unwrap();
        assert_eq!(cocycles.len(), 2);
        for h in &cocycles {
            assert!(!factors_through_projective(h));
        }
    }

    #[test]
    fn factoring_agrees_with_direct_solve() {
        let f = make_field(3, 1).unwrap();
        let kk = k(&f, 2);
        let om1 = Arc::new(omega_n(&kk, 1));
        let om2 = Arc::new(omega_n(&kk, 2));
        let jb = Arc::new(
            ModuleRep::new(&f, vec![Matrix::jordan_block(&f, 2), Matrix::zeros(&f, 2, 2)], Convention::Primitive)
                .unwrap(),
        );
        for (src, tgt) in [(&om2, &om1), (&om1, &jb), (&jb, &om1), (&om1, &om1)] {
            for h in src.hom_space(tgt).unwrap() {
                assert_eq!(factors_through_projective(&h), factors_by_hom_space(&h));
            }
        }
    }
}
