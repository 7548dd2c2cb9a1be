//! Modules over `kE = k[t_1..t_r]/(t_1^p..t_r^p)`, given by commuting
//! nilpotent generator matrices.

mod extension;
mod free;
mod json;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{Elem, FieldSpec, Matrix, Subspace};

pub use extension::{build_extension, is_isomorphic, Extension, IsoResult, DEFAULT_ISO_DRAWS};
pub use free::{
    cover_generators, factors_through_projective, omega_n, projective_cover_omega, split_free, theta,
    ProjectiveCover, SplitFree,
};
pub use json::{
    element_from_json, element_to_json, field_from_json, hom_from_json, hom_to_json, matrix_from_json, matrix_to_json,
    module_from_json, module_to_json,
};

/// Modules larger than this are refused by [`ModuleRep::new`] unless a
/// larger cap is passed to [`ModuleRep::with_cap`].
pub const DEFAULT_DIM_CAP: usize = 4000;

/// How the generators behave under the coproduct and antipode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `t ↦ t⊗1 + 1⊗t`, `S(t) = -t`.
    Primitive,
    /// `t = g - 1` with `g` group-like: `t ↦ t⊗1 + 1⊗t + t⊗t`, `S(t) = (1+t)^{-1} - 1`.
    Group,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Primitive => "primitive",
            Convention::Group => "group",
        })
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct ModuleRep {
    field: FieldSpec,
    dim: usize,
    gens: Vec<Matrix>,
    convention: Convention,
}

impl ModuleRep {
    pub fn new(field: &FieldSpec, gens: Vec<Matrix>, convention: Convention) -> Result<ModuleRep> {
        ModuleRep::with_cap(field, gens, convention, DEFAULT_DIM_CAP)
    }

    pub fn with_cap(field: &FieldSpec, gens: Vec<Matrix>, convention: Convention, cap: usize) -> Result<ModuleRep> {
        if gens.is_empty() {
            return Err(Error::InvalidParams("a module needs at least one generator".into()));
        }
        let dim = gens[0].rows();
        if dim > cap {
            return Err(Error::InvalidParams(format!("dimension {dim} exceeds the cap {cap}")));
        }
        let m = ModuleRep { field: field.clone(), dim, gens, convention };
        m.validate()?;
        Ok(m)
    }

    /// For results of constructions that preserve the module axioms.
    pub(crate) fn from_parts(field: &FieldSpec, dim: usize, gens: Vec<Matrix>, convention: Convention) -> ModuleRep {
        debug_assert!(gens.iter().all(|a| a.rows() == dim && a.cols() == dim));
        ModuleRep { field: field.clone(), dim, gens, convention }
    }

    /// `k^n` with every generator acting by zero.
    pub fn trivial(field: &FieldSpec, r: usize, n: usize, convention: Convention) -> ModuleRep {
        ModuleRep::from_parts(field, n, vec![Matrix::zeros(field, n, n); r], convention)
    }

    /// The free module `kE^rank`, basis `t^a g_j` indexed `j * p^r + index(a)`
    /// (see [`monomial_index`]).
    pub fn free(field: &FieldSpec, r: usize, rank: usize, convention: Convention) -> ModuleRep {
        let p = field.p() as usize;
        let size = p.pow(r as u32);
        let n = rank * size;
        let gens = (0..r)
            .map(|i| {
                let mut a = Matrix::zeros(field, n, n);
                for g in 0..rank {
                    for idx in 0..size {
                        if let Some(to) = shift_monomial(p, r, idx, i) {
                            a.set(g * size + to, g * size + idx, 1);
                        }
                    }
                }
                a
            })
            .collect();
        ModuleRep::from_parts(field, n, gens, convention)
    }

    /// Checks shapes, pairwise commutation and `A_i^p = 0`, reporting the
    /// first failure (generators numbered from 1).
    pub fn validate(&self) -> Result<()> {
        for (i, a) in self.gens.iter().enumerate() {
            if a.rows() != self.dim || a.cols() != self.dim {
                return Err(Error::DimensionMismatch(format!(
                    "generator {} is {}x{}, expected {}x{}",
                    i + 1,
                    a.rows(),
                    a.cols(),
                    self.dim,
                    self.dim
                )));
            }
            if a.field() != &self.field {
                return Err(Error::FieldMismatch(a.field().describe(), self.field.describe()));
            }
        }
        for i in 0..self.gens.len() {
            for j in i + 1..self.gens.len() {
                if self.gens[i].mul(&self.gens[j]) != self.gens[j].mul(&self.gens[i]) {
                    return Err(Error::NotCommuting(i + 1, j + 1));
                }
            }
        }
        let p = self.field.p() as usize;
        for (i, a) in self.gens.iter().enumerate() {
            if !nilpotent_of_order(a, p) {
                return Err(Error::NotNilpotent(i + 1));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn p(&self) -> usize {
        self.field.p() as usize
    }

    pub fn r(&self) -> usize {
        self.gens.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gens(&self) -> &[Matrix] {
        &self.gens
    }

    pub fn gen(&self, i: usize) -> &Matrix {
        &self.gens[i]
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn with_convention(&self, convention: Convention) -> ModuleRep {
        ModuleRep { convention, ..self.clone() }
    }

    fn check_compatible(&self, other: &ModuleRep) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.describe(), other.field.describe()));
        }
        if self.convention != other.convention {
            return Err(Error::ConventionMismatch);
        }
        if self.r() != other.r() {
            return Err(Error::DimensionMismatch(format!("{} vs {} generators", self.r(), other.r())));
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &ModuleRep) -> Result<ModuleRep> {
        self.check_compatible(other)?;
        let gens = self
            .gens
            .iter()
            .zip(&other.gens)
            .map(|(a, b)| Matrix::direct_sum(&self.field, &[a, b]))
            .collect();
        Ok(ModuleRep::from_parts(&self.field, self.dim + other.dim, gens, self.convention))
    }

    pub fn direct_sum_all(parts: &[&ModuleRep]) -> Result<ModuleRep> {
        let (first, rest) = parts.split_first().ok_or_else(|| Error::InvalidParams("empty direct sum".into()))?;
        let mut acc = (*first).clone();
        for m in rest {
            acc = acc.direct_sum(m)?;
        }
        Ok(acc)
    }

    pub fn tensor(&self, other: &ModuleRep) -> Result<ModuleRep> {
        self.check_compatible(other)?;
        let f = &self.field;
        let (ia, ib) = (Matrix::identity(f, self.dim), Matrix::identity(f, other.dim));
        let gens = self
            .gens
            .iter()
            .zip(&other.gens)
            .map(|(a, b)| {
                let sum = a.kron(&ib).add(&ia.kron(b));
                match self.convention {
                    Convention::Primitive => sum,
                    Convention::Group => sum.add(&a.kron(b)),
                }
            })
            .collect();
        Ok(ModuleRep::from_parts(f, self.dim * other.dim, gens, self.convention))
    }

    pub fn dual(&self) -> ModuleRep {
        let f = &self.field;
        let gens = self
            .gens
            .iter()
            .map(|a| match self.convention {
                Convention::Primitive => a.transpose().neg(),
                Convention::Group => {
                    // (I + A)^{-1} - I = Σ_{k=1}^{p-1} (-A)^k
                    let minus = a.neg();
                    let mut term = minus.clone();
                    let mut acc = minus.clone();
                    for _ in 2..self.p() {
                        term = term.mul(&minus);
                        acc = acc.add(&term);
                    }
                    acc.transpose()
                }
            })
            .collect();
        ModuleRep::from_parts(f, self.dim, gens, self.convention)
    }

    /// `Hom_k(self, other) = self^# ⊗ other`.
    pub fn hom(&self, other: &ModuleRep) -> Result<ModuleRep> {
        self.dual().tensor(other)
    }

    /// Basis of the module homomorphisms `self → other`, i.e. matrices `X`
    /// with `X A_i = B_i X`, as the kernel of the stacked linear system in
    /// the row-major entries of `X`.
    pub fn hom_space(&self, other: &ModuleRep) -> Result<Vec<ModuleHom>> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.describe(), other.field.describe()));
        }
        if self.r() != other.r() {
            return Err(Error::DimensionMismatch(format!("{} vs {} generators", self.r(), other.r())));
        }
        let f = &self.field;
        let (m, n) = (self.dim, other.dim);
        let unknowns = n * m;
        let eqs = self.r() * n * m;
        let mut sys = Matrix::zeros(f, eqs, unknowns);
        for (gi, (a, b)) in self.gens.iter().zip(&other.gens).enumerate() {
            for row in 0..n {
                for col in 0..m {
                    let eq = sys.row_mut(gi * n * m + row * m + col);
                    // (X A)[row][col] = Σ_k X[row][k] A[k][col]
                    for k in 0..m {
                        let v = a.get(k, col);
                        if v != 0 {
                            eq[row * m + k] = f.add(eq[row * m + k], v);
                        }
                    }
                    // (B X)[row][col] = Σ_k B[row][k] X[k][col]
                    for k in 0..n {
                        let v = b.get(row, k);
                        if v != 0 {
                            eq[k * m + col] = f.sub(eq[k * m + col], v);
                        }
                    }
                }
            }
        }
        let kernel = sys.kernel();
        let (src, tgt) = (Arc::new(self.clone()), Arc::new(other.clone()));
        Ok((0..kernel.dim())
            .map(|i| {
                let x = Matrix::from_data(f, n, m, kernel.basis.row(i).to_vec()).expect("shape");
                ModuleHom::from_parts(src.clone(), tgt.clone(), x)
            })
            .collect())
    }

    /// `(rad M, soc M) = (Σ im A_i, ∩ ker A_i)`.
    pub fn radical_socle(&self) -> (Subspace, Subspace) {
        (self.radical(), self.socle())
    }

    pub fn radical(&self) -> Subspace {
        let cols: Vec<Matrix> = self.gens.iter().map(|a| a.transpose()).collect();
        let refs: Vec<&Matrix> = cols.iter().collect();
        Subspace::span(&Matrix::vstack(&self.field, &refs))
    }

    pub fn socle(&self) -> Subspace {
        let refs: Vec<&Matrix> = self.gens.iter().collect();
        Matrix::vstack(&self.field, &refs).kernel()
    }

    /// Submodule spanned by the rows of `basis` (assumed invariant), with the
    /// induced action in the coordinates of the returned subspace.
    pub fn submodule(&self, sub: &Subspace) -> ModuleRep {
        let gens = self.gens.iter().map(|a| sub.restrict(a)).collect();
        ModuleRep::from_parts(&self.field, sub.dim(), gens, self.convention)
    }

    /// Entrywise image in an extension field (only from a prime field).
    pub fn base_change(&self, target: &FieldSpec) -> Result<ModuleRep> {
        if &self.field == target {
            return Ok(self.clone());
        }
        let gens = self.gens.iter().map(|a| a.base_change(target)).collect::<Result<Vec<_>>>()?;
        Ok(ModuleRep::from_parts(target, self.dim, gens, self.convention))
    }

    /// `A^a = Π A_i^{a_i}`.
    pub fn monomial_action(&self, exps: &[u32]) -> Matrix {
        let mut acc = Matrix::identity(&self.field, self.dim);
        for (a, &k) in self.gens.iter().zip(exps) {
            for _ in 0..k {
                acc = a.mul(&acc);
            }
        }
        acc
    }

    /// `dim M / rad M`: the minimal number of generators.
    pub fn top_dim(&self) -> usize {
        self.dim - self.radical().dim()
    }
}

impl fmt::Debug for ModuleRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ModuleRep(dim {}, r {}, {} over {})",
            self.dim,
            self.r(),
            self.convention,
            self.field.describe()
        )
    }
}

fn nilpotent_of_order(a: &Matrix, p: usize) -> bool {
    let mut basis = a.row_echelon();
    for _ in 1..p {
        if basis.rows() == 0 {
            return true;
        }
        basis = basis.mul(a).row_echelon();
    }
    basis.rows() == 0
}

/// Index of the monomial `t^a` in the basis of `kE`: `a_1` is the most
/// significant base-`p` digit.
pub fn monomial_index(p: usize, exps: &[u32]) -> usize {
    exps.iter().fold(0, |acc, &a| acc * p + a as usize)
}

pub fn monomial_exponents(p: usize, r: usize, mut idx: usize) -> Vec<u32> {
    let mut exps = vec![0; r];
    for i in (0..r).rev() {
        exps[i] = (idx % p) as u32;
        idx /= p;
    }
    exps
}

/// Index of `t_i · t^a`, or `None` when it vanishes.
pub fn shift_monomial(p: usize, r: usize, idx: usize, i: usize) -> Option<usize> {
    let place = p.pow((r - 1 - i) as u32);
    let digit = (idx / place) % p;
    (digit + 1 < p).then_some(idx + place)
}

/// Index of `t^a / t_i`, or `None` when `a_i = 0`.
pub fn unshift_monomial(p: usize, r: usize, idx: usize, i: usize) -> Option<usize> {
    let place = p.pow((r - 1 - i) as u32);
    let digit = (idx / place) % p;
    (digit > 0).then(|| idx - place)
}

/// A homomorphism of modules, `matrix` being `target.dim x source.dim`.
#[derive(Clone, Debug)]
pub struct ModuleHom {
    source: Arc<ModuleRep>,
    target: Arc<ModuleRep>,
    matrix: Matrix,
}

impl ModuleHom {
    pub fn new(source: Arc<ModuleRep>, target: Arc<ModuleRep>, matrix: Matrix) -> Result<ModuleHom> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::DimensionMismatch(format!(
                "map matrix {}x{} between modules of dimension {} and {}",
                matrix.rows(),
                matrix.cols(),
                source.dim(),
                target.dim()
            )));
        }
        if source.r() != target.r() || source.field() != target.field() || matrix.field() != source.field() {
            return Err(Error::Malformed("map between modules over different algebras".into()));
        }
        let ok = source.gens().iter().zip(target.gens()).all(|(a, b)| matrix.mul(a) == b.mul(&matrix));
        if !ok {
            return Err(Error::NotIntertwiner);
        }
        Ok(ModuleHom { source, target, matrix })
    }

    pub(crate) fn from_parts(source: Arc<ModuleRep>, target: Arc<ModuleRep>, matrix: Matrix) -> ModuleHom {
        ModuleHom { source, target, matrix }
    }

    pub fn zero(source: Arc<ModuleRep>, target: Arc<ModuleRep>) -> ModuleHom {
        let matrix = Matrix::zeros(source.field(), target.dim(), source.dim());
        ModuleHom { source, target, matrix }
    }

    pub fn source(&self) -> &Arc<ModuleRep> {
        &self.source
    }

    pub fn target(&self) -> &Arc<ModuleRep> {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// `self ∘ first`.
    pub fn compose_after(&self, first: &ModuleHom) -> ModuleHom {
        ModuleHom::from_parts(first.source.clone(), self.target.clone(), self.matrix.mul(&first.matrix))
    }

    /// Linear combination of maps with the same source and target.
    pub fn combination(maps: &[ModuleHom], coeffs: &[Elem]) -> ModuleHom {
        let first = &maps[0];
        let f = first.matrix.field();
        let mut acc = Matrix::zeros(f, first.matrix.rows(), first.matrix.cols());
        for (m, &c) in maps.iter().zip(coeffs) {
            if c != 0 {
                acc = acc.add(&m.matrix.scale(c));
            }
        }
        ModuleHom::from_parts(first.source.clone(), first.target.clone(), acc)
    }
}


#[cfg(test)]
mod proptests {
    use super::*;
    use crate::zoo::random_module;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn random_modules_are_modules(seed in any::<u64>(), dim in 1usize..9) {
            let m = random_module(3, 2, dim, seed).unwrap();
            prop_assert!(m.validate().is_ok());
            prop_assert_eq!(m.dual().dual(), m.clone());
            let (rad, soc) = m.radical_socle();
            prop_assert!(rad.dim() < m.dim() && soc.dim() > 0);
        }

        #[test]
        fn hom_dimension_matches_tensor_fixed_points(seed in any::<u64>()) {
            // Hom_E(M, N) = invariants of M^# ⊗ N = common kernel of its generators
            let m = random_module(3, 2, 3, seed).unwrap();
            let n = random_module(3, 2, 4, seed ^ 1).unwrap();
            let h = m.hom(&n).unwrap();
            let stacked = Matrix::vstack(h.field(), &h.gens().iter().collect::<Vec<_>>());
            prop_assert_eq!(m.hom_space(&n).unwrap().len(), stacked.kernel().dim());
        }

        #[test]
        fn free_summands_split_off(seed in any::<u64>(), t in 0usize..3) {
            let m = random_module(3, 2, 5, seed).unwrap();
            let free = ModuleRep::free(m.field(), 2, t, Convention::Primitive);
            let s = crate::modrep::split_free(&m.direct_sum(&free).unwrap());
            let base = crate::modrep::split_free(&m);
            prop_assert_eq!(s.t, base.t + t);
            prop_assert_eq!(s.core.dim(), base.core.dim());
        }
    }
}
