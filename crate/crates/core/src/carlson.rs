//! Kernels of maps out of sums of Heller shifts, and endotriviality.

use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::cjt::{evaluate, sweep_types, PiPoint};
use crate::error::{Error, Result};
use crate::exactalg::{make_field, projective, Matrix, Subspace};
use crate::jordan::JordanType;
use crate::modrep::{split_free, ModuleHom, ModuleRep};
use crate::par;
use crate::syzygy::CocycleClass;

/// Kernel of `h` as a submodule of its source.
pub fn kernel_module(h: &ModuleHom) -> ModuleRep {
    let ker: Subspace = h.matrix().kernel();
    h.source().submodule(&ker)
}

/// `L_{ξ_1..ξ_s} = Ker(⊕_i Ω^{n_i}(k) → k)`, `(a_i) ↦ Σ ξ_i(a_i)`.
pub fn l_xi(classes: &[CocycleClass]) -> Result<ModuleRep> {
    let first = classes.first().ok_or_else(|| Error::InvalidParams("no classes given".into()))?;
    let f = first.source().field().clone();
    let sources: Vec<&ModuleRep> = classes.iter().map(|c| c.source().as_ref()).collect();
    let sum = Arc::new(ModuleRep::direct_sum_all(&sources)?);
    let rows: Vec<&Matrix> = classes.iter().map(|c| c.carrier.matrix()).collect();
    let phi = Matrix::hstack(&f, &rows);
    if phi.is_zero() {
        return Err(Error::InvalidParams("every class is zero, so the map to k is not onto".into()));
    }
    let k = first.carrier.target().clone();
    let h = ModuleHom::new(sum.clone(), k, phi)?;
    let l = kernel_module(&h);
    assert_eq!(l.dim() + 1, sum.dim());
    Ok(l)
}

#[derive(Clone, Debug, Serialize)]
pub struct PointCheck {
    pub point: String,
    /// Jordan type of the cokernel of the restricted map.
    pub cokernel_type: String,
    pub holds: bool,
    /// Stable Jordan type of the kernel at this point.
    pub kernel_stable_type: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct HypothesisReport {
    pub points: Vec<PointCheck>,
    pub failing: Vec<String>,
    pub hypothesis_holds: bool,
    pub predicted_stable_type: Option<String>,
    /// Whether the observed stable types match the prediction, when there is one.
    pub prediction_holds: Option<bool>,
}

/// Jordan type of `t` acting on `V / W` for a `t`-stable subspace `W`
/// spanned by the columns of `w`.
fn quotient_type(t: &Matrix, w: &Matrix, p: usize) -> JordanType {
    let f = t.field();
    let base = w.rank();
    let n = t.rows();
    let mut ranks = vec![n - base];
    let mut power = Matrix::identity(f, n);
    for _ in 1..=p {
        power = t.mul(&power);
        ranks.push(Matrix::hstack(f, &[&power, w]).rank() - base);
    }
    JordanType::from_ranks(p, &ranks)
}

/// Kernel of the map `⊕_j Ω^{m_j}(k) → ⊕_i Ω^{n_i}(k)` with `(i, j)` entry
/// `grid[i][j]`, and a pointwise check that the restriction to each point of
/// `P^{r-1}(F_p)` has projective cokernel.
///
/// When that holds everywhere, the stable type of the kernel is predicted
/// to be `(m-n)[1]` if every degree is even, and `(m-n)[p-1] + n[p-2]` if
/// the source degrees are odd, the target degrees even and `p > 2`.
pub fn kernel_of_hom_matrix(
    grid: &[Vec<ModuleHom>],
    source_degrees: &[i64],
    target_degrees: &[i64],
) -> Result<(ModuleRep, HypothesisReport)> {
    let n = grid.len();
    if n == 0 || n != target_degrees.len() {
        return Err(Error::DimensionMismatch("one grid row per target is required".into()));
    }
    let m = grid[0].len();
    if grid.iter().any(|row| row.len() != m) || m != source_degrees.len() {
        return Err(Error::DimensionMismatch("one grid column per source is required".into()));
    }
    if m <= n {
        return Err(Error::InvalidParams(format!("need more sources than targets (m = {m}, n = {n})")));
    }
    let sources: Vec<Arc<ModuleRep>> = grid[0].iter().map(|h| h.source().clone()).collect();
    let targets: Vec<Arc<ModuleRep>> = grid.iter().map(|row| row[0].target().clone()).collect();
    for (i, row) in grid.iter().enumerate() {
        for (j, h) in row.iter().enumerate() {
            if h.source().as_ref() != sources[j].as_ref() || h.target().as_ref() != targets[i].as_ref() {
                return Err(Error::DimensionMismatch(format!("entry ({i}, {j}) does not match its row and column")));
            }
        }
    }
    let f = sources[0].field().clone();
    let src_refs: Vec<&ModuleRep> = sources.iter().map(|s| s.as_ref()).collect();
    let tgt_refs: Vec<&ModuleRep> = targets.iter().map(|s| s.as_ref()).collect();
    let src = Arc::new(ModuleRep::direct_sum_all(&src_refs)?);
    let tgt = Arc::new(ModuleRep::direct_sum_all(&tgt_refs)?);
    let rows: Vec<Matrix> = grid
        .iter()
        .map(|row| Matrix::hstack(&f, &row.iter().map(|h| h.matrix()).collect::<Vec<_>>()))
        .collect();
    let phi = Matrix::vstack(&f, &rows.iter().collect::<Vec<_>>());
    let h = ModuleHom::new(src, tgt.clone(), phi.clone())?;
    let l = kernel_module(&h);

    let p = l.p();
    let all_even = source_degrees.iter().chain(target_degrees).all(|d| d % 2 == 0);
    let odd_to_even = p > 2 && source_degrees.iter().all(|d| d % 2 != 0) && target_degrees.iter().all(|d| d % 2 == 0);
    let predicted = if all_even {
        Some(JordanType::blocks(p, 1, m - n))
    } else if odd_to_even {
        JordanType::blocks(p, p - 1, m - n).plus(&JordanType::blocks(p, p - 2, n)).ok()
    } else {
        None
    };

    let pts = projective::points(&f, l.r());
    let checks = par::map(&pts, |q| -> Result<(PointCheck, JordanType)> {
        let point = PiPoint::linear(&f, q.clone())?;
        let t_tgt = evaluate(&tgt, &point)?;
        let coker = quotient_type(&t_tgt, &phi, p);
        let stable = crate::cjt::jordan_at(&l, &point)?.stable();
        let holds = coker.stable().num_blocks() == 0;
        Ok((
            PointCheck { point: point.to_string(), cokernel_type: coker.to_string(), holds, kernel_stable_type: stable.to_string() },
            stable,
        ))
    });
    let mut points = Vec::with_capacity(checks.len());
    let mut stables = Vec::with_capacity(checks.len());
    for c in checks {
        let (pc, st) = c?;
        points.push(pc);
        stables.push(st);
    }
    let failing: Vec<String> = points.iter().filter(|c| !c.holds).map(|c| c.point.clone()).collect();
    let hypothesis_holds = failing.is_empty();
    let prediction_holds = match (&predicted, hypothesis_holds) {
        (Some(t), true) => Some(stables.iter().all(|s| s == t)),
        _ => None,
    };
    let report = HypothesisReport {
        points,
        failing,
        hypothesis_holds,
        predicted_stable_type: predicted.map(|t| t.to_string()),
        prediction_holds,
    };
    Ok((l, report))
}

#[derive(Clone, Debug, Serialize)]
pub struct EndotrivialEvidence {
    pub end_dim: usize,
    pub free_rank: usize,
    pub core_dim: usize,
    pub global: bool,
    pub local: bool,
    pub points_checked: usize,
    /// Points (one per Frobenius orbit) whose stable type is not `1[1]` or `1[p-1]`.
    pub local_failures: Vec<(String, String)>,
    pub agree: bool,
}

impl EndotrivialEvidence {
    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.global,
            "evidence": serde_json::to_value(self).expect("serializable"),
        })
    }
}

/// Decides whether `End_k(M) ≅ k ⊕ proj` by splitting the free part off
/// `Hom(M, M)` (global), and compares with the pointwise test that the stable
/// type is `1[1]` or `1[p-1]` over `GF(p^e)`, `e <= max_e` (local).
pub fn endotrivial_check(m: &ModuleRep, max_e: u32) -> Result<EndotrivialEvidence> {
    if m.dim() == 0 {
        return Err(Error::InvalidParams("the zero module".into()));
    }
    let end = m.hom(m)?;
    let split = split_free(&end);
    let core = &split.core;
    let global = core.dim() == 1;
    let p = m.p();
    let one = JordanType::blocks(p, 1, 1);
    let shifted = JordanType::blocks(p, p - 1, 1);
    let mut local_failures = Vec::new();
    let mut points_checked = 0;
    for e in 1..=max_e.max(1) {
        let field = make_field(p as u64, e)?;
        for (q, t) in sweep_types(m, e)? {
            points_checked += 1;
            let s = t.stable();
            if s != one && s != shifted && projective::orbit_representative(&field, q.coords()) == q.coords() {
                local_failures.push((q.to_string(), s.to_string()));
            }
        }
    }
    let local = local_failures.is_empty();
    Ok(EndotrivialEvidence {
        end_dim: end.dim(),
        free_rank: split.t,
        core_dim: core.dim(),
        global,
        local,
        points_checked,
        local_failures,
        agree: global == local,
    })
}
