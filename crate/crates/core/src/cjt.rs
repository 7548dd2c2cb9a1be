//! π-points, Jordan types at points, the generic Jordan type and the
//! constant Jordan type test.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactalg::{make_field, projective, upoly, Elem, FieldSpec, Matrix};
use crate::jordan::{Dominance, JordanType};
use crate::modrep::ModuleRep;
use crate::par;
use crate::polymat::{HomPoly, PolyMatrix};

/// Default largest extension degree swept by [`check_constant`].
pub const DEFAULT_MAX_E: u32 = 2;

/// A π-point `t ↦ Σ λ_i t_i + Σ c_μ t^μ` over `field`.
#[derive(Clone, PartialEq, Eq)]
pub struct PiPoint {
    field: FieldSpec,
    linear: Vec<Elem>,
    tail: Vec<(Vec<u32>, Elem)>,
}

impl PiPoint {
    pub fn new(field: &FieldSpec, linear: Vec<Elem>, tail: Vec<(Vec<u32>, Elem)>) -> Result<PiPoint> {
        if linear.iter().all(|&x| x == 0) {
            return Err(Error::InvalidParams("a π-point needs a nonzero linear part".into()));
        }
        if linear.iter().any(|&x| !field.contains(x)) {
            return Err(Error::Malformed(format!("coordinates outside {}", field.describe())));
        }
        let p = field.p();
        for (exps, c) in &tail {
            if exps.len() != linear.len() {
                return Err(Error::Malformed(format!("tail monomial {exps:?} has the wrong length")));
            }
            if exps.iter().sum::<u32>() < 2 || exps.iter().any(|&e| e >= p) {
                return Err(Error::InvalidParams(format!("tail monomial {exps:?} must have degree >= 2, exponents < p")));
            }
            if !field.contains(*c) {
                return Err(Error::Malformed("tail coefficient outside the field".into()));
            }
        }
        Ok(PiPoint { field: field.clone(), linear, tail })
    }

    pub fn linear(field: &FieldSpec, linear: Vec<Elem>) -> Result<PiPoint> {
        PiPoint::new(field, linear, Vec::new())
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coords(&self) -> &[Elem] {
        &self.linear
    }

    pub fn tail(&self) -> &[(Vec<u32>, Elem)] {
        &self.tail
    }

    pub fn r(&self) -> usize {
        self.linear.len()
    }

    pub fn to_json(&self) -> Value {
        let f = &self.field;
        let el = |x: Elem| if f.is_prime_field() { json!(x) } else { json!(f.coeffs(x)) };
        let mut v = json!({
            "e": f.e(),
            "point": self.linear.iter().map(|&x| el(x)).collect::<Vec<_>>(),
        });
        if !self.tail.is_empty() {
            v["tail"] = Value::Array(self.tail.iter().map(|(m, c)| json!({"exps": m, "coef": el(*c)})).collect());
        }
        v
    }
}

impl fmt::Display for PiPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords: Vec<String> = self
            .linear
            .iter()
            .map(|&x| {
                if self.field.is_prime_field() {
                    x.to_string()
                } else {
                    self.field.coeffs(x).iter().map(|c| c.to_string()).collect::<Vec<_>>().join("/")
                }
            })
            .collect();
        write!(f, "[{}]", coords.join(":"))?;
        if !self.tail.is_empty() {
            write!(f, " + {} tail terms", self.tail.len())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PiPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} over {}", self.field.describe())
    }
}

/// The operator `Σ λ_i A_i + Σ c_μ A^μ` by which `t` acts on the restriction.
pub fn evaluate(m: &ModuleRep, q: &PiPoint) -> Result<Matrix> {
    if m.field().p() != q.field.p() {
        return Err(Error::CharacteristicMismatch(m.field().p(), q.field.p()));
    }
    if q.r() != m.r() {
        return Err(Error::DimensionMismatch(format!("point with {} coordinates for r = {}", q.r(), m.r())));
    }
    let m = m.base_change(&q.field)?;
    let f = &q.field;
    let mut acc = Matrix::zeros(f, m.dim(), m.dim());
    for (a, &c) in m.gens().iter().zip(&q.linear) {
        if c != 0 {
            acc = acc.add(&a.scale(c));
        }
    }
    for (exps, c) in &q.tail {
        if *c != 0 {
            acc = acc.add(&m.monomial_action(exps).scale(*c));
        }
    }
    Ok(acc)
}

pub fn jordan_at(m: &ModuleRep, q: &PiPoint) -> Result<JordanType> {
    JordanType::from_nilpotent(&evaluate(m, q)?, m.p())
}

fn require_prime_field(m: &ModuleRep) -> Result<()> {
    if m.field().is_prime_field() {
        Ok(())
    } else {
        Err(Error::Unsupported("this operation needs a module over the prime field".into()))
    }
}

/// `rank P^j` over the function field, `j = 0..=p`, for the pencil `P = Σ λ_i A_i`.
pub fn generic_ranks(m: &ModuleRep) -> Result<Vec<usize>> {
    require_prime_field(m)?;
    let p = m.p();
    let mut ranks = vec![m.dim()];
    if m.dim() == 0 {
        ranks.resize(p + 1, 0);
        return Ok(ranks);
    }
    let pencil = PolyMatrix::pencil(m.gens())?;
    let mut power = pencil.clone();
    for j in 1..p {
        if j > 1 {
            power = power.mul(&pencil);
        }
        let rk = power.generic_rank();
        ranks.push(rk);
        if rk == 0 {
            break;
        }
    }
    ranks.resize(p + 1, 0);
    Ok(ranks)
}

/// Jordan type at the generic point of the linear pencil.
pub fn generic_type(m: &ModuleRep) -> Result<JordanType> {
    Ok(JordanType::from_ranks(m.p(), &generic_ranks(m)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    ConstantExact,
    ConstantOnTested,
    NotConstant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "RANK2_GCD")]
    Rank2Gcd,
    #[serde(rename = "SWEEP")]
    Sweep,
}

#[derive(Clone, Debug)]
pub struct CjtReport {
    pub verdict: Verdict,
    /// Generic type; for a constant module the common type.
    pub jordan_type: JordanType,
    pub witnesses: Vec<(PiPoint, JordanType)>,
    pub method: Method,
    /// Extension degrees swept.
    pub extensions: Vec<u32>,
}

impl CjtReport {
    pub fn is_constant(&self) -> bool {
        self.verdict != Verdict::NotConstant
    }

    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict,
            "type": self.jordan_type.to_string(),
            "counts": self.jordan_type.counts,
            "method": self.method,
            "extensions": self.extensions,
            "witnesses": self.witnesses.iter().map(|(q, t)| {
                let mut v = q.to_json();
                v["type"] = json!(t.to_string());
                v["counts"] = json!(t.counts);
                v
            }).collect::<Vec<_>>(),
        })
    }
}

/// Jordan types at every normalized point of `P^{r-1}(GF(p^e))`, in sweep
/// order. Types are computed once per Frobenius orbit.
pub fn sweep_types(m: &ModuleRep, e: u32) -> Result<Vec<(PiPoint, JordanType)>> {
    require_prime_field(m)?;
    let field = make_field(m.p() as u64, e)?;
    let pts = projective::points(&field, m.r());
    let q = field.q() as u64;
    let reps: Vec<u64> = pts.iter().map(|pt| projective::index_of(q, &projective::orbit_representative(&field, pt))).collect();
    let distinct: Vec<usize> = (0..pts.len()).filter(|&i| reps[i] == i as u64).collect();
    let lifted = m.base_change(&field)?;
    let types = par::map(&distinct, |&i| {
        let point = PiPoint::linear(&field, pts[i].clone()).expect("normalized points are nonzero");
        jordan_at(&lifted, &point)
    });
    let mut by_rep: HashMap<u64, JordanType> = HashMap::new();
    for (&i, t) in distinct.iter().zip(types) {
        by_rep.insert(i as u64, t?);
    }
    Ok(pts
        .into_iter()
        .zip(reps)
        .map(|(pt, rep)| (PiPoint::linear(&field, pt).expect("nonzero"), by_rep[&rep].clone()))
        .collect())
}

/// Decides or tests constant Jordan type over linear representatives.
///
/// For `r = 2` with `exact`, the module is constant iff for each `j` the
/// maximal minors of the pencil power `P^j` have no common zero, i.e. their
/// gcd is constant. Otherwise the points of `P^{r-1}(GF(p^e))`,
/// `e = 1..=max_e`, are compared against the generic type; the first level
/// with a deviating point is completed and its deviating points reported.
pub fn check_constant(m: &ModuleRep, max_e: u32, exact: bool) -> Result<CjtReport> {
    require_prime_field(m)?;
    let p = m.p();
    if m.r() == 1 {
        let t = JordanType::from_nilpotent(m.gen(0), p)?;
        return Ok(CjtReport {
            verdict: Verdict::ConstantExact,
            jordan_type: t,
            witnesses: Vec::new(),
            method: Method::Sweep,
            extensions: vec![1],
        });
    }
    let generic = generic_type(m)?;
    if exact && m.r() == 2 {
        let gcds = rank2_gcds(m)?;
        if gcds.iter().all(|g| g.degree() == 0) {
            return Ok(CjtReport {
                verdict: Verdict::ConstantExact,
                jordan_type: generic,
                witnesses: Vec::new(),
                method: Method::Rank2Gcd,
                extensions: Vec::new(),
            });
        }
        let mut extensions = Vec::new();
        for e in 1..=max_e {
            extensions.push(e);
            let witnesses = deviating(m, e, &generic)?;
            if !witnesses.is_empty() {
                return Ok(not_constant(generic, witnesses, Method::Rank2Gcd, extensions));
            }
        }
        // the locus has no points yet: go to the smallest field containing a root
        let fp = m.field();
        let e = gcds
            .iter()
            .map(binary_form_roots_poly)
            .filter(|g| g.len() > 1)
            .filter_map(|g| upoly::min_root_extension(fp, &g, 64))
            .min()
            .expect("a nonconstant polynomial has a root in some finite extension");
        // when GF(p^e) is too large to represent the verdict stands without witnesses
        let witnesses = match zeros_of_forms(m, e, &generic, &gcds) {
            Ok(w) => {
                assert!(!w.is_empty(), "roots of the minor gcd are points of non-maximal type");
                extensions.push(e);
                w
            }
            Err(Error::FieldTooLarge { .. }) => Vec::new(),
            Err(err) => return Err(err),
        };
        return Ok(not_constant(generic, witnesses, Method::Rank2Gcd, extensions));
    }
    let mut extensions = Vec::new();
    for e in 1..=max_e {
        extensions.push(e);
        let witnesses = deviating(m, e, &generic)?;
        if !witnesses.is_empty() {
            return Ok(not_constant(generic, witnesses, Method::Sweep, extensions));
        }
    }
    Ok(CjtReport {
        verdict: Verdict::ConstantOnTested,
        jordan_type: generic,
        witnesses: Vec::new(),
        method: Method::Sweep,
        extensions,
    })
}

fn not_constant(generic: JordanType, witnesses: Vec<(PiPoint, JordanType)>, method: Method, extensions: Vec<u32>) -> CjtReport {
    CjtReport { verdict: Verdict::NotConstant, jordan_type: generic, witnesses, method, extensions }
}

/// Deviating points at level `e`, one per Frobenius orbit.
fn deviating(m: &ModuleRep, e: u32, generic: &JordanType) -> Result<Vec<(PiPoint, JordanType)>> {
    let field = make_field(m.p() as u64, e)?;
    Ok(sweep_types(m, e)?
        .into_iter()
        .filter(|(q, t)| t != generic && projective::orbit_representative(&field, q.coords()) == q.coords())
        .collect())
}

/// For `r = 2`: for each pencil power `P^j`, `j = 1..p-1`, the gcd of its
/// maximal minors as a binary form.
fn rank2_gcds(m: &ModuleRep) -> Result<Vec<HomPoly>> {
    let p = m.p();
    let pencil = PolyMatrix::pencil(m.gens())?;
    let powers: Vec<PolyMatrix> = (1..p).map(|j| pencil.pow(j)).collect();
    let gcds = par::map(&powers, |pj| -> Result<HomPoly> {
        let rank = pj.generic_rank();
        if rank == 0 {
            return Ok(HomPoly::constant(p as u32, 2, 1));
        }
        pj.bivariate_minor_gcd(rank)
    });
    gcds.into_iter().collect()
}

/// Points of `P^1(GF(p^e))` where one of the binary forms vanishes, one per
/// Frobenius orbit in sweep order, with their types. Only these points can
/// deviate from the generic type, so no full sweep is needed.
fn zeros_of_forms(m: &ModuleRep, e: u32, generic: &JordanType, forms: &[HomPoly]) -> Result<Vec<(PiPoint, JordanType)>> {
    let field = make_field(m.p() as u64, e)?;
    let q = field.q() as u64;
    let mut found: BTreeMap<u64, Vec<Elem>> = BTreeMap::new();
    for g in forms.iter().filter(|g| g.degree() > 0) {
        let mut affine = vec![0; g.degree() as usize + 1];
        let mut vanishes_at_infinity = true;
        for (exps, c) in g.terms() {
            if exps[1] == 0 {
                vanishes_at_infinity = false;
            }
            affine[exps[0] as usize] = c;
        }
        upoly::trim(&mut affine);
        let mut zeros: Vec<Vec<Elem>> = upoly::roots(&field, &affine)
            .into_iter()
            .map(|x| vec![x, 1])
            .collect();
        if vanishes_at_infinity {
            zeros.push(vec![1, 0]);
        }
        for z in zeros {
            let pt = projective::normalize(&field, &z).expect("nonzero");
            let rep = projective::orbit_representative(&field, &pt);
            found.insert(projective::index_of(q, &rep), rep);
        }
    }
    let lifted = m.base_change(&field)?;
    let pts: Vec<Vec<Elem>> = found.into_values().collect();
    let types = par::map(&pts, |pt| -> Result<(PiPoint, JordanType)> {
        let point = PiPoint::linear(&field, pt.clone())?;
        let t = jordan_at(&lifted, &point)?;
        Ok((point, t))
    });
    let mut out = Vec::new();
    for r in types {
        let (point, t) = r?;
        if &t != generic {
            out.push((point, t));
        }
    }
    Ok(out)
}

/// A univariate polynomial over GF(p) whose roots in GF(p^e) are in
/// bijection with the zeros of the binary form `g` in `P^1(GF(p^e))`: the
/// affine part `g(x, 1)` times `x - c` for a rational stand-in `c` of the
/// point `[1:0]` when that point is a zero. Degree 0 iff `g` has no zeros.
pub fn binary_form_roots_poly(g: &crate::polymat::HomPoly) -> upoly::UPoly {
    let mut affine = vec![0; g.degree() as usize + 1];
    let mut vanishes_at_infinity = true;
    for (exps, c) in g.terms() {
        if exps[1] == 0 {
            vanishes_at_infinity = false;
        }
        affine[exps[0] as usize] = c;
    }
    upoly::trim(&mut affine);
    if vanishes_at_infinity && g.degree() > 0 {
        // any linear factor works for deciding "has a zero over GF(p^e)"
        let mut shifted = vec![0; affine.len() + 1];
        shifted[1..].copy_from_slice(&affine);
        shifted
    } else {
        affine
    }
}

/// Non-maximal support locus at the rational points of `P^{r-1}(GF(p^e))`.
#[derive(Clone, Debug)]
pub struct GammaLocus {
    pub generic: JordanType,
    pub points: Vec<(PiPoint, JordanType)>,
}

impl GammaLocus {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "generic": self.generic.to_string(),
            "generic_counts": self.generic.counts,
            "points": self.points.iter().map(|(q, t)| {
                let mut v = q.to_json();
                v["type"] = json!(t.to_string());
                v
            }).collect::<Vec<_>>(),
        })
    }
}

/// All points of `P^{r-1}(GF(p^e))` (including those over subfields) where
/// the type differs from the generic type.
pub fn gamma_locus(m: &ModuleRep, e: u32) -> Result<GammaLocus> {
    let generic = generic_type(m)?;
    let points = sweep_types(m, e)?.into_iter().filter(|(_, t)| t != &generic).collect();
    Ok(GammaLocus { generic, points })
}

/// Points of `P^{r-1}(GF(p^e))` where the restriction is not projective.
pub fn pi_support(m: &ModuleRep, e: u32) -> Result<Vec<PiPoint>> {
    Ok(sweep_types(m, e)?.into_iter().filter(|(_, t)| !t.is_projective()).map(|(q, _)| q).collect())
}

/// True when every listed type lies strictly below the generic type.
pub fn semicontinuity_holds(locus: &GammaLocus) -> bool {
    locus.points.iter().all(|(_, t)| matches!(t.dominance_compare(&locus.generic), Ok(Dominance::Less)))
}
