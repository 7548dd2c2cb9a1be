//! Acceptance criteria. One PASS/FAIL line is printed per criterion.

use std::collections::BTreeSet;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cjt::carlson::{endotrivial_check, kernel_of_hom_matrix, l_xi};
use cjt::cjt::{check_constant, gamma_locus, generic_type, jordan_at, pi_support, sweep_types, PiPoint, Verdict};
use cjt::exactalg::{make_field, projective, FieldSpec, Matrix};
use cjt::modrep::{build_extension, is_isomorphic, projective_cover_omega, Convention, DEFAULT_ISO_DRAWS};
use cjt::syzygy::{cohomology_dim, coordinate_class, everywhere_vanishing_classes, omega_k};
use cjt::zoo;
use cjt::{Dominance, HomPoly, JordanType, ModuleRep, PolyMatrix, ZeroSearch};

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn jt(p: usize, pairs: &[(usize, usize)]) -> JordanType {
    JordanType::from_pairs(p, pairs)
}

fn points(f: &FieldSpec, r: usize) -> Vec<PiPoint> {
    projective::points(f, r).into_iter().map(|q| PiPoint::linear(f, q).unwrap()).collect()
}

/// Types at every point of `P^{r-1}(GF(p^e))`, computed directly at each point.
fn types_over(m: &ModuleRep, e: u32) -> Vec<(PiPoint, JordanType)> {
    let f = make_field(m.p() as u64, e).unwrap();
    let lifted = m.base_change(&f).unwrap();
    points(&f, m.r()).into_iter().map(|q| (q.clone(), jordan_at(&lifted, &q).unwrap())).collect()
}

fn c1_tensor_oracle() -> Check {
    for p in [2u32, 3, 5, 7] {
        let pu = p as usize;
        let f = make_field(p as u64, 1).unwrap();
        for conv in [Convention::Primitive, Convention::Group] {
            for i in 1..=pu {
                for j in 1..=pu {
                    let a = ModuleRep::new(&f, vec![Matrix::jordan_block(&f, i)], conv).unwrap();
                    let b = ModuleRep::new(&f, vec![Matrix::jordan_block(&f, j)], conv).unwrap();
                    let t = a.tensor(&b).unwrap();
                    let explicit = JordanType::from_nilpotent(t.gen(0), pu).unwrap();
                    let formula = JordanType::blocks(pu, i, 1).tensor_type(&JordanType::blocks(pu, j, 1)).unwrap();
                    ensure(explicit == formula, || format!("p={p} [{i}]⊗[{j}] {conv:?}: {explicit} vs {formula}"))?;
                }
            }
        }
    }
    Ok(())
}

fn c2_elementary() -> Check {
    for p in [3u32, 5] {
        for r in [2usize, 3, 4] {
            let m = zoo::ke_mod_i2(p, r).unwrap();
            let want = jt(p as usize, &[(1, 2), (r - 1, 1)]);
            let rep = check_constant(&m, 2, r == 2).unwrap();
            let verdict = if r == 2 { Verdict::ConstantExact } else { Verdict::ConstantOnTested };
            ensure(rep.verdict == verdict && rep.jordan_type == want, || {
                format!("KE_MOD_I2({r}) p={p}: {:?} {}", rep.verdict, rep.jordan_type)
            })?;
        }
    }
    Ok(())
}

fn c3_w_dichotomy() -> Check {
    let rep = check_constant(&zoo::w_module(5).unwrap(), 2, true).unwrap();
    ensure(rep.verdict == Verdict::ConstantExact && rep.jordan_type == jt(5, &[(3, 3), (2, 2)]), || {
        format!("W(5): {:?} {}", rep.verdict, rep.jordan_type)
    })?;
    let rep = check_constant(&zoo::w_module(7).unwrap(), 2, true).unwrap();
    ensure(rep.verdict == Verdict::NotConstant && rep.jordan_type == jt(7, &[(4, 3), (1, 1)]), || {
        format!("W(7): {:?} {}", rep.verdict, rep.jordan_type)
    })?;
    let wit: BTreeSet<(Vec<u32>, String)> = rep.witnesses.iter().map(|(q, t)| (q.coords().to_vec(), t.to_string())).collect();
    let axis = jt(7, &[(3, 3), (2, 2)]).to_string();
    let want: BTreeSet<(Vec<u32>, String)> = [(vec![1, 0], axis.clone()), (vec![0, 1], axis)].into_iter().collect();
    ensure(wit == want, || format!("W(7) witnesses {wit:?}"))?;
    for p in [5u32, 7] {
        let m = zoo::truncated(p, 2, p - 2, p + 1).unwrap();
        let rep = check_constant(&m, 2, true).unwrap();
        let want = jt(p as usize, &[(p as usize - 2, 3), (2, 2)]);
        ensure(rep.verdict == Verdict::ConstantExact && rep.jordan_type == want, || {
            format!("TRUNCATED(2,{},{}) p={p}: {:?} {}", p - 2, p + 1, rep.verdict, rep.jordan_type)
        })?;
    }
    Ok(())
}

fn c4_v_family() -> Check {
    for p in [3u32, 5] {
        for n in 1..=6 {
            let rep = check_constant(&zoo::v_module(p, n).unwrap(), 2, true).unwrap();
            let want = jt(p as usize, &[(n, 2), (1, 1)]);
            ensure(rep.verdict == Verdict::ConstantExact && rep.jordan_type == want, || {
                format!("V_{n} p={p}: {:?} {}", rep.verdict, rep.jordan_type)
            })?;
        }
    }
    Ok(())
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn c5_omega_dims() -> Check {
    for r in [2usize, 3] {
        for p in [2u32, 3, 5] {
            let size = (p as usize).pow(r as u32);
            // 0 → Ω^{n+1} → P_n → Ω^n → 0 with P_n free of rank C(n+r-1, r-1)
            let mut expected = 1usize;
            for n in 0..=6usize {
                let got = omega_k(p, r, n as i64).unwrap().dim();
                ensure(got == expected, || format!("dim Ω^{n}(k) p={p} r={r}: {got} vs {expected}"))?;
                if n % 2 == 0 {
                    let k = n / 2;
                    let closed = if r == 2 { size * k + 1 } else { size * k * (k + 1) + 1 };
                    ensure(got == closed, || format!("closed form for Ω^{n}: {got} vs {closed}"))?;
                }
                ensure(cohomology_dim(r, n) == binom(n + r - 1, r - 1), || "cohomology dim".into())?;
                expected = binom(n + r - 1, r - 1) * size - expected;
            }
            for n in 1..=3i64 {
                let (a, b) = (omega_k(p, r, -n).unwrap().dim(), omega_k(p, r, n).unwrap().dim());
                ensure(a == b, || format!("dim Ω^-{n} = {a} vs dim Ω^{n} = {b}"))?;
            }
        }
    }
    Ok(())
}

fn c6_heller_stable_types() -> Check {
    for r in [2usize, 3] {
        for p in [3u32, 5] {
            for n in -4i64..=4 {
                let m = omega_k(p, r, n).unwrap();
                let want = if n % 2 == 0 { JordanType::blocks(p as usize, 1, 1) } else { JordanType::blocks(p as usize, p as usize - 1, 1) };
                for (q, t) in types_over(&m, 1) {
                    ensure(t.stable() == want, || format!("Ω^{n}(k) p={p} r={r} at {q}: stable {}", t.stable()))?;
                }
            }
        }
    }
    Ok(())
}

fn c7_endotrivial() -> Check {
    for n in -3i64..=3 {
        let ev = endotrivial_check(&omega_k(3, 2, n).unwrap(), 2).unwrap();
        ensure(ev.global && ev.local && ev.agree, || format!("Ω^{n}(k): {ev:?}"))?;
    }
    let others =
        [("KE_MOD_I2(2)", zoo::ke_mod_i2(3, 2).unwrap()), ("V_2", zoo::v_module(3, 2).unwrap()), ("W(5)", zoo::w_module(5).unwrap())];
    for (name, m) in others {
        let ev = endotrivial_check(&m, 2).unwrap();
        ensure(!ev.global && !ev.local && ev.agree, || format!("{name}: {ev:?}"))?;
    }
    Ok(())
}

fn c8_rank_two_carlson() -> Check {
    let classes = [coordinate_class(3, 2, 2, 0).unwrap(), coordinate_class(3, 2, 2, 1).unwrap()];
    let l = l_xi(&classes).unwrap();
    ensure(l.dim() == 19, || format!("dim {}", l.dim()))?;
    let iso = is_isomorphic(&l, &omega_k(3, 2, 4).unwrap(), 0, DEFAULT_ISO_DRAWS).unwrap();
    ensure(iso.isomorphic && !iso.inconclusive, || format!("isomorphic {} inconclusive {}", iso.isomorphic, iso.inconclusive))
}

fn c9_rank_three_carlson() -> Check {
    let classes: Vec<_> = (0..3).map(|i| coordinate_class(3, 3, 2, i).unwrap()).collect();
    let l = l_xi(&classes).unwrap();
    ensure(l.dim() == 6 * 27 + 2, || format!("dim {}", l.dim()))?;
    let want = JordanType::blocks(3, 1, 2);
    for e in [1, 2] {
        for (q, t) in types_over(&l, e) {
            ensure(t.stable() == want, || format!("at {q} over GF(3^{e}): stable {}", t.stable()))?;
        }
    }
    Ok(())
}

fn c10_degree_one_kernel() -> Check {
    let etas = [coordinate_class(5, 2, 1, 0).unwrap(), coordinate_class(5, 2, 1, 1).unwrap()];
    let grid = vec![etas.iter().map(|c| c.carrier.clone()).collect::<Vec<_>>()];
    let (l, report) = kernel_of_hom_matrix(&grid, &[1, 1], &[0]).unwrap();
    ensure(l.dim() == 47, || format!("dim {}", l.dim()))?;
    ensure(report.hypothesis_holds, || format!("hypothesis fails at {:?}", report.failing))?;
    let want = jt(5, &[(1, 4), (1, 3)]);
    for (q, t) in types_over(&l, 1) {
        ensure(t.stable() == want, || format!("at {q}: stable {}", t.stable()))?;
    }
    ensure(report.prediction_holds == Some(true), || "report disagrees with the sweep".into())
}

/// Random type of dimension `dim` with blocks at most `p`.
fn random_type(rng: &mut ChaCha8Rng, p: usize, dim: usize) -> JordanType {
    let mut counts = vec![0; p];
    let mut left = dim;
    while left > 0 {
        let s = rng.gen_range(1..=p.min(left));
        counts[s - 1] += 1;
        left -= s;
    }
    JordanType::new(p, counts).unwrap()
}

/// A type below `a`: repeatedly split a block of size `s` into `s - 1` and `1`.
fn degenerate(rng: &mut ChaCha8Rng, a: &JordanType) -> JordanType {
    let mut counts = a.counts.clone();
    for _ in 0..rng.gen_range(0..4) {
        let big: Vec<usize> = (2..=a.p).filter(|&s| counts[s - 1] > 0).collect();
        if big.is_empty() {
            break;
        }
        let s = big[rng.gen_range(0..big.len())];
        counts[s - 1] -= 1;
        counts[s - 2] += 1;
        counts[0] += 1;
    }
    JordanType::new(a.p, counts).unwrap()
}

fn c11_cyclic_dominance() -> Check {
    let mut strict_cases = 0;
    for seed in 0..300u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = [2usize, 3, 5, 7][rng.gen_range(0..4)];
        let dim = rng.gen_range(1..=12);
        let a = random_type(&mut rng, p, dim);
        let b = if rng.gen_bool(0.8) { degenerate(&mut rng, &a) } else { random_type(&mut rng, p, dim) };
        let cdim = rng.gen_range(1..=10);
        let c = random_type(&mut rng, p, cdim);
        let (ac, bc) = (a.tensor_type(&c).unwrap(), b.tensor_type(&c).unwrap());
        let before = a.dominance_compare(&b).unwrap();
        let after = ac.dominance_compare(&bc).unwrap();
        let has_small = (1..p).any(|i| c.count(i) > 0);
        match before {
            Dominance::Greater if has_small => {
                strict_cases += 1;
                ensure(after == Dominance::Greater, || format!("seed {seed}: {a} > {b} but {ac} vs {bc}: {after:?}"))?
            }
            Dominance::Greater | Dominance::Equal => ensure(matches!(after, Dominance::Greater | Dominance::Equal), || {
                format!("seed {seed}: {a} >= {b} but {ac} vs {bc}: {after:?}")
            })?,
            _ => {}
        }
    }
    ensure(strict_cases >= 100, || format!("only {strict_cases} strict cases exercised"))
}

fn zoo_suite() -> Vec<(String, ModuleRep)> {
    let mut out: Vec<(String, ModuleRep)> = Vec::new();
    let mut add = |ex: zoo::Example| out.push((ex.to_string(), zoo::build_example(&ex).unwrap()));
    use zoo::Example::*;
    add(Truncated { p: 5, r: 2, m: 3, n: 6 });
    add(Truncated { p: 3, r: 3, m: 1, n: 3 });
    add(Truncated { p: 5, r: 2, m: 1, n: 4 });
    add(KeModI2 { p: 5, r: 2 });
    add(KeModI2 { p: 3, r: 3 });
    add(W { p: 5 });
    add(W { p: 7 });
    add(V { p: 5, n: 3 });
    add(V { p: 3, n: 4 });
    add(JBlock { p: 5, i: 3 });
    for seed in 0..4 {
        add(Random { p: 5, r: 2, dim: 8, seed });
        add(Random { p: 3, r: 3, dim: 6, seed });
    }
    out
}

fn c12_semicontinuity() -> Check {
    for (name, m) in zoo_suite() {
        let generic = generic_type(&m).unwrap();
        for e in 1..=2 {
            for (q, t) in sweep_types(&m, e).unwrap() {
                let d = generic.dominance_compare(&t).unwrap();
                ensure(matches!(d, Dominance::Greater | Dominance::Equal), || {
                    format!("{name}: generic {generic} vs {t} at {q}: {d:?}")
                })?;
            }
        }
    }
    Ok(())
}

fn constant_on(m: &ModuleRep, e: u32) -> bool {
    check_constant(m, e, false).unwrap().is_constant()
}

/// The inflation of `k[t]/t^p` along the first coordinate: projective away
/// from `λ_1 = 0`.
fn inflated_cyclic(p: u32) -> ModuleRep {
    let f = make_field(p as u64, 1).unwrap();
    let a = Matrix::jordan_block(&f, p as usize);
    ModuleRep::new(&f, vec![a, Matrix::zeros(&f, p as usize, p as usize)], Convention::Primitive).unwrap()
}

fn c13_closure_and_loci() -> Check {
    let p = 5u32;
    let constant = [
        ("W(5)", zoo::w_module(p).unwrap()),
        ("V_2", zoo::v_module(p, 2).unwrap()),
        ("KE_MOD_I2(2)", zoo::ke_mod_i2(p, 2).unwrap()),
        ("TRUNCATED(2,1,3)", zoo::truncated(p, 2, 1, 3).unwrap()),
    ];
    let varying = [
        ("RANDOM(5,2,6,0)", zoo::random_module(p, 2, 6, 0).unwrap()),
        ("RANDOM(5,2,7,1)", zoo::random_module(p, 2, 7, 1).unwrap()),
        ("inflated [5]", inflated_cyclic(p)),
    ];
    for (i, (na, a)) in constant.iter().enumerate() {
        let ta = check_constant(a, 1, true).unwrap().jordan_type;
        for (nb, b) in constant.iter().skip(i) {
            let tb = check_constant(b, 1, true).unwrap().jordan_type;
            let tensor = a.tensor(b).unwrap();
            ensure(constant_on(&tensor, 2), || format!("{na} ⊗ {nb} is not constant"))?;
            let hom = a.hom(b).unwrap();
            let rep = check_constant(&hom, 2, false).unwrap();
            let want = ta.tensor_type(&tb).unwrap();
            ensure(rep.is_constant() && rep.jordan_type == want, || {
                format!("Hom({na}, {nb}): {:?} {} vs {want}", rep.verdict, rep.jordan_type)
            })?;
            let sum = a.direct_sum(b).unwrap();
            ensure(constant_on(&sum, 2), || format!("{na} ⊕ {nb} is not constant"))?;
        }
        for (nv, v) in &varying {
            // a summand of non-constant type spoils the sum
            ensure(!constant_on(&a.direct_sum(v).unwrap(), 2), || format!("{na} ⊕ {nv} reported constant"))?;
        }
    }
    let all: Vec<(&str, &ModuleRep)> = constant.iter().chain(varying.iter()).map(|(n, m)| (*n, m)).collect();
    let key = |q: &PiPoint| q.coords().to_vec();
    for e in 1..=2 {
        for (i, (na, a)) in all.iter().enumerate() {
            for (nb, b) in all.iter().skip(i) {
                let gamma = |m: &ModuleRep| -> BTreeSet<Vec<u32>> { gamma_locus(m, e).unwrap().points.iter().map(|(q, _)| key(q)).collect() };
                let support = |m: &ModuleRep| -> BTreeSet<Vec<u32>> { pi_support(m, e).unwrap().iter().map(key).collect() };
                let lhs = gamma(&a.tensor(b).unwrap());
                let union: BTreeSet<_> = gamma(a).union(&gamma(b)).cloned().collect();
                let both: BTreeSet<_> = support(a).intersection(&support(b)).cloned().collect();
                let rhs: BTreeSet<_> = union.intersection(&both).cloned().collect();
                ensure(lhs == rhs, || format!("Γ({na} ⊗ {nb}) over GF(5^{e}): {lhs:?} vs {rhs:?}"))?;
                ensure(lhs.is_empty() == constant_on(&a.tensor(b).unwrap(), e), || format!("Γ empty iff constant for {na} ⊗ {nb}"))?;
            }
        }
    }
    Ok(())
}

fn random_form(rng: &mut ChaCha8Rng, p: u32, nvars: usize, degree: u32) -> HomPoly {
    let mut terms = Vec::new();
    for a in 0..=degree {
        for b in 0..=degree - a {
            terms.push((vec![a, b, degree - a - b], rng.gen_range(0..p) as i64));
        }
    }
    HomPoly::from_terms(p, nvars, &terms).unwrap()
}

fn c14_ranks() -> Check {
    let p = 5u32;
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let degrees = [rng.gen_range(1..=2u32), rng.gen_range(1..=2u32)];
        let entries: Vec<HomPoly> = (0..3).flat_map(|_| degrees.map(|d| d)).map(|d| random_form(&mut rng, p, 3, d)).collect();
        let a = PolyMatrix::new(p, 3, 3, 2, entries).unwrap();
        match a.common_zero_search(2, 8).unwrap() {
            ZeroSearch::Witness { point, field } => {
                let vanish = a.eval(&field, &point).rank() < 2;
                ensure(vanish, || format!("seed {seed}: witness {point:?} does not drop rank"))?;
            }
            ZeroSearch::NotFound { .. } => return Err(format!("seed {seed} (column degrees {degrees:?}): no witness up to e = 8")),
        }
    }
    let x = |i| HomPoly::var(p, 3, i);
    let fixed = PolyMatrix::new(p, 3, 3, 2, vec![x(0), x(1), x(1), x(2), x(2), x(0)]).unwrap();
    match fixed.common_zero_search(2, 8).unwrap() {
        ZeroSearch::Witness { point, field } => {
            ensure(field.e() == 1 && point == vec![1, 1, 1], || format!("fixed example: {point:?} over GF(5^{})", field.e()))
        }
        ZeroSearch::NotFound { .. } => Err("fixed example: no witness".into()),
    }
}

fn c15_split_restrictions() -> Check {
    let (p, r) = (3u32, 2usize);
    let classes = everywhere_vanishing_classes(p, r, 2).unwrap();
    let zeta = classes.first().ok_or("no everywhere vanishing degree-2 class")?;
    ensure(!zeta.is_stably_zero(), || "class is zero".into())?;
    // ζ: Ω²(k) = Ω(Ω¹(k)) → k classifies 0 → k → B → Ω¹(k) → 0
    let omega1 = omega_k(p, r, 1).unwrap();
    let cover = projective_cover_omega(&omega1);
    ensure(&cover.omega == zeta.source().as_ref(), || "carrier does not start at Ω(Ω¹(k))".into())?;
    let ext = build_extension(&cover, &zeta.carrier).unwrap();
    let sub = ext.into.source().clone();
    let quot = Arc::new(omega1.clone());
    ensure(ext.onto.target().as_ref() == quot.as_ref(), || "quotient is not Ω¹(k)".into())?;
    for e in [1, 2] {
        let (tb, ts, tq) = (types_over(&ext.middle, e), types_over(&sub, e), types_over(&quot, e));
        for ((q, b), ((_, s), (_, n))) in tb.iter().zip(ts.iter().zip(&tq)) {
            let sum = s.plus(n).unwrap();
            ensure(*b == sum, || format!("at {q} over GF(3^{e}): middle {b} vs {sum}"))?;
        }
    }
    // the extension does not split: the middle term is not k ⊕ Ω¹(k)
    let split = sub.direct_sum(&quot).unwrap();
    let iso = is_isomorphic(&ext.middle, &split, 0, DEFAULT_ISO_DRAWS).unwrap();
    ensure(!iso.isomorphic, || "middle term splits".into())?;
    Ok(())
}

/// Writes past the test harness's output capture so the lines show in a plain `cargo test`.
fn report(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

#[test]
fn acceptance_criteria() {
    let criteria: Vec<(&str, fn() -> Check)> = vec![
        ("1 tensor of Jordan blocks matches explicit modules, both conventions", c1_tensor_oracle),
        ("2 kE/I^2 has constant type 1[2] + (r-1)[1]", c2_elementary),
        ("3 W constant at p = 5, not at p = 7; truncated ideals constant", c3_w_dichotomy),
        ("4 V_n constant of type n[2] + 1[1]", c4_v_family),
        ("5 dimensions of Heller shifts of k", c5_omega_dims),
        ("6 stable types of Heller shifts of k", c6_heller_stable_types),
        ("7 global and local endotriviality agree", c7_endotrivial),
        ("8 L for two degree-2 classes, r = 2, is Ω^4(k)", c8_rank_two_carlson),
        ("9 L for three degree-2 classes, r = 3: dim 164, stable 2[1]", c9_rank_three_carlson),
        ("10 degree-1 kernel, r = 2, p = 5: dim 47, stable 1[4] + 1[3]", c10_degree_one_kernel),
        ("11 tensoring preserves dominance, strictly when required", c11_cyclic_dominance),
        ("12 generic type dominates rational specializations", c12_semicontinuity),
        ("13 closure under summands, tensor and Hom; non-maximal loci of tensors", c13_closure_and_loci),
        ("14 3x2 matrices of forms have rank-dropping points", c14_ranks),
        ("15 extension with pointwise split restrictions has additive types", c15_split_restrictions),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => report(&format!("criterion {name}: PASS ({secs:.1}s)")),
            Err(why) => {
                report(&format!("criterion {name}: FAIL ({secs:.1}s) {why}"));
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
