//! Explicit modules: truncated augmentation ideals, `kE/I^2`, the
//! 13-dimensional module `W`, the family `V_n`, Jordan blocks and seeded
//! random modules.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactalg::{make_field, FieldSpec, Matrix};
use crate::modrep::{monomial_exponents, shift_monomial, Convention, ModuleRep};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Example {
    /// `I^m / I^n` for the augmentation ideal `I` of `kE`, `E` of rank `r`.
    Truncated { p: u32, r: usize, m: u32, n: u32 },
    /// `kE / I^2`, dimension `r + 1`.
    KeModI2 { p: u32, r: usize },
    /// The 13-dimensional rank-2 module `W`.
    W { p: u32 },
    /// The `(2n + 1)`-dimensional rank-2 module `V_n`.
    V { p: u32, n: usize },
    /// The cyclic module `k[t]/t^i`.
    JBlock { p: u32, i: usize },
    Random { p: u32, r: usize, dim: usize, seed: u64 },
}

impl Example {
    pub fn name(&self) -> &'static str {
        match self {
            Example::Truncated { .. } => "TRUNCATED",
            Example::KeModI2 { .. } => "KE_MOD_I2",
            Example::W { .. } => "W",
            Example::V { .. } => "V",
            Example::JBlock { .. } => "JBLOCK",
            Example::Random { .. } => "RANDOM",
        }
    }

    /// Parses a name and `key=value` parameters, e.g. `("TRUNCATED", "p=5,r=2,m=3,n=6")`.
    pub fn parse(name: &str, params: &str) -> Result<Example> {
        let mut kv = std::collections::HashMap::new();
        for item in params.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Malformed(format!("parameter {item:?} is not key=value")))?;
            kv.insert(k.trim().to_ascii_lowercase(), v.trim().to_string());
        }
        fn get<T: FromStr>(kv: &std::collections::HashMap<String, String>, key: &str) -> Result<T> {
            let raw = kv.get(key).ok_or_else(|| Error::Malformed(format!("missing parameter {key}")))?;
            raw.parse().map_err(|_| Error::Malformed(format!("bad value {raw:?} for {key}")))
        }
        let p: u32 = get(&kv, "p")?;
        Ok(match name.to_ascii_uppercase().as_str() {
            "TRUNCATED" => Example::Truncated { p, r: get(&kv, "r")?, m: get(&kv, "m")?, n: get(&kv, "n")? },
            "KE_MOD_I2" => Example::KeModI2 { p, r: get(&kv, "r")? },
            "W" => Example::W { p },
            "V" => Example::V { p, n: get(&kv, "n")? },
            "JBLOCK" => Example::JBlock { p, i: get(&kv, "i")? },
            "RANDOM" => Example::Random {
                p,
                r: get(&kv, "r")?,
                dim: get(&kv, "dim")?,
                seed: kv.get("seed").map_or(Ok(0), |s| s.parse().map_err(|_| Error::Malformed("bad seed".into())))?,
            },
            other => return Err(Error::Malformed(format!("unknown example {other:?}"))),
        })
    }
}

impl fmt::Display for Example {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Example::Truncated { p, r, m, n } => write!(f, "TRUNCATED(p={p}, r={r}, m={m}, n={n})"),
            Example::KeModI2 { p, r } => write!(f, "KE_MOD_I2(p={p}, r={r})"),
            Example::W { p } => write!(f, "W(p={p})"),
            Example::V { p, n } => write!(f, "V(p={p}, n={n})"),
            Example::JBlock { p, i } => write!(f, "JBLOCK(p={p}, i={i})"),
            Example::Random { p, r, dim, seed } => write!(f, "RANDOM(p={p}, r={r}, dim={dim}, seed={seed})"),
        }
    }
}

pub fn build_example(ex: &Example) -> Result<ModuleRep> {
    match *ex {
        Example::Truncated { p, r, m, n } => truncated(p, r, m, n),
        Example::KeModI2 { p, r } => ke_mod_i2(p, r),
        Example::W { p } => w_module(p),
        Example::V { p, n } => v_module(p, n),
        Example::JBlock { p, i } => jblock(p, i),
        Example::Random { p, r, dim, seed } => random_module(p, r, dim, seed),
    }
}

fn prime_field(p: u32) -> Result<FieldSpec> {
    make_field(p as u64, 1)
}

/// Builds generator matrices from arrows `(generator, from, to)` between basis vectors.
pub fn from_arrows(field: &FieldSpec, r: usize, dim: usize, arrows: &[(usize, usize, usize)]) -> Result<ModuleRep> {
    let mut gens = vec![Matrix::zeros(field, dim, dim); r];
    for &(g, from, to) in arrows {
        if g >= r || from >= dim || to >= dim {
            return Err(Error::InvalidParams(format!("arrow ({g}, {from}, {to}) out of range")));
        }
        gens[g].set(to, from, 1);
    }
    ModuleRep::new(field, gens, Convention::Primitive)
}

/// `I^m / I^n`, basis the monomials `t^a` with `a_i < p` and `m <= |a| < n`,
/// ordered by degree and then by [`crate::modrep::monomial_index`].
pub fn truncated(p: u32, r: usize, m: u32, n: u32) -> Result<ModuleRep> {
    let field = prime_field(p)?;
    if r == 0 || m >= n {
        return Err(Error::InvalidParams(format!("TRUNCATED needs r >= 1 and m < n (got r={r}, m={m}, n={n})")));
    }
    let pu = p as usize;
    let size = pu.pow(r as u32);
    let degree = |idx: usize| -> u32 { monomial_exponents(pu, r, idx).iter().sum() };
    let mut basis: Vec<usize> = (0..size).filter(|&i| (m..n).contains(&degree(i))).collect();
    basis.sort_by_key(|&i| (degree(i), i));
    if basis.is_empty() {
        return Err(Error::InvalidParams(format!("I^{m}/I^{n} is zero for p={p}, r={r}")));
    }
    let position: std::collections::HashMap<usize, usize> = basis.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let mut arrows = Vec::new();
    for (from, &idx) in basis.iter().enumerate() {
        for g in 0..r {
            if let Some(to) = shift_monomial(pu, r, idx, g).and_then(|j| position.get(&j)) {
                arrows.push((g, from, *to));
            }
        }
    }
    from_arrows(&field, r, basis.len(), &arrows)
}

/// `kE / I^2`: `t_i` sends the generator to the `i`-th basis vector of the radical.
pub fn ke_mod_i2(p: u32, r: usize) -> Result<ModuleRep> {
    let field = prime_field(p)?;
    if r == 0 {
        return Err(Error::InvalidParams("KE_MOD_I2 needs r >= 1".into()));
    }
    let arrows: Vec<_> = (0..r).map(|i| (i, 0, i + 1)).collect();
    from_arrows(&field, r, r + 1, &arrows)
}

/// The module `W` generated by `v_1..v_4` with `x v_i = y v_{i+1}`,
/// `y^2 v_1 = x^2 v_4 = x^3 v_i = 0`. Basis order: `v_1..v_4`,
/// `x v_1..x v_4`, `x^2 v_1..x^2 v_3`, `y v_1`, `yx v_1`.
pub fn w_module(p: u32) -> Result<ModuleRep> {
    if p < 3 {
        return Err(Error::InvalidParams("W needs p >= 3".into()));
    }
    let field = prime_field(p)?;
    let (x, y) = (0, 1);
    let v = |i: usize| i - 1;
    let xv = |i: usize| 3 + i;
    let x2v = |i: usize| 7 + i;
    let (yv1, yxv1) = (11, 12);
    let mut arrows = Vec::new();
    for i in 1..=4 {
        arrows.push((x, v(i), xv(i)));
    }
    for i in 1..=3 {
        arrows.push((x, xv(i), x2v(i)));
        arrows.push((y, v(i + 1), xv(i)));
        arrows.push((y, xv(i + 1), x2v(i)));
    }
    arrows.push((x, yv1, yxv1));
    arrows.push((y, v(1), yv1));
    arrows.push((y, xv(1), yxv1));
    from_arrows(&field, 2, 13, &arrows)
}

/// `V_n`: basis `v_1..v_n, x v_1..x v_n, y v_1` with `x v_i = y v_{i+1}`.
pub fn v_module(p: u32, n: usize) -> Result<ModuleRep> {
    if n == 0 {
        return Err(Error::InvalidParams("V_n needs n >= 1".into()));
    }
    let field = prime_field(p)?;
    let yv1 = 2 * n;
    let mut arrows = vec![(1, 0, yv1)];
    for i in 0..n {
        arrows.push((0, i, n + i));
        if i + 1 < n {
            arrows.push((1, i + 1, n + i));
        }
    }
    from_arrows(&field, 2, 2 * n + 1, &arrows)
}

/// `[i] = k[t]/t^i` for the cyclic group of order `p`.
pub fn jblock(p: u32, i: usize) -> Result<ModuleRep> {
    if i == 0 || i > p as usize {
        return Err(Error::InvalidParams(format!("JBLOCK needs 1 <= i <= p (got {i})")));
    }
    let field = prime_field(p)?;
    ModuleRep::new(&field, vec![Matrix::jordan_block(&field, i)], Convention::Primitive)
}

/// Seeded random module with strictly upper triangular generators.
///
/// The space is cut into blocks `k^a ⊗ k^b` (`a, b <= p`) carrying the
/// commuting shifts `X = S_a ⊗ 1`, `Y = 1 ⊗ S_b`; on each block every
/// generator is a random polynomial without constant term in `X, Y`, so
/// its `p`-th power vanishes. The block sum is then conjugated by a random
/// unipotent upper triangular matrix.
pub fn random_module(p: u32, r: usize, dim: usize, seed: u64) -> Result<ModuleRep> {
    if r == 0 || dim == 0 {
        return Err(Error::InvalidParams("RANDOM needs r >= 1 and dim >= 1".into()));
    }
    let field = prime_field(p)?;
    let f = &field;
    let pu = p as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut blocks: Vec<Vec<Matrix>> = Vec::new();
    let mut remaining = dim;
    while remaining > 0 {
        let a = rng.gen_range(1..=pu.min(remaining));
        let b = rng.gen_range(1..=pu.min(remaining / a));
        let sa = Matrix::jordan_block(f, a).transpose();
        let sb = Matrix::jordan_block(f, b).transpose();
        let x = sa.kron(&Matrix::identity(f, b));
        let y = Matrix::identity(f, a).kron(&sb);
        let n = a * b;
        let gens = (0..r)
            .map(|_| {
                let mut acc = Matrix::zeros(f, n, n);
                let mut xi = Matrix::identity(f, n);
                for i in 0..a {
                    let mut term = xi.clone();
                    for j in 0..b {
                        if i + j > 0 && i + j <= 2 {
                            let c = rng.gen_range(0..p);
                            if c != 0 {
                                acc = acc.add(&term.scale(c));
                            }
                        }
                        term = term.mul(&y);
                    }
                    xi = xi.mul(&x);
                }
                acc
            })
            .collect();
        blocks.push(gens);
        remaining -= n;
    }
    let mut u = Matrix::identity(f, dim);
    for i in 0..dim {
        for j in i + 1..dim {
            if rng.gen_bool(0.5) {
                u.set(i, j, rng.gen_range(0..p));
            }
        }
    }
    let u_inv = u.inverse().expect("unipotent");
    let gens = (0..r)
        .map(|g| {
            let parts: Vec<&Matrix> = blocks.iter().map(|b| &b[g]).collect();
            u.mul(&Matrix::direct_sum(f, &parts)).mul(&u_inv)
        })
        .collect();
    ModuleRep::new(f, gens, Convention::Primitive)
}


#[cfg(test)]
mod proptests {
    use super::*;
    use crate::cjt::check_constant;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn random_modules_validate(p in prop::sample::select(vec![2u32, 3, 5]), r in 1usize..4, dim in 1usize..12, seed in any::<u64>()) {
            let m = random_module(p, r, dim, seed).unwrap();
            prop_assert_eq!(m.dim(), dim);
            prop_assert!(m.validate().is_ok());
        }

        #[test]
        fn truncated_ideals_are_constant(
            (p, r, m, n) in (prop::sample::select(vec![2u32, 3, 5]), 2usize..4)
                .prop_flat_map(|(p, r)| (Just(p), Just(r), 0..p + 1))
                .prop_flat_map(|(p, r, m)| (Just(p), Just(r), Just(m), m + 1..p + 2))
        ) {
            let Ok(module) = truncated(p, r, m, n) else { return Ok(()) };
            let rep = check_constant(&module, 1, r == 2).unwrap();
            prop_assert!(rep.is_constant(), "TRUNCATED({r}, {m}, {n}) at p = {p}: {:?}", rep.witnesses);
        }
    }
}
