//! Jordan types of nilpotent operators with blocks of size at most `p`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::Matrix;

/// `a_p[p] + ... + a_1[1]`: `counts[i - 1]` is the number of blocks of size `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JordanType {
    pub p: usize,
    pub counts: Vec<usize>,
}

/// Outcome of comparing two Jordan types of the same dimension in the
/// dominance order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Dominance {
    Greater,
    Equal,
    Less,
    Incomparable,
}

impl JordanType {
    pub fn zero(p: usize) -> JordanType {
        JordanType { p, counts: vec![0; p] }
    }

    pub fn new(p: usize, counts: Vec<usize>) -> Result<JordanType> {
        if counts.len() != p {
            return Err(Error::InvalidParams(format!("expected {p} block counts, got {}", counts.len())));
        }
        Ok(JordanType { p, counts })
    }

    /// `n[size]`.
    pub fn blocks(p: usize, size: usize, n: usize) -> JordanType {
        assert!((1..=p).contains(&size), "block size {size} outside 1..={p}");
        let mut t = JordanType::zero(p);
        t.counts[size - 1] = n;
        t
    }

    /// Builds a type from `(multiplicity, size)` pairs.
    pub fn from_pairs(p: usize, pairs: &[(usize, usize)]) -> JordanType {
        let mut t = JordanType::zero(p);
        for &(n, size) in pairs {
            t.counts[size - 1] += n;
        }
        t
    }

    pub fn count(&self, size: usize) -> usize {
        self.counts[size - 1]
    }

    pub fn dim(&self) -> usize {
        self.counts.iter().enumerate().map(|(i, &a)| (i + 1) * a).sum()
    }

    pub fn num_blocks(&self) -> usize {
        self.counts.iter().sum()
    }

    /// `rank(A^j)` for an operator of this type: each block of size `i`
    /// contributes `max(i - j, 0)`.
    pub fn rank_of_power(&self, j: usize) -> usize {
        self.counts.iter().enumerate().map(|(i, &a)| a * (i + 1).saturating_sub(j)).sum()
    }

    /// True when every block has size `p` (the restriction is free).
    pub fn is_projective(&self) -> bool {
        self.counts[..self.p - 1].iter().all(|&a| a == 0)
    }

    pub fn plus(&self, other: &JordanType) -> Result<JordanType> {
        self.check_cap(other)?;
        Ok(JordanType {
            p: self.p,
            counts: self.counts.iter().zip(&other.counts).map(|(a, b)| a + b).collect(),
        })
    }

    fn check_cap(&self, other: &JordanType) -> Result<()> {
        if self.p != other.p {
            return Err(Error::CapMismatch(self.p, other.p));
        }
        Ok(())
    }

    /// Jordan type of a nilpotent matrix with `a^p = 0`, from ranks of powers:
    /// `a_j = rank(a^{j-1}) - 2 rank(a^j) + rank(a^{j+1})`.
    pub fn from_nilpotent(a: &Matrix, p: usize) -> Result<JordanType> {
        assert!(a.is_square(), "Jordan type of a non-square matrix");
        let ranks = power_ranks(a, p);
        if ranks[p] != 0 {
            return Err(Error::NonNilpotentMatrix(p));
        }
        Ok(JordanType::from_ranks(p, &ranks))
    }

    /// `ranks[j] = rank(a^j)` for `j = 0..=p`, with `ranks[p] = 0`.
    pub fn from_ranks(p: usize, ranks: &[usize]) -> JordanType {
        let r = |j: usize| ranks.get(j).copied().unwrap_or(0);
        let counts = (1..=p).map(|j| r(j - 1) + r(j + 1) - 2 * r(j)).collect();
        JordanType { p, counts }
    }

    /// Dominance order of partitions: `a >= b` iff `rank T_a^j >= rank T_b^j`
    /// for every `j`, where `rank T^j = Σ_{i>j} (i - j) a_i`.
    pub fn dominance_compare(&self, other: &JordanType) -> Result<Dominance> {
        self.same_dim(other)?;
        Ok(compare_sequences(
            (1..self.p).map(|j| self.rank_of_power(j)),
            (1..self.p).map(|j| other.rank_of_power(j)),
            self.counts == other.counts,
        ))
    }

    /// Compares the weighted tail sums `Σ_{i>=j} i a_i`, `1 <= j <= p`. This
    /// is a coarser relation than [`JordanType::dominance_compare`]:
    /// `4[3] + 1[1]` and `3[3] + 2[2]` are incomparable here but not there.
    pub fn partial_sum_compare(&self, other: &JordanType) -> Result<Dominance> {
        self.same_dim(other)?;
        let tails = |t: &JordanType| -> Vec<usize> {
            let mut acc = 0;
            let mut out: Vec<usize> = (1..=t.p)
                .rev()
                .map(|i| {
                    acc += i * t.counts[i - 1];
                    acc
                })
                .collect();
            out.reverse();
            out
        };
        Ok(compare_sequences(tails(self).into_iter(), tails(other).into_iter(), self.counts == other.counts))
    }

    fn same_dim(&self, other: &JordanType) -> Result<()> {
        self.check_cap(other)?;
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "Jordan types of dimension {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(())
    }

    /// Drops the blocks of size `p`.
    pub fn stable(&self) -> JordanType {
        let mut t = self.clone();
        t.counts[self.p - 1] = 0;
        t
    }

    /// Type of the tensor product of operators of types `self` and `other`,
    /// by bilinear extension of the decomposition of `[i] ⊗ [j]`.
    pub fn tensor_type(&self, other: &JordanType) -> Result<JordanType> {
        self.check_cap(other)?;
        let p = self.p;
        let mut out = JordanType::zero(p);
        for i in 1..=p {
            let a = self.counts[i - 1];
            if a == 0 {
                continue;
            }
            for j in 1..=p {
                let b = other.counts[j - 1];
                if b == 0 {
                    continue;
                }
                for (size, mult) in block_tensor(p, i, j) {
                    out.counts[size - 1] += a * b * mult;
                }
            }
        }
        Ok(out)
    }
}

fn compare_sequences(a: impl Iterator<Item = usize>, b: impl Iterator<Item = usize>, equal: bool) -> Dominance {
    if equal {
        return Dominance::Equal;
    }
    let (mut ge, mut le) = (true, true);
    for (x, y) in a.zip(b) {
        match x.cmp(&y) {
            Ordering::Greater => le = false,
            Ordering::Less => ge = false,
            Ordering::Equal => {}
        }
    }
    match (ge, le) {
        (true, _) => Dominance::Greater,
        (_, true) => Dominance::Less,
        _ => Dominance::Incomparable,
    }
}

/// Decomposition of `[i] ⊗ [j]` as `(size, multiplicity)` pairs.
pub fn block_tensor(p: usize, i: usize, j: usize) -> Vec<(usize, usize)> {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    let mut out = Vec::new();
    if i + j <= p {
        let mut s = j - i + 1;
        while s < j + i {
            out.push((s, 1));
            s += 2;
        }
    } else {
        // empty range when i + j >= 2p - 1
        let top = (2 * p).saturating_sub(i + j + 1);
        let mut s = j - i + 1;
        while s <= top {
            out.push((s, 1));
            s += 2;
        }
        out.push((p, i + j - p));
    }
    out
}

/// `rank(a^j)` for `j = 0..=p`, computed by pushing an echelon basis of the
/// row space through `a` one power at a time.
pub fn power_ranks(a: &Matrix, p: usize) -> Vec<usize> {
    let n = a.rows();
    let mut ranks = vec![n];
    let mut basis = a.row_echelon();
    ranks.push(basis.rows());
    for _ in 2..=p {
        if basis.rows() == 0 {
            ranks.push(0);
            continue;
        }
        basis = basis.mul(a).row_echelon();
        ranks.push(basis.rows());
    }
    ranks
}

impl fmt::Display for JordanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (1..=self.p)
            .rev()
            .filter(|&i| self.counts[i - 1] > 0)
            .map(|i| format!("{}[{}]", self.counts[i - 1], i))
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}
