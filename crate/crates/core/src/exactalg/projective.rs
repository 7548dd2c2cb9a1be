//! Rational points of projective space in normalized sweep order.
//!
//! A point is normalized when its first nonzero coordinate is 1. Points are
//! ordered lexicographically as coordinate tuples, comparing elements by
//! their integer encoding, so `(0:..:0:1)` comes first and `(1:q-1:..:q-1)`
//! last.

use super::field::{Elem, FieldSpec};

/// Number of points of `P^{n-1}(GF(q))`.
pub fn point_count(q: u64, n: usize) -> u64 {
    (0..n as u32).map(|i| q.pow(i)).sum()
}

/// The `index`-th normalized point of `P^{n-1}` over a field with `q` elements.
pub fn point_at(q: u64, n: usize, mut index: u64) -> Vec<Elem> {
    assert!(n >= 1);
    for lead in (0..n).rev() {
        let tail_len = (n - 1 - lead) as u32;
        let block = q.pow(tail_len);
        if index < block {
            let mut pt = vec![0; n];
            pt[lead] = 1;
            for pos in (lead + 1..n).rev() {
                pt[pos] = (index % q) as Elem;
                index /= q;
            }
            return pt;
        }
        index -= block;
    }
    panic!("point index out of range");
}

/// All points in sweep order.
pub fn points(field: &FieldSpec, n: usize) -> Vec<Vec<Elem>> {
    let q = field.q() as u64;
    (0..point_count(q, n)).map(|i| point_at(q, n, i)).collect()
}

/// Sweep position of a normalized point.
pub fn index_of(q: u64, pt: &[Elem]) -> u64 {
    let n = pt.len();
    let lead = pt.iter().position(|&x| x != 0).expect("zero vector is not a point");
    let mut index: u64 = (lead + 1..n).map(|l| q.pow((n - 1 - l) as u32)).sum();
    let mut tail = 0u64;
    for &c in &pt[lead + 1..] {
        tail = tail * q + c as u64;
    }
    index += tail;
    index
}

pub fn normalize(field: &FieldSpec, v: &[Elem]) -> Option<Vec<Elem>> {
    let lead = v.iter().find(|&&x| x != 0)?;
    let inv = field.inv(*lead);
    Some(v.iter().map(|&x| field.mul(x, inv)).collect())
}

/// Coordinate-wise Frobenius; normalized points stay normalized.
pub fn frobenius(field: &FieldSpec, pt: &[Elem]) -> Vec<Elem> {
    pt.iter().map(|&x| field.frobenius(x)).collect()
}

/// Representative of the Frobenius orbit: the member earliest in sweep order.
pub fn orbit_representative(field: &FieldSpec, pt: &[Elem]) -> Vec<Elem> {
    let q = field.q() as u64;
    let mut best = pt.to_vec();
    let mut best_idx = index_of(q, pt);
    let mut cur = frobenius(field, pt);
    while cur != pt {
        let idx = index_of(q, &cur);
        if idx < best_idx {
            best_idx = idx;
            best = cur.clone();
        }
        cur = frobenius(field, &cur);
    }
    best
}

/// Whether all coordinates lie in GF(p^d) for some proper divisor `d` of `e`.
pub fn defined_over_proper_subfield(field: &FieldSpec, pt: &[Elem]) -> bool {
    let e = field.e();
    (1..e).filter(|d| e % d == 0).any(|d| {
        let qd = (field.p() as u64).pow(d);
        pt.iter().all(|&x| field.pow(x, qd) == x)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::field::make_field;

    #[test]
    fn sweep_order_and_count() {
        let f = make_field(3, 1).unwrap();
        let pts = points(&f, 2);
        assert_eq!(pts, vec![vec![0, 1], vec![1, 0], vec![1, 1], vec![1, 2]]);
        assert_eq!(point_count(5, 3), 31);
        for (i, pt) in points(&f, 3).iter().enumerate() {
            assert_eq!(index_of(3, pt), i as u64);
        }
    }

    #[test]
    fn orbits_over_gf9() {
        let f = make_field(3, 2).unwrap();
        let pts = points(&f, 2);
        assert_eq!(pts.len(), 10);
        let reps: std::collections::BTreeSet<u64> =
            pts.iter().map(|p| index_of(9, &orbit_representative(&f, p))).collect();
        // 4 rational points plus 3 conjugate pairs
        assert_eq!(reps.len(), 7);
        let sub = pts.iter().filter(|p| defined_over_proper_subfield(&f, p)).count();
        assert_eq!(sub, 4);
    }
}
