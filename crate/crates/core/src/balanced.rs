//! Balanced vectors: positive integer vectors `v` of length `p` for which some
//! `(p-1) x p` matrix `A` over an alphabet `S` has null space exactly
//! `span(v)`.
//!
//! Such an `A` exists iff the annihilator `{a ∈ S^p : a·v = 0}` has rank
//! `p - 1`, so the decision streams `S^p` and tracks rank, stopping as soon as
//! `p - 1` independent rows are found.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::exact::{rank, Matrix, RankTracker};
use crate::gray::GrayWalk;
use crate::sdiag::Alphabet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BalancedError {
    #[error("vector is empty or all zero")]
    Zero,
    #[error("entries must be positive")]
    NonPositive,
    #[error("entries must be non-increasing")]
    NotNonIncreasing,
    #[error("vector is not regular")]
    NotRegular,
    #[error("vector is not balanced over the alphabet")]
    NotBalanced,
}

/// A non-increasing vector of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BVec {
    entries: Vec<u64>,
}

impl BVec {
    pub fn new(entries: Vec<u64>) -> Result<Self, BalancedError> {
        if entries.is_empty() {
            return Err(BalancedError::Zero);
        }
        if entries.contains(&0) {
            return Err(BalancedError::NonPositive);
        }
        if entries.windows(2).any(|w| w[0] < w[1]) {
            return Err(BalancedError::NotNonIncreasing);
        }
        Ok(BVec { entries })
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.entries.iter().sum()
    }

    fn signed(&self) -> Vec<i64> {
        self.entries.iter().map(|&x| x as i64).collect()
    }
}

impl fmt::Display for BVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Absolute values, zeros dropped, sorted non-increasing, divided by the gcd.
pub fn canonicalize(v: &[i64]) -> Result<BVec, BalancedError> {
    let mut entries: Vec<u64> = v
        .iter()
        .filter(|&&x| x != 0)
        .map(|x| x.unsigned_abs())
        .collect();
    if entries.is_empty() {
        return Err(BalancedError::Zero);
    }
    let g = entries.iter().fold(0, |g, &x| num_integer::gcd(g, x));
    entries.iter_mut().for_each(|x| *x /= g);
    entries.sort_unstable_by(|a, b| b.cmp(a));
    Ok(BVec { entries })
}

/// A `(p-1) x p` matrix whose null space is `span(v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancedCertificate {
    rows: Vec<Vec<i64>>,
    p: usize,
}

impl BalancedCertificate {
    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn matrix(&self) -> Matrix {
        if self.rows.is_empty() {
            return Matrix::zeros(0, self.p);
        }
        Matrix::from_int_rows(&self.rows)
    }

    /// Rank `p - 1`, entries in `s`, and `A·v = 0`, checked exactly.
    pub fn verify(&self, v: &BVec, s: &Alphabet) -> bool {
        let p = v.len();
        self.p == p
            && self.rows.len() == p - 1
            && self
                .rows
                .iter()
                .all(|r| r.len() == p && r.iter().all(|&x| s.contains(x)))
            && self.rows.iter().all(|r| dot(r, &v.signed()) == 0)
            && rank(&self.matrix()) == p - 1
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Above this length the meet-in-the-middle route is used.
pub const GRAY_MAX_LEN: usize = 15;

/// Decides whether `v` is `S`-balanced, returning a certificate if so.
pub fn is_balanced(v: &BVec, s: &Alphabet) -> Option<BalancedCertificate> {
    if v.len() > GRAY_MAX_LEN {
        balanced_meet_in_middle(v, s)
    } else {
        balanced_gray(v, s)
    }
}

/// Streams `S^p` in Gray-code order keeping `a·v` up to date.
pub fn balanced_gray(v: &BVec, s: &Alphabet) -> Option<BalancedCertificate> {
    let p = v.len();
    let target = p - 1;
    let mut rows = Vec::with_capacity(target);
    if target == 0 {
        return Some(BalancedCertificate { rows, p });
    }
    let vals = s.values();
    let w = v.signed();
    let symmetric = s.is_symmetric();
    let mut a = vec![vals[0]; p];
    let mut d: i64 = w.iter().map(|x| x * vals[0]).sum();
    let mut tracker = RankTracker::new(p);
    let mut walk = GrayWalk::new(vals.len(), p);
    loop {
        if d == 0 {
            let first = a.iter().find(|&&x| x != 0);
            if first.is_some_and(|&x| !symmetric || x > 0) && tracker.insert(&a) {
                rows.push(a.clone());
                if rows.len() == target {
                    return Some(BalancedCertificate { rows, p });
                }
            }
        }
        let (k, old, new) = walk.step()?;
        a[k] = vals[new];
        d += (vals[new] - vals[old]) * w[k];
    }
}

fn half_assignments(vals: &[i64], w: &[i64]) -> Vec<(i64, Vec<i64>)> {
    let mut out = Vec::with_capacity(vals.len().pow(w.len() as u32));
    let mut a = vec![vals[0]; w.len()];
    let mut d: i64 = w.iter().map(|x| x * vals[0]).sum();
    let mut walk = GrayWalk::new(vals.len(), w.len());
    loop {
        out.push((d, a.clone()));
        let Some((k, old, new)) = walk.step() else {
            return out;
        };
        a[k] = vals[new];
        d += (vals[new] - vals[old]) * w[k];
    }
}

/// Splits `v` into halves and groups each half's assignments by partial dot
/// product. Within a group pairing left `L_t` with right `R_{-t}`, the pairs
/// `(l_0, r)` and `(l, r_0)` span every `(l, r)`, since
/// `(l, r) = (l, r_0) + (l_0, r) - (l_0, r_0)`. Only `|L_t| + |R_{-t}|` pairs
/// per group are inserted.
pub fn balanced_meet_in_middle(v: &BVec, s: &Alphabet) -> Option<BalancedCertificate> {
    let p = v.len();
    let target = p - 1;
    let mut rows = Vec::with_capacity(target);
    if target == 0 {
        return Some(BalancedCertificate { rows, p });
    }
    let w = v.signed();
    let h = p / 2;
    let vals = s.values();
    let left = half_assignments(vals, &w[..h]);
    let mut right: HashMap<i64, Vec<Vec<i64>>> = HashMap::new();
    for (d, a) in half_assignments(vals, &w[h..]) {
        right.entry(d).or_default().push(a);
    }
    let mut left_groups: HashMap<i64, Vec<Vec<i64>>> = HashMap::new();
    for (d, a) in left {
        left_groups.entry(d).or_default().push(a);
    }
    let mut keys: Vec<i64> = left_groups.keys().copied().collect();
    keys.sort_unstable_by_key(|k| (k.abs(), *k));
    let mut tracker = RankTracker::new(p);
    let join = |l: &[i64], r: &[i64]| -> Vec<i64> { l.iter().chain(r).copied().collect() };
    for t in keys {
        let Some(rs) = right.get(&-t) else {
            continue;
        };
        let ls = &left_groups[&t];
        let pairs = ls
            .iter()
            .map(|l| join(l, &rs[0]))
            .chain(rs.iter().skip(1).map(|r| join(&ls[0], r)));
        for a in pairs {
            if tracker.insert(&a) {
                rows.push(a);
                if rows.len() == target {
                    return Some(BalancedCertificate { rows, p });
                }
            }
        }
    }
    None
}

/// `v_p = 1` and every entry is at most the sum of the entries after it.
pub fn is_regular(v: &BVec) -> bool {
    let e = v.entries();
    if e[e.len() - 1] != 1 {
        return false;
    }
    let mut suffix = 0;
    for (i, &x) in e.iter().enumerate().rev() {
        if i + 1 < e.len() && x > suffix {
            return false;
        }
        suffix += x;
    }
    true
}

/// Upper-triangular certificate: row `j` is `e_j - Σ_{i ∈ S_j} e_i` where
/// `S_j ⊆ {j+1, …, p}` has `Σ_{i ∈ S_j} v_i = v_j`.
///
/// Taking later entries greedily, largest first, always finds `S_j`: if
/// `v_k` is skipped then the remaining target is below `v_k`, which regularity
/// bounds by the sum of the entries after `k`.
pub fn regular_certificate(v: &BVec) -> Result<BalancedCertificate, BalancedError> {
    if !is_regular(v) {
        return Err(BalancedError::NotRegular);
    }
    let e = v.entries();
    let p = e.len();
    let mut rows = Vec::with_capacity(p - 1);
    for j in 0..p - 1 {
        let mut row = vec![0i64; p];
        row[j] = 1;
        let mut rest = e[j];
        for i in j + 1..p {
            if e[i] <= rest {
                row[i] = -1;
                rest -= e[i];
            }
        }
        debug_assert_eq!(rest, 0);
        rows.push(row);
    }
    Ok(BalancedCertificate { rows, p })
}

/// Certificate for the concatenation `(v, w)` built from certificates `A`, `B`
/// and a pair `x ∈ S^p`, `z ∈ S^q` with `v·x = -(w·z) ≠ 0`:
/// `[[A, 0], [0, B], [x^T, z^T]]`. With symmetric `S`, `z = -y` for the `y`
/// of `v·x = w·y`.
///
/// `None` only means no such pair exists; `(v, w)` may still be balanced.
pub fn concat_balanced(
    v: &BVec,
    w: &BVec,
    s: &Alphabet,
) -> Result<Option<BalancedCertificate>, BalancedError> {
    let a = is_balanced(v, s).ok_or(BalancedError::NotBalanced)?;
    let b = is_balanced(w, s).ok_or(BalancedError::NotBalanced)?;
    let (p, q) = (v.len(), w.len());
    let vs = v.signed();
    let ws = w.signed();
    let mut by_dot: HashMap<i64, Vec<i64>> = HashMap::new();
    for (d, x) in half_assignments(s.values(), &vs) {
        if d != 0 {
            by_dot.entry(d).or_insert(x);
        }
    }
    let mut link = None;
    for (d, z) in half_assignments(s.values(), &ws) {
        if d != 0 {
            if let Some(x) = by_dot.get(&-d) {
                link = Some((x.clone(), z));
                break;
            }
        }
    }
    let Some((x, z)) = link else {
        return Ok(None);
    };
    let mut rows = Vec::with_capacity(p + q - 1);
    for r in a.rows() {
        rows.push(r.iter().copied().chain(std::iter::repeat_n(0, q)).collect());
    }
    for r in b.rows() {
        rows.push(std::iter::repeat_n(0, p).chain(r.iter().copied()).collect());
    }
    rows.push(x.into_iter().chain(z).collect());
    Ok(Some(BalancedCertificate { rows, p: p + q }))
}

/// Largest determinant of a `{-1,0,1}` matrix of each order `0..=12`.
const MAX_DETERMINANT: [u64; 13] = [
    1, 1, 2, 4, 16, 48, 160, 576, 4096, 14336, 73728, 327680, 2985984,
];

/// Bound on the entries of a gcd-reduced balanced vector of length `p`: they
/// are `(p-1)`-minors of a `{-1,0,1}` certificate, up to a common factor.
pub fn default_entry_cap(p: usize) -> u64 {
    let m = p.saturating_sub(1);
    match MAX_DETERMINANT.get(m) {
        Some(&d) => d,
        None => (m as f64).powf(m as f64 / 2.0).floor() as u64,
    }
}

fn nonincreasing_vectors(p: usize, cap: u64) -> Vec<Vec<u64>> {
    fn rec(p: usize, max: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for x in 1..=max {
            cur.push(x);
            rec(p, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(p, cap, &mut Vec::with_capacity(p), &mut out);
    out
}

fn dominated(e: &[u64]) -> bool {
    e.len() == 1 || e[0] <= e[1..].iter().sum()
}

/// All gcd-reduced balanced vectors of length `p` over `{-1,0,1}` with
/// entries at most `cap` (default [`default_entry_cap`]), sorted
/// lexicographically descending.
pub fn enumerate_balanced_by_length(p: usize, cap: Option<u64>) -> Vec<BVec> {
    assert!(p >= 1, "length must be positive");
    let cap = cap.unwrap_or_else(|| default_entry_cap(p));
    let s = Alphabet::neg_zero_one();
    let mut out: Vec<BVec> = nonincreasing_vectors(p, cap)
        .into_par_iter()
        .filter(|e| e.iter().fold(0, |g, &x| num_integer::gcd(g, x)) == 1 && dominated(e))
        .map(|entries| BVec { entries })
        .filter(|v| is_balanced(v, &s).is_some())
        .collect();
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Partitions of `n` as non-increasing vectors, lexicographically descending.
pub fn partitions(n: u64) -> Vec<BVec> {
    fn rec(rest: u64, max: u64, cur: &mut Vec<u64>, out: &mut Vec<BVec>) {
        if rest == 0 {
            out.push(BVec {
                entries: cur.clone(),
            });
            return;
        }
        for x in (1..=max.min(rest)).rev() {
            cur.push(x);
            rec(rest - x, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, n, &mut Vec::new(), &mut out);
    }
    out
}

/// All balanced vectors (over `{-1,0,1}`) with sum `n`, up to reordering and
/// not gcd-reduced, sorted lexicographically descending.
pub fn enumerate_balanced_by_sum(n: u64) -> Vec<BVec> {
    let s = Alphabet::neg_zero_one();
    partitions(n)
        .into_par_iter()
        .filter(|v| dominated(v.entries()) && is_balanced(v, &s).is_some())
        .collect()
}

/// Number of regular vectors with sum `n`.
pub fn count_regular_by_sum(n: u64) -> usize {
    partitions(n).iter().filter(|v| is_regular(v)).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(e: &[u64]) -> BVec {
        BVec::new(e.to_vec()).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(canonicalize(&[0, -2, 4, -4]).unwrap(), bv(&[2, 2, 1]));
        assert_eq!(canonicalize(&[3, 3]).unwrap(), bv(&[1, 1]));
        assert_eq!(canonicalize(&[-7]).unwrap(), bv(&[1]));
        assert_eq!(canonicalize(&[0, 0]), Err(BalancedError::Zero));
    }

    #[test]
    fn bvec_validation() {
        assert_eq!(BVec::new(vec![]), Err(BalancedError::Zero));
        assert_eq!(BVec::new(vec![1, 2]), Err(BalancedError::NotNonIncreasing));
        assert_eq!(BVec::new(vec![2, 0]), Err(BalancedError::NonPositive));
        assert_eq!(bv(&[4, 2, 2]).to_string(), "(4,2,2)");
    }

    #[test]
    fn balanced_examples() {
        let s = Alphabet::neg_zero_one();
        let v = bv(&[2, 1, 1]);
        let cert = is_balanced(&v, &s).unwrap();
        assert!(cert.verify(&v, &s));
        assert!(is_balanced(&bv(&[3, 3, 1, 1]), &s).is_none());
        let v = bv(&[2, 1, 1, 1, 1]);
        let pm = Alphabet::neg_one();
        assert!(is_balanced(&v, &pm).unwrap().verify(&v, &pm));
        let one = is_balanced(&bv(&[1]), &pm).unwrap();
        assert!(one.rows().is_empty());
        assert!(one.verify(&bv(&[1]), &pm));
    }

    #[test]
    fn meet_in_middle_agrees_with_gray() {
        let s = Alphabet::neg_zero_one();
        let pm = Alphabet::neg_one();
        for e in [
            vec![3, 3, 1, 1],
            vec![2, 1, 1],
            vec![10, 9, 4, 3, 2],
            vec![5, 5, 5, 1, 1, 1],
            vec![7, 4, 3, 3, 2, 1, 1],
            vec![9, 9, 1, 1, 1, 1, 1, 1],
            vec![2, 2, 2, 2, 2, 2, 1, 1],
        ] {
            let v = bv(&e);
            for alpha in [&s, &pm] {
                let g = balanced_gray(&v, alpha);
                let m = balanced_meet_in_middle(&v, alpha);
                assert_eq!(g.is_some(), m.is_some(), "{v} over {alpha}");
                if let Some(c) = m {
                    assert!(c.verify(&v, alpha));
                }
            }
        }
    }

    #[test]
    fn long_vectors_use_meet_in_middle() {
        let v = bv(&[1; 18]);
        let s = Alphabet::neg_zero_one();
        assert!(is_balanced(&v, &s).unwrap().verify(&v, &s));
        let mut e = vec![40];
        e.extend([1; 16]);
        assert!(is_balanced(&bv(&e), &s).is_none());
    }

    #[test]
    fn regular_examples() {
        assert!(is_regular(&bv(&[4, 2, 1, 1])));
        assert!(!is_regular(&bv(&[3, 2, 2, 1])));
        assert!(!is_regular(&bv(&[4, 3, 2, 1])));
        assert!(is_regular(&bv(&[1])));
        assert!(!is_regular(&bv(&[2])));
    }

    #[test]
    fn regular_certificate_examples() {
        let c = regular_certificate(&bv(&[4, 2, 1, 1])).unwrap();
        assert_eq!(
            c.rows(),
            &[vec![1, -1, -1, -1], vec![0, 1, -1, -1], vec![0, 0, 1, -1]]
        );
        assert!(c.verify(&bv(&[4, 2, 1, 1]), &Alphabet::neg_zero_one()));
        let c = regular_certificate(&bv(&[1, 1])).unwrap();
        assert_eq!(c.rows(), &[vec![1, -1]]);
        let c = regular_certificate(&bv(&[2, 1, 1])).unwrap();
        assert_eq!(c.rows(), &[vec![1, -1, -1], vec![0, 1, -1]]);
        assert_eq!(
            regular_certificate(&bv(&[3, 2, 2, 1])),
            Err(BalancedError::NotRegular)
        );
    }

    #[test]
    fn concat_examples() {
        let s = Alphabet::neg_zero_one();
        let v = bv(&[2, 1, 1]);
        let c = concat_balanced(&v, &v, &s).unwrap().unwrap();
        assert_eq!(c.rows().len(), 5);
        assert!(c.rows().iter().all(|r| dot(r, &[2, 1, 1, 2, 1, 1]) == 0));
        assert_eq!(rank(&c.matrix()), 5);
        assert_eq!(concat_balanced(&bv(&[3, 3]), &bv(&[1, 1]), &s), Ok(None));
        assert_eq!(
            concat_balanced(&bv(&[3, 1]), &bv(&[1, 1]), &s),
            Err(BalancedError::NotBalanced)
        );
    }

    #[test]
    fn small_enumerations() {
        let p3 = enumerate_balanced_by_length(3, None);
        assert_eq!(p3, vec![bv(&[2, 1, 1]), bv(&[1, 1, 1])]);
        assert_eq!(enumerate_balanced_by_length(1, None), vec![bv(&[1])]);
        assert_eq!(enumerate_balanced_by_length(2, None), vec![bv(&[1, 1])]);
        assert_eq!(
            enumerate_balanced_by_sum(5),
            vec![bv(&[5]), bv(&[2, 1, 1, 1]), bv(&[1, 1, 1, 1, 1])]
        );
        assert_eq!(enumerate_balanced_by_sum(1), vec![bv(&[1])]);
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=10).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
    }

    #[test]
    fn regular_counts_are_complete_partition_counts() {
        // complete partitions of n - 1 (OEIS A126796): 1, 1, 2, 2, 4, 5, 8, 10
        let counts: Vec<usize> = (2..=9).map(count_regular_by_sum).collect();
        assert_eq!(counts, vec![1, 1, 2, 2, 4, 5, 8, 10]);
    }
}
