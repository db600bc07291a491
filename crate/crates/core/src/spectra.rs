//! Exact integer spectra of graph Laplacians.
//!
//! Laplacian eigenvalues lie in `[0, n]`, so the integer candidates are just
//! `0..=n`: each is tested by an exact nullity computation and no
//! characteristic polynomial is ever formed.

use num_traits::ToPrimitive;

use crate::exact::{int, nullspace_basis, rank, Matrix};
use crate::graphs::{laplacian, Graph, PartitionSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eigenpair {
    pub value: u64,
    pub multiplicity: usize,
    /// `n x multiplicity`; columns are canonical integer eigenvectors.
    pub basis: Matrix,
}

impl Eigenpair {
    /// Basis columns as integer vectors.
    pub fn basis_vectors(&self) -> Vec<Vec<i64>> {
        let rows = self
            .basis
            .to_i64_rows()
            .expect("eigenvector entries exceed i64");
        (0..self.basis.cols())
            .map(|j| rows.iter().map(|r| r[j]).collect())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    pub n: usize,
    /// Strictly increasing by value.
    pub eigenpairs: Vec<Eigenpair>,
    /// Whether the integer eigenvalues account for all `n` dimensions.
    pub integral: bool,
}

impl Spectrum {
    pub fn value_multiplicities(&self) -> Vec<(u64, usize)> {
        self.eigenpairs
            .iter()
            .map(|e| (e.value, e.multiplicity))
            .collect()
    }

    pub fn multiplicity(&self, value: u64) -> usize {
        self.eigenpairs
            .iter()
            .find(|e| e.value == value)
            .map_or(0, |e| e.multiplicity)
    }

    pub fn eigenpair(&self, value: u64) -> Option<&Eigenpair> {
        self.eigenpairs.iter().find(|e| e.value == value)
    }

    pub fn max_multiplicity(&self) -> usize {
        self.eigenpairs
            .iter()
            .map(|e| e.multiplicity)
            .max()
            .unwrap_or(0)
    }

    /// `sum(value * multiplicity)`; equals the trace `2|E|` when integral.
    pub fn weighted_sum(&self) -> u64 {
        self.eigenpairs
            .iter()
            .map(|e| e.value * e.multiplicity as u64)
            .sum()
    }
}

fn basis_matrix(n: usize, vectors: &[Vec<i64>]) -> Matrix {
    Matrix::from_int_columns(n, vectors)
}

pub fn integer_spectrum(g: &Graph) -> Spectrum {
    let n = g.n();
    let l = laplacian(g);
    let mut eigenpairs = Vec::new();
    let mut found = 0;
    for value in 0..=n as u64 {
        if found == n {
            break;
        }
        let shifted = l
            .sub(&Matrix::identity(n).scale(&int(value as i64)))
            .expect("square");
        let nullity = n - rank(&shifted);
        if nullity == 0 {
            continue;
        }
        let vectors: Vec<Vec<i64>> = nullspace_basis(&shifted)
            .into_iter()
            .map(|v| {
                v.iter()
                    .map(|x| x.to_i64().expect("eigenvector entries exceed i64"))
                    .collect()
            })
            .collect();
        debug_assert_eq!(vectors.len(), nullity);
        found += nullity;
        eigenpairs.push(Eigenpair {
            value,
            multiplicity: nullity,
            basis: basis_matrix(n, &vectors),
        });
    }
    Spectrum {
        n,
        eigenpairs,
        integral: found == n,
    }
}

fn primitive(mut v: Vec<i64>) -> Vec<i64> {
    let g = v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
    if g > 1 {
        v.iter_mut().for_each(|x| *x /= g);
    }
    if v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    v
}

/// Closed-form spectrum of `K_{v1,...,vp}` (vertex layout as in
/// [`crate::graphs::complete_multipartite`]):
///
/// * `0` on the all-ones vector;
/// * `total - v_i` on the in-block differences `e_j - e_{j+1}` of block `i`;
/// * `total` on the block-constant vectors `(c_1 1, ..., c_p 1)` with
///   `sum c_i v_i = 0`.
///
/// Coinciding values are merged.
pub fn multipartite_spectrum_oracle(spec: &PartitionSpec) -> Spectrum {
    let parts = spec.parts();
    let n = spec.total();
    let offsets: Vec<usize> = parts
        .iter()
        .scan(0, |acc, &v| {
            let start = *acc;
            *acc += v;
            Some(start)
        })
        .collect();
    let mut groups: Vec<(u64, Vec<Vec<i64>>)> = Vec::new();
    let mut push = |value: u64, v: Vec<i64>| match groups.iter_mut().find(|(x, _)| *x == value) {
        Some((_, vs)) => vs.push(v),
        None => groups.push((value, vec![v])),
    };
    push(0, vec![1; n]);
    for (i, &vi) in parts.iter().enumerate() {
        for j in 0..vi.saturating_sub(1) {
            let mut v = vec![0; n];
            v[offsets[i] + j] = 1;
            v[offsets[i] + j + 1] = -1;
            push(spec.co_size(i) as u64, v);
        }
    }
    for j in 1..parts.len() {
        let mut v = vec![0; n];
        for x in &mut v[offsets[0]..offsets[0] + parts[0]] {
            *x = parts[j] as i64;
        }
        for x in &mut v[offsets[j]..offsets[j] + parts[j]] {
            *x = -(parts[0] as i64);
        }
        push(n as u64, primitive(v));
    }
    groups.sort_by_key(|(value, _)| *value);
    let eigenpairs = groups
        .into_iter()
        .map(|(value, vs)| Eigenpair {
            value,
            multiplicity: vs.len(),
            basis: basis_matrix(n, &vs),
        })
        .collect();
    Spectrum {
        n,
        eigenpairs,
        integral: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{complete, complete_multipartite, cycle, path};

    fn parts(p: &[usize]) -> PartitionSpec {
        PartitionSpec::new(p.to_vec()).unwrap()
    }

    #[test]
    fn complete_graph_spectrum() {
        let s = integer_spectrum(&complete(4));
        assert!(s.integral);
        assert_eq!(s.value_multiplicities(), vec![(0, 1), (4, 3)]);
    }

    #[test]
    fn path_spectrum() {
        // det(L - xI) for P3 = -x(x-1)(x-3)
        let s = integer_spectrum(&path(3));
        assert!(s.integral);
        assert_eq!(s.value_multiplicities(), vec![(0, 1), (1, 1), (3, 1)]);
    }

    #[test]
    fn five_cycle_is_not_integral() {
        let s = integer_spectrum(&cycle(5));
        assert!(!s.integral);
        assert_eq!(s.value_multiplicities(), vec![(0, 1)]);
    }

    #[test]
    fn eigenvectors_satisfy_equation() {
        let g = complete_multipartite(&parts(&[3, 2, 2, 1]));
        let l = laplacian(&g);
        let s = integer_spectrum(&g);
        assert!(s.integral);
        for e in &s.eigenpairs {
            let lhs = l.mul(&e.basis).unwrap();
            assert_eq!(lhs, e.basis.scale(&int(e.value as i64)));
            assert_eq!(rank(&e.basis), e.multiplicity);
        }
    }

    #[test]
    fn oracle_examples() {
        let s = multipartite_spectrum_oracle(&parts(&[2, 1, 1, 1, 1]));
        let four = s.eigenpair(4).unwrap();
        assert_eq!(four.basis_vectors(), vec![vec![1, -1, 0, 0, 0, 0]]);

        let s = multipartite_spectrum_oracle(&parts(&[1, 1, 1, 1, 1]));
        assert_eq!(s.value_multiplicities(), vec![(0, 1), (5, 4)]);

        let s = multipartite_spectrum_oracle(&parts(&[2, 2]));
        assert_eq!(s.value_multiplicities(), vec![(0, 1), (2, 2), (4, 1)]);
        let direct = integer_spectrum(&cycle(4));
        assert_eq!(direct.value_multiplicities(), s.value_multiplicities());
    }

    #[test]
    fn oracle_single_part_merges_into_zero() {
        let s = multipartite_spectrum_oracle(&parts(&[3]));
        assert_eq!(s.value_multiplicities(), vec![(0, 3)]);
    }

    #[test]
    fn oracle_bases_are_eigenvectors() {
        let spec = parts(&[4, 2, 1, 1]);
        let l = laplacian(&complete_multipartite(&spec));
        for e in &multipartite_spectrum_oracle(&spec).eigenpairs {
            assert_eq!(
                l.mul(&e.basis).unwrap(),
                e.basis.scale(&int(e.value as i64))
            );
            assert_eq!(rank(&e.basis), e.multiplicity);
        }
    }
}
