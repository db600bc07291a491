//! Explicit diagonalizing matrices for complete and complete multipartite
//! graphs. Every matrix is re-verified in exact arithmetic before it is
//! returned.

use num_traits::Zero;
use thiserror::Error;

use crate::exact::{gram, int, kron, rank, Matrix, RankTracker};
use crate::graphs::{complete, complete_multipartite, PartitionSpec};
use crate::sdiag::{
    eigenspace_s_vectors, verify_witness, Alphabet, DiagWitness, Nodes, Search, SearchBudget,
    SpaceSearch,
};
use crate::spectra::integer_spectrum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WitnessKind {
    /// One all-ones column, the rest orthogonal to it.
    Circulant,
    Sylvester,
    Paley,
    /// `H_2 ⊗ H_m` for a constructible `H_m`.
    Kronecker,
    HadamardSearch,
    /// `{-1,0,1}` entries, orthogonal columns, first column all ones.
    OrthogonalZeroOne,
    MultipartiteBasis,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessMatrix {
    pub kind: WitnessKind,
    pub matrix: Matrix,
}

impl WitnessMatrix {
    pub fn order(&self) -> usize {
        self.matrix.rows()
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.matrix
            .to_i64_rows()
            .expect("witness entries are small")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error(
        "no {{-1,1}} matrix of odd order {0} > 1 has a column orthogonal to the all-ones vector"
    )]
    OddOrder(usize),
    #[error("K_{{{parts}}} has no {{-1,1}} eigenbasis: parts must be equal and both the part size and the part count must be 1 or even")]
    Precondition { parts: String },
    #[error("constructed matrix failed verification: {0}")]
    Verification(String),
}

/// Outcome of a budgeted existence search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessSearch {
    Found(WitnessMatrix),
    /// The search finished: no such matrix exists.
    NotExist,
    BudgetExhausted,
}

fn h2() -> Matrix {
    Matrix::from_int_rows(&[[1, 1], [1, -1]])
}

fn is_one_column(m: &Matrix, j: usize) -> bool {
    m.column(j).iter().all(|x| *x == int(1))
}

fn check_hadamard(m: &Matrix) -> Result<(), ConstructionError> {
    let n = m.rows();
    let rows = m
        .to_i64_rows()
        .ok_or_else(|| ConstructionError::Verification("non-integer entry".into()))?;
    if rows.iter().flatten().any(|&x| x != 1 && x != -1) {
        return Err(ConstructionError::Verification(
            "entry outside {-1,1}".into(),
        ));
    }
    if gram(m) != Matrix::identity(n).scale(&int(n as i64)) {
        return Err(ConstructionError::Verification("H^T H != nI".into()));
    }
    if n > 0 && !is_one_column(m, 0) {
        return Err(ConstructionError::Verification(
            "first column is not all ones".into(),
        ));
    }
    Ok(())
}

/// Negates rows so that the first column is all ones.
fn normalize_first_column(rows: &mut [Vec<i64>]) {
    for r in rows.iter_mut() {
        if r.first().is_some_and(|&x| x < 0) {
            r.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// An invertible `{-1,1}` matrix of order `n` whose first column is all ones
/// and whose other columns sum to zero. Exists exactly for `n = 1` and even `n`.
pub fn circulant_pm1(n: usize) -> Result<WitnessMatrix, ConstructionError> {
    if n > 1 && n % 2 == 1 {
        return Err(ConstructionError::OddOrder(n));
    }
    let matrix = match n {
        0 | 1 => Matrix::identity(n),
        2 => h2(),
        4 => kron(&h2(), &h2()),
        _ => {
            let w: Vec<i64> = (0..n)
                .map(|i| match i {
                    0 => -1,
                    1 => 1,
                    _ if i % 2 == 0 => 1,
                    _ => -1,
                })
                .collect();
            let rows: Vec<Vec<i64>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if j == 0 { 1 } else { w[(j + n - i) % n] })
                        .collect()
                })
                .collect();
            Matrix::from_int_rows(&rows)
        }
    };
    if rank(&matrix) != n {
        return Err(ConstructionError::Verification("matrix is singular".into()));
    }
    for j in 0..n {
        let sum = matrix.column(j).iter().fold(int(0), |a, b| a + b);
        let ok = if j == 0 {
            is_one_column(&matrix, 0)
        } else {
            sum.is_zero()
        };
        if !ok {
            return Err(ConstructionError::Verification(format!(
                "column {j} has the wrong sum"
            )));
        }
    }
    Ok(WitnessMatrix {
        kind: WitnessKind::Circulant,
        matrix,
    })
}

/// Default node budget of the backtracking fallback in [`hadamard`].
pub const HADAMARD_SEARCH_BUDGET: u64 = 2_000_000;

/// A Hadamard matrix of order `n` with first column all ones, if one is found.
pub fn hadamard(n: usize) -> Option<WitnessMatrix> {
    match hadamard_with_budget(
        n,
        SearchBudget {
            max_nodes: HADAMARD_SEARCH_BUDGET,
        },
    ) {
        WitnessSearch::Found(h) => Some(h),
        _ => None,
    }
}

/// Like [`hadamard`], distinguishing a completed search from an exhausted
/// budget.
pub fn hadamard_with_budget(n: usize, budget: SearchBudget) -> WitnessSearch {
    if n > 2 && !n.is_multiple_of(4) {
        return WitnessSearch::NotExist;
    }
    if let Some(h) = hadamard_constructive(n) {
        return WitnessSearch::Found(h);
    }
    let mut nodes = Nodes::new(budget.max_nodes);
    match hadamard_search(n, &mut nodes) {
        Search::Found(rows) => {
            let matrix = Matrix::from_int_rows(&rows);
            check_hadamard(&matrix).expect("search output is Hadamard");
            WitnessSearch::Found(WitnessMatrix {
                kind: WitnessKind::HadamardSearch,
                matrix,
            })
        }
        Search::Exhausted => WitnessSearch::NotExist,
        Search::OutOfBudget => WitnessSearch::BudgetExhausted,
    }
}

/// Sylvester, Paley I and Kronecker doubling only; no search.
pub fn hadamard_constructive(n: usize) -> Option<WitnessMatrix> {
    let (kind, mut rows) = hadamard_rows(n)?;
    normalize_first_column(&mut rows);
    let matrix = Matrix::from_int_rows(&rows);
    if n == 0 {
        return Some(WitnessMatrix { kind, matrix });
    }
    check_hadamard(&matrix).ok()?;
    Some(WitnessMatrix { kind, matrix })
}

fn hadamard_rows(n: usize) -> Option<(WitnessKind, Vec<Vec<i64>>)> {
    if n == 0 {
        return Some((WitnessKind::Sylvester, Vec::new()));
    }
    if n.is_power_of_two() {
        let mut h = vec![vec![1i64]];
        while h.len() < n {
            let m = h.len();
            h = (0..2 * m)
                .map(|i| {
                    (0..2 * m)
                        .map(|j| {
                            let s = if i >= m && j >= m { -1 } else { 1 };
                            s * h[i % m][j % m]
                        })
                        .collect()
                })
                .collect();
        }
        return Some((WitnessKind::Sylvester, h));
    }
    if !n.is_multiple_of(4) {
        return None;
    }
    if let Some(field) = GaloisField::new(n - 1) {
        if field.order % 4 == 3 {
            return Some((WitnessKind::Paley, paley_one(&field)));
        }
    }
    let (_, half) = hadamard_rows(n / 2)?;
    let m = n / 2;
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let s = if i >= m && j >= m { -1 } else { 1 };
                    s * half[i % m][j % m]
                })
                .collect()
        })
        .collect();
    Some((WitnessKind::Kronecker, rows))
}

/// `GF(p^k)` with elements encoded as base-`p` digit strings of polynomial
/// coefficients modulo a fixed irreducible polynomial.
struct GaloisField {
    order: usize,
    p: usize,
    k: usize,
    /// Low coefficients of the monic irreducible modulus of degree `k`.
    modulus: Vec<usize>,
}

fn prime_power(q: usize) -> Option<(usize, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|&d| q.is_multiple_of(d))?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

impl GaloisField {
    fn new(q: usize) -> Option<Self> {
        let (p, k) = prime_power(q)?;
        let mut field = GaloisField {
            order: q,
            p,
            k,
            modulus: vec![0; k],
        };
        if k == 1 {
            return Some(field);
        }
        // a monic polynomial of degree k is irreducible iff it has no roots
        // and no factor of degree 2..=k/2; test by trial multiplication
        let pk = p.pow(k as u32);
        for low in 0..pk {
            field.modulus = field.digits(low);
            if field.is_irreducible() {
                return Some(field);
            }
        }
        None
    }

    fn digits(&self, mut x: usize) -> Vec<usize> {
        let mut d = vec![0; self.k];
        for c in &mut d {
            *c = x % self.p;
            x /= self.p;
        }
        d
    }

    fn encode(&self, d: &[usize]) -> usize {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn poly_mul_raw(&self, a: &[usize], b: &[usize]) -> Vec<usize> {
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % self.p;
            }
        }
        out
    }

    fn is_irreducible(&self) -> bool {
        let mut full: Vec<usize> = self.modulus.clone();
        full.push(1);
        // monic factors of degree d <= k/2, cofactor of degree k-d
        for d in 1..=self.k / 2 {
            let count_a = self.p.pow(d as u32);
            let count_b = self.p.pow((self.k - d) as u32);
            for la in 0..count_a {
                let mut a = digits_of(la, self.p, d);
                a.push(1);
                for lb in 0..count_b {
                    let mut b = digits_of(lb, self.p, self.k - d);
                    b.push(1);
                    if self.poly_mul_raw(&a, &b) == full {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn add(&self, a: usize, b: usize) -> usize {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (x, y) = (self.digits(a), self.digits(b));
        let s: Vec<usize> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        self.encode(&s)
    }

    fn neg(&self, a: usize) -> usize {
        if self.k == 1 {
            return (self.p - a) % self.p;
        }
        let s: Vec<usize> = self
            .digits(a)
            .iter()
            .map(|u| (self.p - u) % self.p)
            .collect();
        self.encode(&s)
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        if self.k == 1 {
            return a * b % self.p;
        }
        let mut prod = self.poly_mul_raw(&self.digits(a), &self.digits(b));
        // reduce using x^k = -modulus
        for deg in (self.k..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for (i, &m) in self.modulus.iter().enumerate() {
                let t = &mut prod[deg - self.k + i];
                *t = (*t + (self.p - m) * c) % self.p;
            }
        }
        prod.truncate(self.k);
        self.encode(&prod)
    }

    /// `χ(a)`: 0 at 0, 1 on nonzero squares, -1 otherwise.
    fn quadratic_character(&self) -> Vec<i64> {
        let mut chi = vec![-1i64; self.order];
        chi[0] = 0;
        for x in 1..self.order {
            chi[self.mul(x, x)] = 1;
        }
        chi
    }
}

fn digits_of(mut x: usize, p: usize, len: usize) -> Vec<usize> {
    let mut d = vec![0; len];
    for c in &mut d {
        *c = x % p;
        x /= p;
    }
    d
}

/// Paley construction I for `q ≡ 3 (mod 4)`: `I + [[0, 1^T], [-1, Q]]` with
/// `Q[a][b] = χ(a - b)`.
fn paley_one(field: &GaloisField) -> Vec<Vec<i64>> {
    let q = field.order;
    let chi = field.quadratic_character();
    let n = q + 1;
    let mut rows = vec![vec![0i64; n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = match (i, j) {
                (0, 0) => 1,
                (0, _) => 1,
                (_, 0) => -1,
                _ => {
                    let s = chi[field.add(i - 1, field.neg(j - 1))];
                    if i == j {
                        s + 1
                    } else {
                        s
                    }
                }
            };
        }
    }
    rows
}

/// Backtracking over normalized rows: each new row starts with `1` and is
/// orthogonal to every earlier row. Rows are filled entry by entry and cut as
/// soon as some partial inner product can no longer reach zero.
fn hadamard_search(n: usize, nodes: &mut Nodes) -> Search<Vec<Vec<i64>>> {
    if n == 0 {
        return Search::Found(Vec::new());
    }
    let mut rows = vec![vec![1i64; n]];
    if hadamard_extend(n, &mut rows, nodes) {
        return Search::Found(rows);
    }
    if nodes.exhausted() {
        Search::OutOfBudget
    } else {
        Search::Exhausted
    }
}

fn hadamard_extend(n: usize, rows: &mut Vec<Vec<i64>>, nodes: &mut Nodes) -> bool {
    if rows.len() == n {
        return true;
    }
    let mut row = vec![0i64; n];
    row[0] = 1;
    let mut dots: Vec<i64> = rows.iter().map(|r| r[0]).collect();
    fill_row(n, 1, &mut row, &mut dots, rows, nodes)
}

fn fill_row(
    n: usize,
    pos: usize,
    row: &mut Vec<i64>,
    dots: &mut [i64],
    rows: &mut Vec<Vec<i64>>,
    nodes: &mut Nodes,
) -> bool {
    if !nodes.tick() {
        return false;
    }
    let remaining = (n - pos) as i64;
    if dots.iter().any(|d| d.abs() > remaining) {
        return false;
    }
    if pos == n {
        rows.push(row.clone());
        if hadamard_extend(n, rows, nodes) {
            return true;
        }
        rows.pop();
        return false;
    }
    for s in [1i64, -1] {
        row[pos] = s;
        for (d, r) in dots.iter_mut().zip(rows.iter()) {
            *d += s * r[pos];
        }
        let found = fill_row(n, pos + 1, row, dots, rows, nodes);
        for (d, r) in dots.iter_mut().zip(rows.iter()) {
            *d -= s * r[pos];
        }
        if found {
            return true;
        }
    }
    false
}

/// Default node budget of [`orthogonal_zero_one_witness`].
pub const ORTHOGONAL_SEARCH_BUDGET: u64 = 50_000_000;

/// Searches for an `n x n` `{-1,0,1}` matrix with mutually orthogonal
/// columns, one of them all ones. Such a matrix exists exactly when `K_n` has
/// `{-1,0,1}`-bandwidth 1.
pub fn orthogonal_zero_one_witness(n: usize, budget: SearchBudget) -> WitnessSearch {
    if n <= 1 {
        return WitnessSearch::Found(WitnessMatrix {
            kind: WitnessKind::OrthogonalZeroOne,
            matrix: Matrix::ones(n, n),
        });
    }
    let spectrum = integer_spectrum(&complete(n));
    let space = spectrum.eigenpair(n as u64).expect("K_n has eigenvalue n");
    let cands = eigenspace_s_vectors(&space.basis, &Alphabet::neg_zero_one());
    let search = SpaceSearch::new(cands, n - 1, Some(&space.basis));
    let mut nodes = Nodes::new(budget.max_nodes);
    match search.orthogonal_basis(&mut nodes) {
        Search::Found(order) => {
            let mut columns = vec![vec![1i64; n]];
            columns.extend(order.iter().map(|&i| search.cands[i].clone()));
            let matrix = Matrix::from_int_columns(n, &columns);
            let g = gram(&matrix);
            assert!(
                g.is_diagonal() && rank(&matrix) == n,
                "orthogonal search output verifies"
            );
            WitnessSearch::Found(WitnessMatrix {
                kind: WitnessKind::OrthogonalZeroOne,
                matrix,
            })
        }
        Search::Exhausted => WitnessSearch::NotExist,
        Search::OutOfBudget => WitnessSearch::BudgetExhausted,
    }
}

/// The `{-1,1}` eigenbasis of `K_{v,...,v}` (`p` parts of size `v`, both `1`
/// or even), assembled from [`circulant_pm1`] columns.
///
/// For the in-part eigenspace the spanning vectors combine one non-constant
/// circulant column per part; both signs of each column are used, which is
/// needed when `v = 2` and the circulant has a single such column.
pub fn multipartite_s_basis(spec: &PartitionSpec) -> Result<DiagWitness, ConstructionError> {
    let parts = spec.parts();
    let p = parts.len();
    let v = parts[0];
    let ok_size = |x: usize| x == 1 || x.is_multiple_of(2);
    if parts.iter().any(|&x| x != v) || !ok_size(v) || !ok_size(p) {
        let names: Vec<String> = parts.iter().map(usize::to_string).collect();
        return Err(ConstructionError::Precondition {
            parts: names.join(","),
        });
    }
    let n = p * v;
    let in_part = ((p - 1) * v) as u64;
    let across = (p * v) as u64;
    let mut columns: Vec<Vec<i64>> = vec![vec![1; n]];
    let mut eigenvalues = vec![0u64];

    if v > 1 {
        let x = circulant_pm1(v)?.rows();
        let xs: Vec<Vec<i64>> = (1..v).map(|j| x.iter().map(|r| r[j]).collect()).collect();
        // choice[i] = (column, sign) for block i
        let target = p * (v - 1);
        let mut tracker = RankTracker::new(n);
        let choices = (v - 1) * 2;
        let mut digits = vec![0usize; p];
        'outer: loop {
            let vec: Vec<i64> = digits
                .iter()
                .flat_map(|&d| {
                    let sign = if d % 2 == 0 { 1 } else { -1 };
                    xs[d / 2].iter().map(move |&e| sign * e)
                })
                .collect();
            if tracker.insert(&vec) {
                columns.push(vec);
                eigenvalues.push(in_part);
                if tracker.rank() == target {
                    break;
                }
            }
            for d in digits.iter_mut() {
                *d += 1;
                if *d < choices {
                    continue 'outer;
                }
                *d = 0;
            }
            break;
        }
    }
    if p > 1 {
        let x = circulant_pm1(p)?.rows();
        for j in 1..p {
            columns.push(
                x.iter()
                    .flat_map(|row| std::iter::repeat_n(row[j], v))
                    .collect(),
            );
            eigenvalues.push(across);
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| eigenvalues[i]);
    let witness = DiagWitness {
        n,
        columns: order.iter().map(|&i| columns[i].clone()).collect(),
        eigenvalues: order.iter().map(|&i| eigenvalues[i]).collect(),
    };
    verify_witness(&complete_multipartite(spec), &Alphabet::neg_one(), &witness)
        .map_err(|e| ConstructionError::Verification(e.to_string()))?;
    Ok(witness)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parts(p: &[usize]) -> PartitionSpec {
        PartitionSpec::new(p.to_vec()).unwrap()
    }

    #[test]
    fn circulant_examples() {
        let w = circulant_pm1(6).unwrap();
        assert_eq!(w.order(), 6);
        assert_eq!(rank(&w.matrix), 6);
        let rows = w.rows();
        assert!(rows.iter().all(|r| r[0] == 1));
        for j in 1..6 {
            assert_eq!(rows.iter().map(|r| r[j]).sum::<i64>(), 0);
        }
        assert_eq!(circulant_pm1(3), Err(ConstructionError::OddOrder(3)));
        assert_eq!(
            circulant_pm1(2).unwrap().rows(),
            vec![vec![1, 1], vec![1, -1]]
        );
        assert_eq!(circulant_pm1(1).unwrap().rows(), vec![vec![1]]);
    }

    #[test]
    fn circulant_for_every_even_order() {
        for n in (2..=24).step_by(2) {
            let rows = circulant_pm1(n).unwrap().rows();
            assert!(rows.iter().flatten().all(|&x| x == 1 || x == -1));
        }
        for n in (3..=23).step_by(2) {
            assert!(circulant_pm1(n).is_err());
        }
    }

    #[test]
    fn hadamard_examples() {
        let h4 = hadamard(4).unwrap();
        assert_eq!(h4.kind, WitnessKind::Sylvester);
        assert_eq!(gram(&h4.matrix), Matrix::identity(4).scale(&int(4)));
        let h12 = hadamard(12).unwrap();
        assert_eq!(h12.kind, WitnessKind::Paley);
        assert_eq!(gram(&h12.matrix), Matrix::identity(12).scale(&int(12)));
        assert!(hadamard(3).is_none());
        assert!(hadamard(6).is_none());
        assert_eq!(hadamard(1).unwrap().rows(), vec![vec![1]]);
    }

    #[test]
    fn hadamard_constructive_orders() {
        // 28 = 27 + 1 needs GF(27); 40 = 2 * 20 uses doubling
        for n in [2, 8, 16, 20, 24, 28, 32, 40, 44, 48] {
            let h = hadamard_constructive(n).unwrap_or_else(|| panic!("order {n}"));
            check_hadamard(&h.matrix).unwrap();
        }
        assert_eq!(hadamard_constructive(28).unwrap().kind, WitnessKind::Paley);
        assert_eq!(
            hadamard_constructive(40).unwrap().kind,
            WitnessKind::Kronecker
        );
        assert!(hadamard_constructive(36).is_none());
    }

    #[test]
    fn hadamard_search_small_orders() {
        let mut nodes = Nodes::new(1_000_000);
        for n in [1, 2, 4, 8, 12] {
            match hadamard_search(n, &mut nodes) {
                Search::Found(rows) => check_hadamard(&Matrix::from_int_rows(&rows)).unwrap(),
                other => panic!("order {n}: {other:?}"),
            }
        }
        assert_eq!(
            hadamard_search(6, &mut Nodes::new(1_000_000)),
            Search::Exhausted
        );
        assert_eq!(
            hadamard_with_budget(36, SearchBudget { max_nodes: 10 }),
            WitnessSearch::BudgetExhausted
        );
    }

    #[test]
    fn galois_field_arithmetic() {
        for q in [4, 8, 9, 25, 27] {
            let f = GaloisField::new(q).unwrap();
            // every nonzero element has an inverse
            for a in 1..q {
                assert!((1..q).any(|b| f.mul(a, b) == 1), "GF({q}) element {a}");
            }
            let squares = f.quadratic_character().iter().filter(|&&c| c == 1).count();
            // in characteristic 2 squaring is a bijection
            assert_eq!(squares, if q % 2 == 0 { q - 1 } else { (q - 1) / 2 });
        }
        assert!(GaloisField::new(12).is_none());
    }

    #[test]
    fn orthogonal_zero_one_examples() {
        let budget = SearchBudget {
            max_nodes: ORTHOGONAL_SEARCH_BUDGET,
        };
        match orthogonal_zero_one_witness(4, budget) {
            WitnessSearch::Found(w) => {
                assert!(gram(&w.matrix).is_diagonal());
                assert!(is_one_column(&w.matrix, 0));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            orthogonal_zero_one_witness(3, budget),
            WitnessSearch::NotExist
        );
        assert_eq!(
            orthogonal_zero_one_witness(6, budget),
            WitnessSearch::NotExist
        );
    }

    #[test]
    fn multipartite_examples() {
        let w = multipartite_s_basis(&parts(&[2, 2])).unwrap();
        assert_eq!(w.eigenvalues, vec![0, 2, 2, 4]);
        assert!(matches!(
            multipartite_s_basis(&parts(&[2, 1, 1, 1, 1])),
            Err(ConstructionError::Precondition { .. })
        ));
        let w = multipartite_s_basis(&parts(&[1, 1])).unwrap();
        assert_eq!(w.columns, vec![vec![1, 1], vec![1, -1]]);
        for spec in [[2, 2, 2, 2], [4, 4, 1, 1]] {
            let spec = parts(&spec);
            let ok = multipartite_s_basis(&spec).is_ok();
            assert_eq!(ok, spec.parts().iter().all(|&x| x == spec.parts()[0]));
        }
        multipartite_s_basis(&parts(&[4, 4, 4, 4])).unwrap();
        multipartite_s_basis(&parts(&[6, 6])).unwrap();
        multipartite_s_basis(&parts(&[1, 1, 1, 1, 1, 1])).unwrap();
    }
}
