//! Deciding S-diagonalizability and computing S-bandwidth.
//!
//! Eigenvectors from distinct eigenspaces of a symmetric matrix are
//! orthogonal, so the only nonzero off-diagonal Gram entries of a
//! diagonalizing matrix pair up columns from the same eigenspace. Placing each
//! eigenspace's columns contiguously is therefore optimal, and the bandwidth of
//! the whole graph is the maximum over eigenspaces of the smallest bandwidth
//! achievable inside that eigenspace. Each eigenspace is searched on its own:
//!
//! 1. enumerate every S-vector in the eigenspace ([`eigenspace_s_vectors`]);
//! 2. a greedy ordering gives an upper bound;
//! 3. bandwidth 1 is a clique search for `d` mutually orthogonal candidates;
//! 4. each `k` between 2 and the upper bound is a branch-and-bound over
//!    ordered bases in which columns `k` or more apart are orthogonal.
//!
//! All searches share one node budget per query. When it runs out the best
//! known ordering is returned and flagged non-optimal.

use std::fmt;
use std::str::FromStr;

use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::bits::BitSet;
use crate::constructions;
use crate::exact::{
    gram, int, inverse, matrix_bandwidth, rank, rref, Matrix, RankTracker, Rational,
};
use crate::graphs::{connected_components, laplacian, Graph};
use crate::gray::GrayWalk;
use crate::spectra::{integer_spectrum, Eigenpair, Spectrum};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphabetError {
    #[error("alphabet must contain at least one value")]
    Empty,
    #[error("cannot parse alphabet value {0:?}")]
    Parse(String),
}

/// A finite set of integers that matrix entries are drawn from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    values: Vec<i64>,
}

impl Alphabet {
    pub fn new(values: impl IntoIterator<Item = i64>) -> Result<Self, AlphabetError> {
        let mut values: Vec<i64> = values.into_iter().collect();
        values.sort_unstable();
        values.dedup();
        if values.is_empty() {
            return Err(AlphabetError::Empty);
        }
        Ok(Alphabet { values })
    }

    /// `{-1, 0, 1}`
    pub fn neg_zero_one() -> Self {
        Alphabet {
            values: vec![-1, 0, 1],
        }
    }

    /// `{-1, 1}`
    pub fn neg_one() -> Self {
        Alphabet {
            values: vec![-1, 1],
        }
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn contains(&self, x: i64) -> bool {
        self.values.binary_search(&x).is_ok()
    }

    /// Whether `-S = S`.
    pub fn is_symmetric(&self) -> bool {
        self.values.iter().all(|&x| self.contains(-x))
    }

    pub fn has_zero(&self) -> bool {
        self.contains(0)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Every `P` over `self` is also a `P` over `other`.
    pub fn is_subset_of(&self, other: &Alphabet) -> bool {
        self.values.iter().all(|&x| other.contains(x))
    }
}

impl FromStr for Alphabet {
    type Err = AlphabetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
        let values = inner
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<i64>()
                    .map_err(|_| AlphabetError::Parse(t.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Alphabet::new(values)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(i64::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// A bandwidth value; `Infinite` when no diagonalizing matrix exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bandwidth {
    Finite(usize),
    Infinite,
}

impl Bandwidth {
    pub fn finite(self) -> Option<usize> {
        match self {
            Bandwidth::Finite(k) => Some(k),
            Bandwidth::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        self != Bandwidth::Infinite
    }

    /// Integer code used in record files: `-1` for infinity.
    pub fn code(self) -> i64 {
        match self {
            Bandwidth::Finite(k) => k as i64,
            Bandwidth::Infinite => -1,
        }
    }

    pub fn from_code(code: i64) -> Self {
        if code < 0 {
            Bandwidth::Infinite
        } else {
            Bandwidth::Finite(code as usize)
        }
    }
}

impl fmt::Display for Bandwidth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bandwidth::Finite(k) => write!(f, "{k}"),
            Bandwidth::Infinite => write!(f, "∞"),
        }
    }
}

/// A diagonalizing matrix stored by columns, each tagged with its eigenvalue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagWitness {
    pub n: usize,
    pub columns: Vec<Vec<i64>>,
    pub eigenvalues: Vec<u64>,
}

impl DiagWitness {
    pub fn matrix(&self) -> Matrix {
        Matrix::from_int_columns(self.n, &self.columns)
    }

    /// Row-major entries.
    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|i| self.columns.iter().map(|c| c[i]).collect())
            .collect()
    }

    /// Bandwidth of `P^T P`, computed on integers.
    pub fn gram_bandwidth(&self) -> usize {
        let m = self.columns.len();
        let mut k = 1;
        for i in 0..m {
            for j in i + 1..m {
                if dot(&self.columns[i], &self.columns[j]) != 0 {
                    k = k.max(j - i + 1);
                }
            }
        }
        k
    }

    pub fn negate_column(&mut self, j: usize) {
        for x in &mut self.columns[j] {
            *x = -*x;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerificationError {
    #[error("witness has shape {rows}x{cols}, expected {n}x{n}")]
    Shape { rows: usize, cols: usize, n: usize },
    #[error("entry {value} at ({row},{col}) is not in the alphabet")]
    EntryOutsideAlphabet { row: usize, col: usize, value: i64 },
    #[error("column {col} is not an eigenvector for eigenvalue {value}")]
    NotEigenvector { col: usize, value: u64 },
    #[error("witness matrix is singular")]
    Singular,
    #[error("claimed bandwidth {claimed} but P^T P has bandwidth {actual}")]
    BandwidthMismatch { claimed: usize, actual: usize },
}

/// Re-verifies a witness from scratch in exact arithmetic and returns the
/// bandwidth of its Gram matrix.
pub fn verify_witness(
    g: &Graph,
    s: &Alphabet,
    w: &DiagWitness,
) -> Result<usize, VerificationError> {
    let n = g.n();
    if w.n != n
        || w.columns.len() != n
        || w.eigenvalues.len() != n
        || w.columns.iter().any(|c| c.len() != n)
    {
        return Err(VerificationError::Shape {
            rows: w.n,
            cols: w.columns.len(),
            n,
        });
    }
    for (col, c) in w.columns.iter().enumerate() {
        if let Some(row) = c.iter().position(|&x| !s.contains(x)) {
            return Err(VerificationError::EntryOutsideAlphabet {
                row,
                col,
                value: c[row],
            });
        }
    }
    let p = w.matrix();
    let lp = laplacian(g).mul(&p).expect("square");
    let lambda = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            int(w.eigenvalues[i] as i64)
        } else {
            Rational::zero()
        }
    });
    let p_lambda = p.mul(&lambda).expect("square");
    for col in 0..n {
        if lp.column(col) != p_lambda.column(col) {
            return Err(VerificationError::NotEigenvector {
                col,
                value: w.eigenvalues[col],
            });
        }
    }
    if rank(&p) < n {
        return Err(VerificationError::Singular);
    }
    Ok(matrix_bandwidth(&gram(&p)).expect("gram is square"))
}

/// Like [`verify_witness`] but also checks a claimed bandwidth.
pub fn verify_bandwidth(
    g: &Graph,
    s: &Alphabet,
    w: &DiagWitness,
    claimed: usize,
) -> Result<(), VerificationError> {
    let actual = verify_witness(g, s, w)?;
    if actual != claimed {
        return Err(VerificationError::BandwidthMismatch { claimed, actual });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Branch-and-bound nodes allowed per query.
    pub max_nodes: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 20_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub budget: SearchBudget,
    /// Skip the search when a cheap necessary condition already fails.
    pub use_necessary_conditions: bool,
    /// Certify complete graphs from a Hadamard matrix when one is known.
    pub use_constructions: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: SearchBudget::default(),
            use_necessary_conditions: true,
            use_constructions: true,
        }
    }
}

impl SearchOptions {
    pub fn with_budget(max_nodes: u64) -> Self {
        SearchOptions {
            budget: SearchBudget { max_nodes },
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandwidthResult {
    pub bandwidth: Bandwidth,
    /// `false` when the budget ran out; `bandwidth` is then an upper bound.
    pub optimal: bool,
    pub witness: Option<DiagWitness>,
    /// `matrix_bandwidth(gram(P))` of the witness.
    pub gram_bandwidth_certificate: Option<usize>,
    pub nodes: u64,
}

impl BandwidthResult {
    fn infinite() -> Self {
        BandwidthResult {
            bandwidth: Bandwidth::Infinite,
            optimal: true,
            witness: None,
            gram_bandwidth_certificate: None,
            nodes: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagOutcome {
    pub diagonalizable: bool,
    pub witness: Option<DiagWitness>,
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sign_canonical(v: &[i64]) -> bool {
    v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

/// Every nonzero vector with entries in `s` that lies in the column span of
/// `basis`, up to global sign when `-S = S`.
///
/// The span is put in reduced form: its pivot coordinates are free and every
/// other coordinate is a fixed combination of them. The free coordinates walk
/// all of `S^d` in Gray-code order, the forced coordinates are updated
/// incrementally, and a vector is kept when every forced coordinate lands in
/// `S`. Output is sorted lexicographically descending.
pub fn eigenspace_s_vectors(basis: &Matrix, s: &Alphabet) -> Vec<Vec<i64>> {
    let n = basis.rows();
    let d = basis.cols();
    if d == 0 {
        return Vec::new();
    }
    let (r, pivots) = rref(&basis.transpose());
    assert_eq!(pivots.len(), d, "basis must have full column rank");
    let den = (0..d)
        .flat_map(|i| r.row(i).iter())
        .fold(num_bigint::BigInt::from(1), |acc, x| {
            num_integer::Integer::lcm(&acc, x.denom())
        })
        .to_i64()
        .expect("reduced form denominators exceed i64");
    let rows: Vec<Vec<i64>> = (0..d)
        .map(|i| {
            r.row(i)
                .iter()
                .map(|x| {
                    (x * int(den))
                        .to_integer()
                        .to_i64()
                        .expect("entry exceeds i64")
                })
                .collect()
        })
        .collect();
    let vals = s.values();
    let mut acc: Vec<i64> = (0..n)
        .map(|j| (0..d).map(|k| vals[0] * rows[k][j]).sum())
        .collect();
    let symmetric = s.is_symmetric();
    let mut out = Vec::new();
    let mut walk = GrayWalk::new(vals.len(), d);
    loop {
        if acc.iter().any(|&x| x != 0) && acc.iter().all(|&x| x % den == 0 && s.contains(x / den)) {
            let v: Vec<i64> = acc.iter().map(|&x| x / den).collect();
            if !symmetric || sign_canonical(&v) {
                out.push(v);
            }
        }
        let Some((k, old, new)) = walk.step() else {
            break;
        };
        let delta = vals[new] - vals[old];
        for (a, &x) in acc.iter_mut().zip(&rows[k]) {
            *a += delta * x;
        }
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Decides S-diagonalizability; the witness picks a basis greedily inside
/// each eigenspace.
pub fn is_s_diagonalizable(g: &Graph, s: &Alphabet) -> DiagOutcome {
    let spectrum = integer_spectrum(g);
    if !spectrum.integral {
        return DiagOutcome {
            diagonalizable: false,
            witness: None,
        };
    }
    let mut columns = Vec::with_capacity(g.n());
    let mut eigenvalues = Vec::with_capacity(g.n());
    for e in &spectrum.eigenpairs {
        let cands = eigenspace_s_vectors(&e.basis, s);
        let mut tracker = RankTracker::new(g.n());
        for c in &cands {
            if tracker.insert(c) {
                columns.push(c.clone());
                eigenvalues.push(e.value);
                if tracker.rank() == e.multiplicity {
                    break;
                }
            }
        }
        if tracker.rank() < e.multiplicity {
            return DiagOutcome {
                diagonalizable: false,
                witness: None,
            };
        }
    }
    DiagOutcome {
        diagonalizable: true,
        witness: Some(DiagWitness {
            n: g.n(),
            columns,
            eigenvalues,
        }),
    }
}

/// Cheap verdicts computed before any search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NecessaryReport {
    pub laplacian_integral: bool,
    pub components: usize,
    /// `max{c, n - c}`: no finite bandwidth can exceed it.
    pub bandwidth_bound: usize,
    /// Odd eigenvalues, which rule out `{-1,1}` diagonalization.
    pub odd_eigenvalues: Vec<u64>,
    /// A connected graph on an odd number `n > 1` of vertices has no
    /// `{-1,1}` vector with as many `1`s as `-1`s.
    pub parity_obstruction: bool,
    /// Whether some condition already rules out diagonalization over `S`.
    pub pruned: bool,
}

pub fn necessary_conditions(g: &Graph, s: &Alphabet) -> NecessaryReport {
    necessary_from_spectrum(g, s, &integer_spectrum(g))
}

fn necessary_from_spectrum(g: &Graph, s: &Alphabet, spectrum: &Spectrum) -> NecessaryReport {
    let n = g.n();
    let c = connected_components(g).len();
    let pm_one = *s == Alphabet::neg_one();
    let odd_eigenvalues: Vec<u64> = if pm_one {
        spectrum
            .eigenpairs
            .iter()
            .map(|e| e.value)
            .filter(|v| v % 2 == 1)
            .collect()
    } else {
        Vec::new()
    };
    let parity_obstruction = pm_one && c == 1 && n > 1 && n % 2 == 1;
    NecessaryReport {
        laplacian_integral: spectrum.integral,
        components: c,
        bandwidth_bound: c.max(n - c),
        pruned: !spectrum.integral || !odd_eigenvalues.is_empty() || parity_obstruction,
        odd_eigenvalues,
        parity_obstruction,
    }
}

/// Exact S-bandwidth with a witness.
pub fn s_bandwidth(g: &Graph, s: &Alphabet, options: &SearchOptions) -> BandwidthResult {
    let spectrum = integer_spectrum(g);
    s_bandwidth_with_spectrum(g, s, &spectrum, options)
}

pub fn s_bandwidth_with_spectrum(
    g: &Graph,
    s: &Alphabet,
    spectrum: &Spectrum,
    options: &SearchOptions,
) -> BandwidthResult {
    let n = g.n();
    if !spectrum.integral {
        return BandwidthResult::infinite();
    }
    if options.use_necessary_conditions && necessary_from_spectrum(g, s, spectrum).pruned {
        return BandwidthResult::infinite();
    }
    if options.use_constructions {
        if let Some(w) = complete_graph_shortcut(g, s) {
            return BandwidthResult {
                bandwidth: Bandwidth::Finite(1),
                optimal: true,
                gram_bandwidth_certificate: Some(w.gram_bandwidth()),
                witness: Some(w),
                nodes: 0,
            };
        }
    }
    let mut spaces = Vec::with_capacity(spectrum.eigenpairs.len());
    for e in &spectrum.eigenpairs {
        let cands = eigenspace_s_vectors(&e.basis, s);
        if rank_reaches(n, &cands, e.multiplicity) {
            spaces.push((e, cands));
        } else {
            return BandwidthResult::infinite();
        }
    }
    let mut nodes = Nodes::new(options.budget.max_nodes);
    let mut optimal = true;
    let mut bandwidth = 1;
    let mut columns = Vec::with_capacity(n);
    let mut eigenvalues = Vec::with_capacity(n);
    for (e, cands) in spaces {
        let found = minimize_eigenspace(e, cands, &mut nodes);
        optimal &= found.optimal;
        bandwidth = bandwidth.max(found.bandwidth);
        for v in found.ordered {
            columns.push(v);
            eigenvalues.push(e.value);
        }
    }
    let witness = DiagWitness {
        n,
        columns,
        eigenvalues,
    };
    let certificate = witness.gram_bandwidth();
    debug_assert_eq!(certificate, bandwidth);
    BandwidthResult {
        bandwidth: Bandwidth::Finite(bandwidth),
        optimal,
        witness: Some(witness),
        gram_bandwidth_certificate: Some(certificate),
        nodes: nodes.used,
    }
}

fn rank_reaches(n: usize, vectors: &[Vec<i64>], target: usize) -> bool {
    let mut t = RankTracker::new(n);
    for v in vectors {
        t.insert(v);
        if t.rank() >= target {
            return true;
        }
    }
    t.rank() >= target
}

fn is_complete(g: &Graph) -> bool {
    let n = g.n();
    g.edge_count() == n * n.saturating_sub(1) / 2
}

/// `K_n` has eigenspaces `span(1)` and `1^⊥`; a Hadamard matrix whose first
/// column is `1` diagonalizes it with orthogonal columns.
fn complete_graph_shortcut(g: &Graph, s: &Alphabet) -> Option<DiagWitness> {
    let n = g.n();
    if n == 0 || !is_complete(g) || !s.contains(1) || !s.contains(-1) {
        return None;
    }
    let h = constructions::hadamard_constructive(n)?;
    let rows = h.matrix.to_i64_rows()?;
    let columns: Vec<Vec<i64>> = (0..n)
        .map(|j| rows.iter().map(|r| r[j]).collect())
        .collect();
    let eigenvalues = (0..n).map(|j| if j == 0 { 0 } else { n as u64 }).collect();
    Some(DiagWitness {
        n,
        columns,
        eigenvalues,
    })
}

pub(crate) struct Nodes {
    pub(crate) used: u64,
    limit: u64,
}

impl Nodes {
    pub(crate) fn new(limit: u64) -> Self {
        Nodes { used: 0, limit }
    }

    pub(crate) fn tick(&mut self) -> bool {
        self.used += 1;
        self.used <= self.limit
    }

    pub(crate) fn exhausted(&self) -> bool {
        self.used > self.limit
    }
}

/// Result of one exhaustive search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Search<T> {
    Found(T),
    /// The search completed without a solution.
    Exhausted,
    OutOfBudget,
}

struct EigenspaceBest {
    bandwidth: usize,
    ordered: Vec<Vec<i64>>,
    optimal: bool,
}

fn minimize_eigenspace(e: &Eigenpair, cands: Vec<Vec<i64>>, nodes: &mut Nodes) -> EigenspaceBest {
    let d = e.multiplicity;
    let space = SpaceSearch::new(cands, d, Some(&e.basis));
    let greedy = space.greedy_order();
    let upper = space.order_bandwidth(&greedy);
    let take = |order: &[usize]| order.iter().map(|&i| space.cands[i].clone()).collect();
    if upper == 1 {
        return EigenspaceBest {
            bandwidth: 1,
            ordered: take(&greedy),
            optimal: true,
        };
    }
    match space.orthogonal_basis(nodes) {
        Search::Found(order) => {
            return EigenspaceBest {
                bandwidth: 1,
                ordered: take(&order),
                optimal: true,
            }
        }
        Search::OutOfBudget => {
            return EigenspaceBest {
                bandwidth: upper,
                ordered: take(&greedy),
                optimal: false,
            }
        }
        Search::Exhausted => {}
    }
    for k in 2..upper {
        match space.banded_basis(k, nodes) {
            Search::Found(order) => {
                return EigenspaceBest {
                    bandwidth: k,
                    ordered: take(&order),
                    optimal: true,
                }
            }
            Search::OutOfBudget => {
                return EigenspaceBest {
                    bandwidth: upper,
                    ordered: take(&greedy),
                    optimal: false,
                }
            }
            Search::Exhausted => {}
        }
    }
    EigenspaceBest {
        bandwidth: upper,
        ordered: take(&greedy),
        optimal: true,
    }
}

/// Search state for one eigenspace. Candidates are sorted by support size,
/// largest first; `orth[i]` is the set of candidates orthogonal to `i`.
pub(crate) struct SpaceSearch {
    pub(crate) cands: Vec<Vec<i64>>,
    n: usize,
    d: usize,
    orth: Vec<BitSet>,
    /// Candidate order for the banded search: most orthogonal partners first.
    banded_order: Vec<usize>,
    diagonal: Option<DiagonalPrune>,
}

impl SpaceSearch {
    /// `basis` spans the eigenspace; when given, it enables the projector
    /// diagonal test in the orthogonal-basis search.
    pub(crate) fn new(mut cands: Vec<Vec<i64>>, d: usize, basis: Option<&Matrix>) -> Self {
        let n = cands.first().map_or(0, Vec::len);
        cands.sort_by(|a, b| {
            let sa = a.iter().filter(|&&x| x != 0).count();
            let sb = b.iter().filter(|&&x| x != 0).count();
            sb.cmp(&sa).then_with(|| b.cmp(a))
        });
        let m = cands.len();
        let mut orth = vec![BitSet::new(m); m];
        for i in 0..m {
            for j in i + 1..m {
                if dot(&cands[i], &cands[j]) == 0 {
                    orth[i].insert(j);
                    orth[j].insert(i);
                }
            }
        }
        let mut banded_order: Vec<usize> = (0..m).collect();
        banded_order.sort_by_key(|&i| std::cmp::Reverse(orth[i].count()));
        let diagonal = basis.and_then(|b| DiagonalPrune::new(&cands, b));
        SpaceSearch {
            cands,
            n,
            d,
            orth,
            banded_order,
            diagonal,
        }
    }

    fn order_bandwidth(&self, order: &[usize]) -> usize {
        let mut k = 1;
        for (i, &a) in order.iter().enumerate() {
            for (j, &b) in order.iter().enumerate().skip(i + 1) {
                if !self.orth[a].contains(b) {
                    k = k.max(j - i + 1);
                }
            }
        }
        k
    }

    /// Builds a basis one column at a time, each time taking the independent
    /// candidate whose earliest non-orthogonal predecessor is nearest.
    fn greedy_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = Vec::with_capacity(self.d);
        let mut tracker = RankTracker::new(self.n);
        while order.len() < self.d {
            let pos = order.len();
            let mut best: Option<(usize, usize, usize)> = None;
            for c in (0..self.cands.len()).rev() {
                let reach = order
                    .iter()
                    .position(|&p| !self.orth[c].contains(p))
                    .map_or(1, |first| pos - first + 1);
                let clashes = order.iter().filter(|&&p| !self.orth[c].contains(p)).count();
                if best.is_some_and(|(r, cl, _)| (reach, clashes) >= (r, cl)) {
                    continue;
                }
                if tracker.is_independent(&self.cands[c]) {
                    best = Some((reach, clashes, c));
                    if reach == 1 && clashes == 0 {
                        break;
                    }
                }
            }
            let (_, _, c) = best.expect("candidates span the eigenspace");
            tracker.insert(&self.cands[c]);
            order.push(c);
        }
        order
    }

    fn spans_with(&self, tracker: &RankTracker, pool: &BitSet, target: usize) -> bool {
        if tracker.rank() >= target {
            return true;
        }
        let mut t = tracker.clone();
        for c in pool.iter() {
            if t.insert(&self.cands[c]) && t.rank() >= target {
                return true;
            }
        }
        false
    }

    /// `d` mutually orthogonal candidates, found as a clique in the
    /// orthogonality graph with candidates taken in increasing index order.
    pub(crate) fn orthogonal_basis(&self, nodes: &mut Nodes) -> Search<Vec<usize>> {
        let residual = self.diagonal.as_ref().map(|dp| dp.target.clone());
        let mut chosen = Vec::with_capacity(self.d);
        self.clique(
            &mut chosen,
            BitSet::full(self.cands.len()),
            &RankTracker::new(self.n),
            residual.as_deref(),
            nodes,
        )
    }

    fn clique(
        &self,
        chosen: &mut Vec<usize>,
        pool: BitSet,
        tracker: &RankTracker,
        residual: Option<&[i64]>,
        nodes: &mut Nodes,
    ) -> Search<Vec<usize>> {
        if chosen.len() == self.d {
            return Search::Found(chosen.clone());
        }
        if !nodes.tick() {
            return Search::OutOfBudget;
        }
        let need = self.d - chosen.len();
        if pool.count() < need || !self.spans_with(tracker, &pool, self.d) {
            return Search::Exhausted;
        }
        if let (Some(dp), Some(res)) = (&self.diagonal, residual) {
            if !dp.feasible(res, &pool, need) {
                return Search::Exhausted;
            }
        }
        for c in pool.iter() {
            let mut next = pool.intersect(&self.orth[c]);
            next.clear_through(c);
            if next.count() + 1 < need {
                continue;
            }
            let mut t = tracker.clone();
            t.insert(&self.cands[c]);
            let res = residual
                .zip(self.diagonal.as_ref())
                .map(|(r, dp)| dp.subtract(r, c));
            chosen.push(c);
            match self.clique(chosen, next, &t, res.as_deref(), nodes) {
                Search::Exhausted => {}
                other => return other,
            }
            chosen.pop();
        }
        Search::Exhausted
    }

    /// An ordered basis whose Gram matrix has bandwidth at most `k`: every
    /// pair of columns `k` or more positions apart is orthogonal.
    fn banded_basis(&self, k: usize, nodes: &mut Nodes) -> Search<Vec<usize>> {
        let mut seq = Vec::with_capacity(self.d);
        let mut prefix_orth = Vec::with_capacity(self.d);
        self.extend_banded(
            k,
            &mut seq,
            &mut prefix_orth,
            &RankTracker::new(self.n),
            nodes,
        )
    }

    fn extend_banded(
        &self,
        k: usize,
        seq: &mut Vec<usize>,
        prefix_orth: &mut Vec<BitSet>,
        tracker: &RankTracker,
        nodes: &mut Nodes,
    ) -> Search<Vec<usize>> {
        let m = seq.len();
        if m == self.d {
            return Search::Found(seq.clone());
        }
        if !nodes.tick() {
            return Search::OutOfBudget;
        }
        // Positions >= i + k must be orthogonal to the first i + 1 columns:
        // those still to be placed need enough room in prefix_orth[i].
        for i in (0..m).rev() {
            let first = (i + k).max(m);
            if first >= self.d {
                continue;
            }
            let needed = m + (self.d - first);
            if !self.spans_with(tracker, &prefix_orth[i], needed) {
                return Search::Exhausted;
            }
        }
        let allowed = (m >= k).then(|| prefix_orth[m - k].clone());
        for &c in &self.banded_order {
            if allowed.as_ref().is_some_and(|a| !a.contains(c)) {
                continue;
            }
            let mut t = tracker.clone();
            if !t.insert(&self.cands[c]) {
                continue;
            }
            let next_orth = match prefix_orth.last() {
                Some(prev) => prev.intersect(&self.orth[c]),
                None => self.orth[c].clone(),
            };
            seq.push(c);
            prefix_orth.push(next_orth);
            let r = self.extend_banded(k, seq, prefix_orth, &t, nodes);
            seq.pop();
            prefix_orth.pop();
            match r {
                Search::Exhausted => {}
                other => return other,
            }
        }
        Search::Exhausted
    }
}

/// If `p_1..p_d` is an orthogonal basis of a space with orthogonal projector
/// `Π`, then `Π = Σ p_j p_j^T / |p_j|^2`, so each diagonal entry `Π_ii` is a
/// sum of `d` terms `p_ji^2 / |p_j|^2`. Whether the remaining slots can still
/// produce the residual diagonal is a small bounded-count subset-sum, solved
/// on integers after scaling by the common denominator.
struct DiagonalPrune {
    /// `Π_ii * scale`
    target: Vec<i64>,
    /// `term[c][i] = p_ci^2 * scale / |p_c|^2`
    term: Vec<Vec<i64>>,
    /// Per row: distinct positive term values and the candidates producing each.
    row_terms: Vec<Vec<(i64, BitSet)>>,
}

const DIAGONAL_SCALE_LIMIT: i64 = 1 << 20;

impl DiagonalPrune {
    fn new(cands: &[Vec<i64>], basis: &Matrix) -> Option<Self> {
        let n = basis.rows();
        let gram_inv = inverse(&gram(basis))?;
        let bt = basis.transpose();
        let proj_diag: Vec<Rational> = (0..n)
            .map(|i| {
                let b = bt.column(i);
                let mut s = Rational::zero();
                for (a, ba) in b.iter().enumerate() {
                    for (c, bc) in b.iter().enumerate() {
                        s += ba * gram_inv.get(a, c) * bc;
                    }
                }
                s
            })
            .collect();
        let mut scale: i64 = 1;
        let lcm = |a: i64, b: i64| -> Option<i64> {
            let l = num_integer::lcm(a, b);
            (l <= DIAGONAL_SCALE_LIMIT).then_some(l)
        };
        for x in &proj_diag {
            scale = lcm(scale, x.denom().to_i64()?)?;
        }
        let norms: Vec<i64> = cands.iter().map(|c| dot(c, c)).collect();
        for &w in &norms {
            scale = lcm(scale, w)?;
        }
        let target = proj_diag
            .iter()
            .map(|x| (x * int(scale)).to_integer().to_i64())
            .collect::<Option<Vec<_>>>()?;
        let term: Vec<Vec<i64>> = cands
            .iter()
            .zip(&norms)
            .map(|(c, &w)| c.iter().map(|&x| x * x * (scale / w)).collect())
            .collect();
        let row_terms = (0..n)
            .map(|i| {
                let mut groups: Vec<(i64, BitSet)> = Vec::new();
                for (ci, t) in term.iter().enumerate() {
                    if t[i] == 0 {
                        continue;
                    }
                    match groups.iter_mut().find(|(v, _)| *v == t[i]) {
                        Some((_, set)) => set.insert(ci),
                        None => {
                            let mut set = BitSet::new(cands.len());
                            set.insert(ci);
                            groups.push((t[i], set));
                        }
                    }
                }
                groups
            })
            .collect();
        Some(DiagonalPrune {
            target,
            term,
            row_terms,
        })
    }

    fn subtract(&self, residual: &[i64], c: usize) -> Vec<i64> {
        residual
            .iter()
            .zip(&self.term[c])
            .map(|(r, t)| r - t)
            .collect()
    }

    fn feasible(&self, residual: &[i64], pool: &BitSet, slots: usize) -> bool {
        residual.iter().enumerate().all(|(i, &r)| {
            if r < 0 {
                return false;
            }
            if r == 0 {
                return true;
            }
            let terms: Vec<i64> = self.row_terms[i]
                .iter()
                .filter(|(v, set)| *v <= r && pool.intersect(set).count() > 0)
                .map(|(v, _)| *v)
                .collect();
            bounded_subset_sum(&terms, r, slots)
        })
    }
}

/// Whether `target` is a sum of at most `slots` values from `terms`, each
/// usable any number of times.
fn bounded_subset_sum(terms: &[i64], target: i64, slots: usize) -> bool {
    if terms.contains(&target) {
        return slots >= 1;
    }
    let size = target as usize + 1;
    let mut frontier = vec![0usize];
    let mut seen = vec![false; size];
    seen[0] = true;
    for _ in 0..slots {
        let mut next = Vec::new();
        for &x in &frontier {
            for &t in terms {
                let y = x + t as usize;
                if y < size && !seen[y] {
                    seen[y] = true;
                    next.push(y);
                }
            }
        }
        if seen[size - 1] {
            return true;
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    seen[size - 1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{
        complete, complete_multipartite, cycle, disjoint_union, path, Graph, PartitionSpec,
    };

    fn parts(p: &[usize]) -> PartitionSpec {
        PartitionSpec::new(p.to_vec()).unwrap()
    }

    fn bw(g: &Graph, s: &Alphabet) -> Bandwidth {
        let r = s_bandwidth(g, s, &SearchOptions::default());
        assert!(r.optimal);
        if let Some(w) = &r.witness {
            verify_bandwidth(g, s, w, r.bandwidth.finite().unwrap()).unwrap();
        }
        r.bandwidth
    }

    #[test]
    fn alphabet_parsing() {
        assert_eq!(
            "-1,0,1".parse::<Alphabet>().unwrap(),
            Alphabet::neg_zero_one()
        );
        assert_eq!("{1,-1}".parse::<Alphabet>().unwrap(), Alphabet::neg_one());
        assert_eq!("".parse::<Alphabet>(), Err(AlphabetError::Empty));
        assert!("1,x".parse::<Alphabet>().is_err());
        assert_eq!(Alphabet::neg_zero_one().to_string(), "{-1,0,1}");
        assert!(Alphabet::neg_one().is_symmetric());
        assert!(!Alphabet::new([0, 1, 2]).unwrap().is_symmetric());
    }

    #[test]
    fn bandwidth_codes() {
        assert_eq!(Bandwidth::Infinite.code(), -1);
        assert_eq!(Bandwidth::from_code(-1), Bandwidth::Infinite);
        assert_eq!(Bandwidth::from_code(3), Bandwidth::Finite(3));
        assert_eq!(Bandwidth::Infinite.to_string(), "∞");
        assert!(Bandwidth::Finite(9) < Bandwidth::Infinite);
    }

    #[test]
    fn s_vectors_none_for_single_difference_vector() {
        let basis = Matrix::from_int_columns(6, &[[1, -1, 0, 0, 0, 0]]);
        assert!(eigenspace_s_vectors(&basis, &Alphabet::neg_one()).is_empty());
        let basis = Matrix::from_int_columns(3, &[[1, -2, 1]]);
        assert!(eigenspace_s_vectors(&basis, &Alphabet::neg_zero_one()).is_empty());
    }

    #[test]
    fn s_vectors_match_brute_force_on_k3() {
        let basis = Matrix::from_int_columns(3, &[[1, -1, 0], [1, 0, -1]]);
        let got = eigenspace_s_vectors(&basis, &Alphabet::neg_zero_one());
        // brute force over all 27 vectors: nonzero, sum zero, first nonzero positive
        let mut expected = Vec::new();
        for a in -1..=1i64 {
            for b in -1..=1i64 {
                for c in -1..=1i64 {
                    let v = vec![a, b, c];
                    if a + b + c == 0 && v.iter().any(|&x| x != 0) && sign_canonical(&v) {
                        expected.push(v);
                    }
                }
            }
        }
        expected.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(got, expected);
        assert_eq!(got, vec![vec![1, 0, -1], vec![1, -1, 0], vec![0, 1, -1]]);
    }

    #[test]
    fn s_vectors_with_asymmetric_alphabet_keep_both_signs() {
        let basis = Matrix::from_int_columns(2, &[[1, 1]]);
        let s = Alphabet::new([-2, -1, 1]).unwrap();
        assert_eq!(
            eigenspace_s_vectors(&basis, &s),
            vec![vec![1, 1], vec![-1, -1], vec![-2, -2]]
        );
    }

    #[test]
    fn diagonalizability_examples() {
        let out = is_s_diagonalizable(&complete(4), &Alphabet::neg_one());
        assert!(out.diagonalizable);
        verify_witness(&complete(4), &Alphabet::neg_one(), &out.witness.unwrap()).unwrap();
        assert!(!is_s_diagonalizable(&complete(3), &Alphabet::neg_one()).diagonalizable);
        let k21 = complete_multipartite(&parts(&[2, 1]));
        assert!(!is_s_diagonalizable(&k21, &Alphabet::neg_zero_one()).diagonalizable);
        assert!(!is_s_diagonalizable(&cycle(5), &Alphabet::neg_zero_one()).diagonalizable);
    }

    #[test]
    fn bandwidth_examples() {
        let pm = Alphabet::neg_one();
        let pmz = Alphabet::neg_zero_one();
        assert_eq!(bw(&complete(6), &pm), Bandwidth::Finite(5));
        assert_eq!(bw(&complete(9), &pmz), Bandwidth::Finite(2));
        assert_eq!(bw(&complete(1), &pm), Bandwidth::Finite(1));
        assert_eq!(
            bw(&complete(1), &Alphabet::new([1]).unwrap()),
            Bandwidth::Finite(1)
        );
        assert_eq!(bw(&Graph::empty(0), &pmz), Bandwidth::Finite(1));
        assert_eq!(bw(&cycle(5), &pmz), Bandwidth::Infinite);
    }

    #[test]
    fn bandwidth_without_shortcuts_agrees() {
        let plain = SearchOptions {
            use_constructions: false,
            use_necessary_conditions: false,
            ..Default::default()
        };
        for n in 1..=8 {
            for s in [Alphabet::neg_one(), Alphabet::neg_zero_one()] {
                let g = complete(n);
                let a = s_bandwidth(&g, &s, &SearchOptions::default());
                let b = s_bandwidth(&g, &s, &plain);
                assert_eq!(a.bandwidth, b.bandwidth, "K{n} over {s}");
                assert!(b.optimal);
            }
        }
    }

    #[test]
    fn necessary_condition_examples() {
        let r = necessary_conditions(&path(3), &Alphabet::neg_one());
        assert_eq!(r.odd_eigenvalues, vec![1, 3]);
        assert!(r.pruned);
        let r = necessary_conditions(&complete(6), &Alphabet::neg_one());
        assert!(r.odd_eigenvalues.is_empty() && !r.pruned);
        assert_eq!(r.bandwidth_bound, 5);
        let r = necessary_conditions(&complete(5), &Alphabet::neg_one());
        assert!(r.parity_obstruction);
        let r = necessary_conditions(
            &disjoint_union(&complete(2), &complete(1)),
            &Alphabet::neg_zero_one(),
        );
        assert_eq!((r.components, r.bandwidth_bound), (2, 2));
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        // K10 over {-1,0,1} needs a search to rule out bandwidth 1
        let r = s_bandwidth(
            &complete(10),
            &Alphabet::neg_zero_one(),
            &SearchOptions::with_budget(3),
        );
        assert!(!r.optimal);
        let w = r.witness.unwrap();
        let k = r.bandwidth.finite().unwrap();
        verify_bandwidth(&complete(10), &Alphabet::neg_zero_one(), &w, k).unwrap();
    }

    #[test]
    fn verification_rejects_bad_witnesses() {
        let g = complete(2);
        let s = Alphabet::neg_one();
        let good = DiagWitness {
            n: 2,
            columns: vec![vec![1, 1], vec![1, -1]],
            eigenvalues: vec![0, 2],
        };
        assert_eq!(verify_witness(&g, &s, &good), Ok(1));
        let mut bad = good.clone();
        bad.eigenvalues = vec![0, 1];
        assert!(matches!(
            verify_witness(&g, &s, &bad),
            Err(VerificationError::NotEigenvector { col: 1, .. })
        ));
        let mut bad = good.clone();
        bad.columns[1] = vec![1, 0];
        assert!(matches!(
            verify_witness(&g, &s, &bad),
            Err(VerificationError::EntryOutsideAlphabet { .. })
        ));
        let singular = DiagWitness {
            n: 2,
            columns: vec![vec![1, 1], vec![1, 1]],
            eigenvalues: vec![0, 0],
        };
        assert_eq!(
            verify_witness(&g, &Alphabet::neg_one(), &singular),
            Err(VerificationError::Singular)
        );
        assert!(matches!(
            verify_bandwidth(&g, &s, &good, 2),
            Err(VerificationError::BandwidthMismatch { .. })
        ));
    }

    #[test]
    fn subset_sum() {
        assert!(bounded_subset_sum(&[3, 5], 11, 3));
        assert!(!bounded_subset_sum(&[3, 5], 11, 2));
        assert!(!bounded_subset_sum(&[4, 6], 9, 10));
        assert!(bounded_subset_sum(&[7], 7, 1));
    }
}
