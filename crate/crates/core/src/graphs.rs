//! Simple undirected graphs on at most 64 vertices, the standard graph
//! operations, the graph6 codec and a canonical labeling for small graphs.

use std::fmt;

use thiserror::Error;

use crate::exact::{int, Matrix};

/// Largest vertex count a [`Graph`] can hold.
pub const MAX_VERTICES: usize = 64;
/// Largest vertex count accepted by [`canonical_form`].
pub const CANONICAL_MAX_VERTICES: usize = 11;
/// Largest vertex count the graph6 codec handles (single-byte size prefix).
pub const GRAPH6_MAX_VERTICES: usize = 62;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("{n} vertices exceeds the limit of {max}")]
    TooManyVertices { n: usize, max: usize },
    #[error("partition parts must be positive and there must be at least one")]
    InvalidPartition,
    #[error("graph6: malformed length (expected {expected} bytes, got {got})")]
    MalformedLength { expected: usize, got: usize },
    #[error("graph6: byte {byte} at offset {offset} is outside 63..=126")]
    ByteOutOfRange { offset: usize, byte: u8 },
    #[error("graph6: {extra} trailing byte(s) after the edge data")]
    TrailingGarbage { extra: usize },
    #[error("graph6: padding bits after the edge data are not zero")]
    NonzeroPadding,
}

/// A simple undirected graph. Row `i` of `adj` is the neighbour bitmask of
/// vertex `i`; the matrix is kept symmetric with an empty diagonal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Graph {
        assert!(
            n <= MAX_VERTICES,
            "graph on {n} vertices exceeds {MAX_VERTICES}"
        );
        Graph { n, adj: vec![0; n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Graph {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n, "edge ({u},{v}) out of range");
        assert_ne!(u, v, "loops are not allowed");
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn neighbors_mask(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&u| self.has_edge(v, u))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj
            .iter()
            .map(|r| r.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for j in 1..self.n {
            for i in 0..j {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    fn full_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// Graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph::empty(self.n);
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }

    pub fn adjacency_matrix(&self) -> Matrix {
        Matrix::from_fn(self.n, self.n, |i, j| int(self.has_edge(i, j) as i64))
    }

    /// Integer Laplacian `D - A` as rows.
    pub fn laplacian_rows(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| {
                        if i == j {
                            self.degree(i) as i64
                        } else {
                            -(self.has_edge(i, j) as i64)
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// Part sizes of a complete multipartite graph, stored non-increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartitionSpec(Vec<usize>);

impl PartitionSpec {
    pub fn new(mut parts: Vec<usize>) -> Result<Self, GraphError> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(GraphError::InvalidPartition);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(PartitionSpec(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// `total - parts[j]`: the sum of every other part.
    pub fn co_size(&self, j: usize) -> usize {
        self.total() - self.0[j]
    }
}

/// `L = D - A`.
pub fn laplacian(g: &Graph) -> Matrix {
    Matrix::from_int_rows(&g.laplacian_rows())
}

pub fn complement(g: &Graph) -> Graph {
    let full = g.full_mask();
    let adj = (0..g.n).map(|v| !g.adj[v] & full & !(1 << v)).collect();
    Graph { n: g.n, adj }
}

/// `g ⊔ h` with the vertices of `h` placed after those of `g`.
pub fn disjoint_union(g: &Graph, h: &Graph) -> Graph {
    let mut out = Graph::empty(g.n + h.n);
    for (u, v) in g.edges() {
        out.add_edge(u, v);
    }
    for (u, v) in h.edges() {
        out.add_edge(g.n + u, g.n + v);
    }
    out
}

/// `g ∨ h`: the disjoint union plus every edge between the two sides.
pub fn join(g: &Graph, h: &Graph) -> Graph {
    let mut out = disjoint_union(g, h);
    for u in 0..g.n {
        for v in 0..h.n {
            out.add_edge(u, g.n + v);
        }
    }
    out
}

fn product(g: &Graph, h: &Graph, adjacent: impl Fn(bool, bool, bool, bool) -> bool) -> Graph {
    let m = h.n;
    let mut out = Graph::empty(g.n * m);
    for a in 0..g.n * m {
        for b in a + 1..g.n * m {
            let (g1, h1, g2, h2) = (a / m, a % m, b / m, b % m);
            let same_g = g1 == g2;
            let same_h = h1 == h2;
            if adjacent(same_g, g.has_edge(g1, g2), same_h, h.has_edge(h1, h2)) {
                out.add_edge(a, b);
            }
        }
    }
    out
}

/// `g □ h` on vertex pairs `(i, j) -> i * h.n() + j`.
pub fn cartesian_product(g: &Graph, h: &Graph) -> Graph {
    product(g, h, |sg, eg, sh, eh| (sg && eh) || (eg && sh))
}

/// Tensor product: both coordinates adjacent.
pub fn direct_product(g: &Graph, h: &Graph) -> Graph {
    product(g, h, |_, eg, _, eh| eg && eh)
}

pub fn strong_product(g: &Graph, h: &Graph) -> Graph {
    product(g, h, |sg, eg, sh, eh| (sg || eg) && (sh || eh))
}

pub fn complete(n: usize) -> Graph {
    complement(&Graph::empty(n))
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges)
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycles need at least 3 vertices");
    let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    edges.push((n - 1, 0));
    Graph::from_edges(n, &edges)
}

/// `K_{v1,...,vp}` with parts laid out consecutively, largest part first.
pub fn complete_multipartite(spec: &PartitionSpec) -> Graph {
    spec.parts()
        .iter()
        .map(|&v| Graph::empty(v))
        .reduce(|acc, part| join(&acc, &part))
        .expect("partition has at least one part")
}

/// Vertex sets of the connected components, ordered by smallest vertex.
pub fn connected_components(g: &Graph) -> Vec<Vec<usize>> {
    let mut seen = 0u64;
    let mut comps = Vec::new();
    for start in 0..g.n {
        if seen >> start & 1 == 1 {
            continue;
        }
        let mut comp = 1u64 << start;
        let mut frontier = comp;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = g.adj[v] & !comp;
            comp |= fresh;
            frontier |= fresh;
        }
        seen |= comp;
        comps.push((0..g.n).filter(|&v| comp >> v & 1 == 1).collect());
    }
    comps
}

pub fn is_connected(g: &Graph) -> bool {
    connected_components(g).len() <= 1
}

pub fn is_regular_graph(g: &Graph) -> bool {
    (1..g.n).all(|v| g.degree(v) == g.degree(0))
}

fn graph6_body_len(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(6)
}

pub fn write_graph6(g: &Graph) -> Result<Vec<u8>, GraphError> {
    if g.n > GRAPH6_MAX_VERTICES {
        return Err(GraphError::TooManyVertices {
            n: g.n,
            max: GRAPH6_MAX_VERTICES,
        });
    }
    let mut out = Vec::with_capacity(1 + graph6_body_len(g.n));
    out.push(g.n as u8 + 63);
    let (mut acc, mut nbits) = (0u8, 0);
    for j in 1..g.n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            nbits += 1;
            if nbits == 6 {
                out.push(acc + 63);
                acc = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        out.push((acc << (6 - nbits)) + 63);
    }
    Ok(out)
}

pub fn parse_graph6(text: &[u8]) -> Result<Graph, GraphError> {
    let text = text.strip_prefix(b">>graph6<<").unwrap_or(text);
    if let Some(offset) = text.iter().position(|b| !(63..=126).contains(b)) {
        return Err(GraphError::ByteOutOfRange {
            offset,
            byte: text[offset],
        });
    }
    let Some(&first) = text.first() else {
        return Err(GraphError::MalformedLength {
            expected: 1,
            got: 0,
        });
    };
    if first == 126 {
        // multi-byte size prefix: n >= 63
        return Err(GraphError::TooManyVertices {
            n: 63,
            max: GRAPH6_MAX_VERTICES,
        });
    }
    let n = (first - 63) as usize;
    let expected = 1 + graph6_body_len(n);
    if text.len() < expected {
        return Err(GraphError::MalformedLength {
            expected,
            got: text.len(),
        });
    }
    if text.len() > expected {
        return Err(GraphError::TrailingGarbage {
            extra: text.len() - expected,
        });
    }
    let bits = text[1..].iter().flat_map(|&b| {
        let v = b - 63;
        (0..6).rev().map(move |k| v >> k & 1 == 1)
    });
    let mut g = Graph::empty(n);
    let mut bits = bits.enumerate();
    let total = n * n.saturating_sub(1) / 2;
    for j in 1..n {
        for i in 0..j {
            let (_, bit) = bits.next().expect("length checked");
            if bit {
                g.add_edge(i, j);
            }
        }
    }
    if bits.any(|(k, b)| k >= total && b) {
        return Err(GraphError::NonzeroPadding);
    }
    Ok(g)
}

/// Canonical graph6 string: equal for two graphs iff they are isomorphic.
///
/// Individualization-refinement over equitable ordered partitions, keeping
/// the lexicographically largest adjacency code among the leaves. Twin
/// vertices in a target cell yield identical subtrees, so only one of each
/// twin class is individualized.
pub fn canonical_form(g: &Graph) -> Result<Vec<u8>, GraphError> {
    let (_, canon) = canonical_labeling(g)?;
    write_graph6(&canon)
}

/// A canonical relabeling `perm` (vertex `v` becomes `perm[v]`) and the
/// relabeled graph.
pub fn canonical_labeling(g: &Graph) -> Result<(Vec<usize>, Graph), GraphError> {
    if g.n > CANONICAL_MAX_VERTICES {
        return Err(GraphError::TooManyVertices {
            n: g.n,
            max: CANONICAL_MAX_VERTICES,
        });
    }
    let mut best: Option<(u64, Vec<usize>)> = None;
    let cells = vec![(0..g.n).collect::<Vec<_>>()];
    canon_search(g, cells, &mut best);
    let order = best.map(|(_, o)| o).unwrap_or_default();
    let mut perm = vec![0; g.n];
    for (pos, &v) in order.iter().enumerate() {
        perm[v] = pos;
    }
    let canon = g.relabel(&perm);
    Ok((perm, canon))
}

fn cell_mask(cell: &[usize]) -> u64 {
    cell.iter().fold(0, |m, &v| m | 1 << v)
}

fn refine(g: &Graph, cells: &mut Vec<Vec<usize>>) {
    'outer: loop {
        for s in 0..cells.len() {
            let mask = cell_mask(&cells[s]);
            let mut next = Vec::with_capacity(cells.len());
            for cell in cells.iter() {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(u32, usize)> = cell
                    .iter()
                    .map(|&v| ((g.adj[v] & mask).count_ones(), v))
                    .collect();
                keyed.sort_by_key(|&(k, _)| k);
                let mut start = 0;
                for i in 1..=keyed.len() {
                    if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                        next.push(keyed[start..i].iter().map(|&(_, v)| v).collect());
                        start = i;
                    }
                }
            }
            if next.len() != cells.len() {
                *cells = next;
                continue 'outer;
            }
        }
        return;
    }
}

fn are_twins(g: &Graph, u: usize, v: usize) -> bool {
    let both = !(1u64 << u | 1u64 << v);
    g.adj[u] & both == g.adj[v] & both
}

fn leaf_code(g: &Graph, order: &[usize]) -> u64 {
    let mut code = 0u64;
    for j in 1..order.len() {
        for i in 0..j {
            code = code << 1 | g.has_edge(order[i], order[j]) as u64;
        }
    }
    code
}

fn canon_search(g: &Graph, mut cells: Vec<Vec<usize>>, best: &mut Option<(u64, Vec<usize>)>) {
    refine(g, &mut cells);
    let Some(t) = cells.iter().position(|c| c.len() > 1) else {
        let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
        let code = leaf_code(g, &order);
        if best.as_ref().is_none_or(|(b, _)| code > *b) {
            *best = Some((code, order));
        }
        return;
    };
    let target = cells[t].clone();
    let mut tried: Vec<usize> = Vec::new();
    for &v in &target {
        if tried.iter().any(|&u| are_twins(g, u, v)) {
            continue;
        }
        tried.push(v);
        let mut next = Vec::with_capacity(cells.len() + 1);
        next.extend_from_slice(&cells[..t]);
        next.push(vec![v]);
        next.push(target.iter().copied().filter(|&u| u != v).collect());
        next.extend_from_slice(&cells[t + 1..]);
        canon_search(g, next, best);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rank;

    fn k(n: usize) -> Graph {
        complete(n)
    }

    fn parts(p: &[usize]) -> PartitionSpec {
        PartitionSpec::new(p.to_vec()).unwrap()
    }

    #[test]
    fn laplacian_examples() {
        assert_eq!(
            laplacian(&k(3)),
            Matrix::from_int_rows(&[[2, -1, -1], [-1, 2, -1], [-1, -1, 2]])
        );
        assert!(laplacian(&Graph::empty(3)).is_zero());
        for n in 1..7 {
            let expected = Matrix::identity(n)
                .scale(&int(n as i64))
                .sub(&Matrix::ones(n, n))
                .unwrap();
            assert_eq!(laplacian(&k(n)), expected);
        }
    }

    #[test]
    fn complement_examples() {
        assert_eq!(complement(&k(5)), Graph::empty(5));
        let k2_k1 = disjoint_union(&k(2), &k(1));
        let k21 = complete_multipartite(&parts(&[2, 1]));
        assert_eq!(canonical_form(&complement(&k2_k1)), canonical_form(&k21));
        assert_eq!(canonical_form(&k21), canonical_form(&path(3)));
    }

    #[test]
    fn union_and_join_examples() {
        assert_eq!(disjoint_union(&k(1), &k(1)), Graph::empty(2));
        let k22 = join(&Graph::empty(2), &Graph::empty(2));
        assert_eq!(canonical_form(&k22), canonical_form(&cycle(4)));
    }

    #[test]
    fn product_examples() {
        let k2 = k(2);
        assert_eq!(
            canonical_form(&cartesian_product(&k2, &k2)),
            canonical_form(&cycle(4))
        );
        let direct = direct_product(&k2, &k2);
        assert_eq!(direct.edge_count(), 2);
        assert!((0..4).all(|v| direct.degree(v) == 1));
        assert_eq!(strong_product(&k2, &k2), k(4));
    }

    #[test]
    fn multipartite_examples() {
        assert_eq!(complete_multipartite(&parts(&[1, 1, 1, 1])), k(4));
        assert_eq!(
            canonical_form(&complete_multipartite(&parts(&[2, 2]))),
            canonical_form(&cycle(4))
        );
        let g = complete_multipartite(&parts(&[4, 1, 1, 1, 1, 1]));
        let expected = (0..5).fold(k(4), |acc, _| disjoint_union(&acc, &k(1)));
        assert_eq!(complement(&g), expected);
        // parts are sorted largest first
        assert_eq!(parts(&[1, 3, 2]).parts(), &[3, 2, 1]);
        assert!(PartitionSpec::new(vec![]).is_err());
        assert!(PartitionSpec::new(vec![2, 0]).is_err());
    }

    #[test]
    fn component_and_regularity_examples() {
        assert_eq!(connected_components(&disjoint_union(&k(2), &k(1))).len(), 2);
        assert!(is_connected(&complete_multipartite(&parts(&[2, 1]))));
        assert!(is_regular_graph(&complete_multipartite(&parts(&[2, 2]))));
        assert!(!is_regular_graph(&complete_multipartite(&parts(&[2, 1]))));
        assert!(is_connected(&Graph::empty(0)));
    }

    #[test]
    fn graph6_examples() {
        assert_eq!(parse_graph6(b"C~").unwrap(), k(4));
        assert_eq!(parse_graph6(b"A_").unwrap(), k(2));
        assert_eq!(write_graph6(&k(4)).unwrap(), b"C~");
        assert_eq!(write_graph6(&Graph::empty(0)).unwrap(), b"?");
        assert_eq!(parse_graph6(b"?").unwrap(), Graph::empty(0));
        assert_eq!(parse_graph6(b">>graph6<<A_").unwrap(), k(2));
    }

    #[test]
    fn graph6_errors_are_distinct() {
        assert_eq!(
            parse_graph6(&[b'C', 200]),
            Err(GraphError::ByteOutOfRange {
                offset: 1,
                byte: 200
            })
        );
        assert_eq!(
            parse_graph6(b"D"),
            Err(GraphError::MalformedLength {
                expected: 3,
                got: 1
            })
        );
        assert!(matches!(
            parse_graph6(b""),
            Err(GraphError::MalformedLength { .. })
        ));
        assert_eq!(
            parse_graph6(b"C~~"),
            Err(GraphError::TrailingGarbage { extra: 1 })
        );
        // 'A' with padding bits set after the single edge bit
        assert_eq!(parse_graph6(b"A`"), Err(GraphError::NonzeroPadding));
        assert!(matches!(
            parse_graph6(b"~?@?"),
            Err(GraphError::TooManyVertices { .. })
        ));
    }

    #[test]
    fn canonical_form_examples() {
        let p3a = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        let p3b = Graph::from_edges(3, &[(0, 2), (2, 1)]);
        assert_eq!(canonical_form(&p3a), canonical_form(&p3b));
        assert_ne!(canonical_form(&k(3)), canonical_form(&p3a));
        assert!(canonical_form(&Graph::empty(12)).is_err());
    }

    #[test]
    fn canonical_form_of_all_star_labelings_agree() {
        // brute force: every permutation of {0,1,2,3} applied to the 4-star
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        let reference = canonical_form(&star).unwrap();
        let mut seen = 0;
        let mut perm = [0usize, 1, 2, 3];
        permutations(&mut perm, 0, &mut |p| {
            assert_eq!(canonical_form(&star.relabel(p)).unwrap(), reference);
            seen += 1;
        });
        assert_eq!(seen, 24);
    }

    fn permutations(p: &mut [usize; 4], k: usize, f: &mut impl FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permutations(p, k + 1, f);
            p.swap(k, i);
        }
    }

    #[test]
    fn canonical_form_handles_symmetric_graphs_quickly() {
        let a = canonical_form(&k(11)).unwrap();
        assert_eq!(parse_graph6(&a).unwrap(), k(11));
        let petersen = Graph::from_edges(
            10,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 0),
                (0, 5),
                (1, 6),
                (2, 7),
                (3, 8),
                (4, 9),
                (5, 7),
                (7, 9),
                (9, 6),
                (6, 8),
                (8, 5),
            ],
        );
        let shuffled = petersen.relabel(&[3, 7, 1, 9, 0, 2, 8, 4, 6, 5]);
        assert_eq!(canonical_form(&petersen), canonical_form(&shuffled));
    }

    #[test]
    fn nullity_counts_components() {
        let g = disjoint_union(&disjoint_union(&k(3), &path(2)), &Graph::empty(2));
        let l = laplacian(&g);
        assert_eq!(l.cols() - rank(&l), connected_components(&g).len());
    }
}
