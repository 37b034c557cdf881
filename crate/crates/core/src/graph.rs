//! Loopless multigraphs with first-class parallel edges.
//!
//! Edges carry dense ids `0..edge_count()` and are never collapsed to
//! weighted edges: chains and tree growth must distinguish parallel
//! edges. A `Multigraph` is immutable after construction; vertex
//! deletion is expressed only through [`Multigraph::induced_subgraph`],
//! so edge ids referenced by colorings and trees stay stable.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, VertexSet};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, PartialEq, Eq)]
pub struct Multigraph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    incident: Vec<Vec<EdgeId>>,
}

impl Multigraph {
    /// Build a multigraph on `n` vertices from an edge list. Edge ids are
    /// assigned in list order.
    pub fn new(n: usize, edges: Vec<(VertexId, VertexId)>) -> Result<Self> {
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u == v {
                return Err(Error::InvalidParameter(format!(
                    "edge {i} is a loop at vertex {u}"
                )));
            }
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge {i} = ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
        }
        let mut incident = vec![Vec::new(); n];
        for (id, &(u, v)) in edges.iter().enumerate() {
            incident[u].push(id);
            incident[v].push(id);
        }
        Ok(Multigraph { n, edges, incident })
    }

    /// Number of vertices.
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Number of edges, parallel edges counted separately.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    /// The end of `e` that is not `v`. Panics if `v` is not an end of `e`.
    pub fn other_end(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (u, w) = self.edges[e];
        if v == u {
            w
        } else {
            debug_assert_eq!(v, w);
            u
        }
    }

    pub fn is_end(&self, e: EdgeId, v: VertexId) -> bool {
        let (u, w) = self.edges[e];
        v == u || v == w
    }

    /// Edge ids incident to `v`, in increasing order.
    pub fn incident_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.incident[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incident[v].len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        0..self.n
    }

    /// Maximum degree, parallel edges counted with multiplicity. Zero for
    /// edgeless graphs.
    pub fn max_degree(&self) -> usize {
        self.incident.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Maximum number of parallel edges over unordered vertex pairs.
    pub fn multiplicity(&self) -> usize {
        let mut counts = std::collections::HashMap::new();
        for &(u, v) in &self.edges {
            let key = (u.min(v), u.max(v));
            *counts.entry(key).or_insert(0usize) += 1;
        }
        counts.into_values().max().unwrap_or(0)
    }

    /// Edges with exactly one end in `x`.
    pub fn boundary(&self, x: &VertexSet) -> Vec<EdgeId> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, &(u, v))| x.contains(u) != x.contains(v))
            .map(|(id, _)| id)
            .collect()
    }

    /// Number of edges with both ends in `x`.
    pub fn edges_inside(&self, x: &VertexSet) -> usize {
        self.edges
            .iter()
            .filter(|&&(u, v)| x.contains(u) && x.contains(v))
            .count()
    }

    /// The subgraph induced by `x`, with vertices relabeled densely.
    ///
    /// Returns the subgraph together with the relabeling map: entry `i`
    /// is the original id of the new vertex `i`.
    pub fn induced_subgraph(&self, x: &VertexSet) -> (Multigraph, Vec<VertexId>) {
        let old_of_new: Vec<VertexId> = x.iter().collect();
        let mut new_of_old = vec![usize::MAX; self.n];
        for (new, &old) in old_of_new.iter().enumerate() {
            new_of_old[old] = new;
        }
        let edges: Vec<(VertexId, VertexId)> = self
            .edges
            .iter()
            .filter(|&&(u, v)| x.contains(u) && x.contains(v))
            .map(|&(u, v)| (new_of_old[u], new_of_old[v]))
            .collect();
        let g = Multigraph::new(old_of_new.len(), edges).expect("induced subgraph is valid");
        (g, old_of_new)
    }

    pub fn full_vertex_set(&self) -> VertexSet {
        VertexSet::from_iter(0..self.n)
    }

    // ---- generators ----

    /// Three vertices with `mu` parallel edges between each pair.
    pub fn shannon(mu: usize) -> Result<Self> {
        if mu == 0 {
            return Err(Error::InvalidParameter("shannon: mu must be >= 1".into()));
        }
        let mut edges = Vec::new();
        for (u, v) in [(0, 1), (0, 2), (1, 2)] {
            for _ in 0..mu {
                edges.push((u, v));
            }
        }
        Multigraph::new(3, edges)
    }

    /// An `n`-cycle with each cycle edge replaced by `mu` parallel edges.
    pub fn ring(n: usize, mu: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter("ring: n must be >= 2".into()));
        }
        if mu == 0 {
            return Err(Error::InvalidParameter("ring: mu must be >= 1".into()));
        }
        let mut edges = Vec::new();
        for i in 0..n {
            let j = (i + 1) % n;
            for _ in 0..mu {
                edges.push((i, j));
            }
        }
        Multigraph::new(n, edges)
    }

    /// The Petersen graph.
    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5)); // outer cycle
        }
        for i in 0..5 {
            edges.push((i, i + 5)); // spokes
        }
        for i in 0..5 {
            edges.push((5 + i, 5 + (i + 2) % 5)); // inner pentagram
        }
        Multigraph::new(10, edges).expect("petersen is valid")
    }

    /// Complete graph on `n` vertices with `mu` parallel edges per pair.
    pub fn complete(n: usize, mu: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter("complete: n must be >= 2".into()));
        }
        if mu == 0 {
            return Err(Error::InvalidParameter("complete: mu must be >= 1".into()));
        }
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                for _ in 0..mu {
                    edges.push((u, v));
                }
            }
        }
        Multigraph::new(n, edges)
    }

    /// Seeded random multigraph: each unordered pair is included
    /// independently with probability `edge_prob`, and an included pair
    /// gets multiplicity uniform in `1..=mu_max`. Bit-identical output
    /// for fixed parameters and seed.
    pub fn random(n: usize, mu_max: usize, edge_prob: f64, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("random: n must be >= 1".into()));
        }
        if mu_max == 0 {
            return Err(Error::InvalidParameter("random: mu_max must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&edge_prob) {
            return Err(Error::InvalidParameter(
                "random: edge_prob must be in [0, 1]".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.random_bool(edge_prob) {
                    let mult = rng.random_range(1..=mu_max);
                    for _ in 0..mult {
                        edges.push((u, v));
                    }
                }
            }
        }
        Multigraph::new(n, edges)
    }

    // ---- text and JSON formats ----

    /// Parse the edge-list text format: first line is the vertex count,
    /// each subsequent non-empty line is `u v` (one line per parallel
    /// edge), `#` begins a comment line.
    pub fn parse(input: &str) -> Result<Self> {
        let mut lines = input
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (first_no, first) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty input, expected a vertex count"))?;
        let n: usize = first
            .parse()
            .map_err(|_| Error::parse(first_no, format!("expected a vertex count, got {first:?}")))?;
        let mut edges = Vec::new();
        for (no, line) in lines {
            let mut it = line.split_whitespace();
            let (a, b) = (it.next(), it.next());
            if it.next().is_some() {
                return Err(Error::parse(no, format!("expected \"u v\", got {line:?}")));
            }
            let (a, b) = match (a, b) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(Error::parse(no, format!("expected \"u v\", got {line:?}"))),
            };
            let u: usize = a
                .parse()
                .map_err(|_| Error::parse(no, format!("bad vertex index {a:?}")))?;
            let v: usize = b
                .parse()
                .map_err(|_| Error::parse(no, format!("bad vertex index {b:?}")))?;
            if u == v {
                return Err(Error::parse(no, format!("loop edge at vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::parse(
                    no,
                    format!("vertex out of range in ({u}, {v}), vertex count is {n}"),
                ));
            }
            edges.push((u, v));
        }
        Multigraph::new(n, edges)
    }

    /// Canonical text form: vertex count, then one `u v` line per edge
    /// with `u <= v`, sorted lexicographically.
    pub fn serialize(&self) -> String {
        let mut out = format!("{}\n", self.n);
        let mut pairs: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        pairs.sort_unstable();
        for (u, v) in pairs {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let doc = GraphJson {
            n: self.n,
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
        };
        serde_json::to_string(&doc).expect("graph serializes")
    }

    pub fn from_json(input: &str) -> Result<Self> {
        let doc: GraphJson = serde_json::from_str(input)
            .map_err(|e| Error::parse(e.line(), format!("bad graph JSON: {e}")))?;
        Multigraph::new(doc.n, doc.edges.into_iter().map(|[u, v]| (u, v)).collect())
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl std::fmt::Debug for Multigraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Multigraph(n={}, edges={:?})", self.n, self.edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doubled_triangle() -> Multigraph {
        Multigraph::shannon(2).unwrap()
    }

    #[test]
    fn max_degree_edgeless() {
        let g = Multigraph::new(3, vec![]).unwrap();
        assert_eq!(g.max_degree(), 0);
    }

    #[test]
    fn max_degree_counts_multiplicity() {
        // Hand enumeration: each vertex of the doubled triangle touches
        // two pairs, two edges each.
        let g = doubled_triangle();
        for v in 0..3 {
            assert_eq!(g.degree(v), 4);
        }
        assert_eq!(g.max_degree(), 4);
    }

    #[test]
    fn max_degree_petersen() {
        let g = Multigraph::petersen();
        assert_eq!(g.vertex_count(), 10);
        assert_eq!(g.edge_count(), 15);
        for v in 0..10 {
            assert_eq!(g.degree(v), 3);
        }
        assert_eq!(g.max_degree(), 3);
    }

    #[test]
    fn multiplicity_cases() {
        let simple = Multigraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(simple.multiplicity(), 1);
        let mut edges = vec![(0, 1), (1, 2), (0, 2)];
        edges.extend([(0, 1), (0, 1)]);
        let tripled = Multigraph::new(3, edges).unwrap();
        assert_eq!(tripled.multiplicity(), 3);
        let edgeless = Multigraph::new(4, vec![]).unwrap();
        assert_eq!(edgeless.multiplicity(), 0);
    }

    #[test]
    fn boundary_cases() {
        let g = doubled_triangle();
        assert!(g.boundary(&g.full_vertex_set()).is_empty());
        let single = VertexSet::from_iter([1]);
        let b = g.boundary(&single);
        assert_eq!(b.len(), 4);
        assert_eq!(b, g.incident_edges(1));

        let path = Multigraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(path.boundary(&VertexSet::from_iter([1])).len(), 2);
    }

    #[test]
    fn induced_subgraph_cases() {
        let g = doubled_triangle();
        let (whole, map) = g.induced_subgraph(&g.full_vertex_set());
        assert_eq!(whole.edge_count(), 6);
        assert_eq!(map, vec![0, 1, 2]);

        let (empty, _) = g.induced_subgraph(&VertexSet::new());
        assert_eq!(empty.vertex_count(), 0);
        assert_eq!(empty.edge_count(), 0);

        let (pair, map) = g.induced_subgraph(&VertexSet::from_iter([0, 1]));
        assert_eq!(pair.vertex_count(), 2);
        assert_eq!(pair.edge_count(), 2);
        assert_eq!(map, vec![0, 1]);
    }

    #[test]
    fn generators() {
        let s2 = Multigraph::shannon(2).unwrap();
        assert_eq!(
            (s2.vertex_count(), s2.edge_count(), s2.max_degree()),
            (3, 6, 4)
        );
        let r = Multigraph::ring(5, 1).unwrap();
        assert_eq!((r.vertex_count(), r.edge_count(), r.max_degree()), (5, 5, 2));
        let c = Multigraph::complete(4, 2).unwrap();
        assert_eq!(c.edge_count(), 12);
        assert!(Multigraph::ring(1, 1).is_err());
        assert!(Multigraph::shannon(0).is_err());
        assert!(Multigraph::random(5, 2, 1.5, 0).is_err());
    }

    #[test]
    fn random_is_deterministic() {
        let a = Multigraph::random(6, 3, 0.5, 1).unwrap();
        let b = Multigraph::random(6, 3, 0.5, 1).unwrap();
        assert_eq!(a, b);
        let c = Multigraph::random(6, 3, 0.5, 2).unwrap();
        assert!(a != c || a.edge_count() == c.edge_count());
    }

    #[test]
    fn parse_triangle() {
        let g = Multigraph::parse("3\n0 1\n1 2\n0 2\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.multiplicity(), 1);
    }

    #[test]
    fn parse_errors() {
        match Multigraph::parse("2\n0 0\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected loop parse error, got {other:?}"),
        }
        assert!(Multigraph::parse("2\n0 5\n").is_err());
        assert!(Multigraph::parse("2\nx y\n").is_err());
        assert!(Multigraph::parse("").is_err());
    }

    #[test]
    fn parse_comments_and_blanks() {
        let g = Multigraph::parse("# a triangle\n3\n\n0 1\n# middle\n1 2\n0 2\n").unwrap();
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn serialize_round_trip() {
        let g = doubled_triangle();
        let s = g.serialize();
        let h = Multigraph::parse(&s).unwrap();
        assert_eq!(h.serialize(), s);
        assert_eq!(h.vertex_count(), g.vertex_count());
        assert_eq!(h.edge_count(), g.edge_count());
        // canonical form of an unsorted input
        let s2 = Multigraph::parse("3\n2 1\n1 0\n0 2\n").unwrap().serialize();
        assert_eq!(s2, "3\n0 1\n0 2\n1 2\n");
    }

    #[test]
    fn json_round_trip() {
        let g = Multigraph::petersen();
        let h = Multigraph::from_json(&g.to_json()).unwrap();
        assert_eq!(g, h);
    }
}
