//! Exact chromatic index, criticality and elementarity by backtracking
//! search. This module is the independent ground truth for everything
//! the heuristic engine and the structural suites claim; it is kept
//! self-contained (no LP or SAT backends) for that reason.
//!
//! Edges are ordered by decreasing endpoint-degree sum and color
//! symmetry is broken by only allowing each search branch to open one
//! new color, which keeps instances up to the default 40-edge cap
//! comfortable.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coloring::{Color, PartialColoring};
use crate::graph::{EdgeId, Multigraph};
use crate::{ColorSet, Error, Result};

/// Default cap on `||G||` for exact searches.
pub const DEFAULT_EDGE_CAP: usize = 40;

fn check_cap(g: &Multigraph, cap: usize) -> Result<()> {
    if g.edge_count() > cap {
        return Err(Error::Capacity {
            what: "edges for exact search",
            cap,
            actual: g.edge_count(),
        });
    }
    Ok(())
}

/// Edge processing order: decreasing endpoint-degree sum, ties by id.
fn search_order(g: &Multigraph, skip: Option<EdgeId>) -> Vec<EdgeId> {
    let mut order: Vec<EdgeId> = (0..g.edge_count()).filter(|&e| Some(e) != skip).collect();
    order.sort_by_key(|&e| {
        let (u, v) = g.endpoints(e);
        (std::cmp::Reverse(g.degree(u) + g.degree(v)), e)
    });
    order
}

/// Backtracking search for a proper assignment of colors `1..=k` to the
/// listed edges. Returns the colors in `order`'s indexing.
///
/// Dynamic most-constrained-edge selection with forward checking, and
/// color symmetry broken by allowing at most one fresh color per
/// branch.
fn backtrack(g: &Multigraph, k: Color, order: &[EdgeId]) -> Option<Vec<Color>> {
    if order.is_empty() {
        return Some(Vec::new());
    }
    if k == 0 {
        return None;
    }
    let mut state = SearchState {
        g,
        k,
        used: vec![ColorSet::EMPTY; g.vertex_count()],
        assigned: vec![0; order.len()],
        pos_of_edge: {
            let mut m = vec![usize::MAX; g.edge_count()];
            for (pos, &e) in order.iter().enumerate() {
                m[e] = pos;
            }
            m
        },
        order,
        remaining: order.len(),
        max_used: 0,
    };
    if state.solve() {
        Some(state.assigned)
    } else {
        None
    }
}

struct SearchState<'a> {
    g: &'a Multigraph,
    k: Color,
    used: Vec<ColorSet>,
    /// Color per position in `order`; 0 when unassigned.
    assigned: Vec<Color>,
    pos_of_edge: Vec<usize>,
    order: &'a [EdgeId],
    remaining: usize,
    max_used: Color,
}

impl SearchState<'_> {
    fn avail(&self, e: EdgeId, cap: Color) -> ColorSet {
        let (u, v) = self.g.endpoints(e);
        ColorSet::full(cap).difference(self.used[u].union(self.used[v]))
    }

    fn solve(&mut self) -> bool {
        if self.remaining == 0 {
            return true;
        }
        let cap = self.k.min(self.max_used + 1);
        // most constrained edge first; ties by original order
        let mut best: Option<(usize, usize)> = None;
        for (pos, &e) in self.order.iter().enumerate() {
            if self.assigned[pos] != 0 {
                continue;
            }
            let n = self.avail(e, cap).len();
            if n == 0 {
                return false;
            }
            if best.is_none_or(|(bn, _)| n < bn) {
                best = Some((n, pos));
                if n == 1 {
                    break;
                }
            }
        }
        let (_, pos) = best.expect("some edge is unassigned");
        let e = self.order[pos];
        let (u, v) = self.g.endpoints(e);
        for c in self.avail(e, cap).iter() {
            self.used[u].insert(c);
            self.used[v].insert(c);
            self.assigned[pos] = c;
            self.remaining -= 1;
            let saved_max = self.max_used;
            self.max_used = self.max_used.max(c);
            if self.forward_ok(u, v) && self.solve() {
                return true;
            }
            self.max_used = saved_max;
            self.remaining += 1;
            self.assigned[pos] = 0;
            self.used[u].remove(c);
            self.used[v].remove(c);
        }
        false
    }

    /// Sound pruning: a neighboring uncolored edge with no color left
    /// in the full palette can never be completed.
    fn forward_ok(&self, u: usize, v: usize) -> bool {
        for w in [u, v] {
            for &f in self.g.incident_edges(w) {
                let pos = self.pos_of_edge[f];
                if pos != usize::MAX
                    && self.assigned[pos] == 0
                    && self.avail(f, self.k).is_empty()
                {
                    return false;
                }
            }
        }
        true
    }
}

/// Exact decision: does `g` admit a proper total k-edge-coloring? The
/// witness is in edge-id order when one exists.
pub fn is_k_colorable(g: &Multigraph, k: Color) -> (bool, Option<Vec<Color>>) {
    let order = search_order(g, None);
    match backtrack(g, k, &order) {
        Some(by_pos) => {
            let mut colors = vec![0; g.edge_count()];
            for (pos, &e) in order.iter().enumerate() {
                colors[e] = by_pos[pos];
            }
            debug_assert!(crate::coloring::is_proper_total(g, k, &colors));
            (true, Some(colors))
        }
        None => (false, None),
    }
}

/// Color every edge except `skip` with `k` colors, as a
/// [`PartialColoring`] with `skip` left uncolored. `None` if impossible.
pub fn color_all_but(g: &Multigraph, k: Color, skip: EdgeId) -> Result<Option<PartialColoring>> {
    let order = search_order(g, Some(skip));
    match backtrack(g, k, &order) {
        Some(by_pos) => {
            let mut colors = vec![None; g.edge_count()];
            for (pos, &e) in order.iter().enumerate() {
                colors[e] = Some(by_pos[pos]);
            }
            Ok(Some(PartialColoring::new(g, k, skip, colors)?))
        }
        None => Ok(None),
    }
}

/// Exact chromatic index, capped at [`DEFAULT_EDGE_CAP`] edges.
pub fn chi_prime_exact(g: &Multigraph) -> Result<Color> {
    chi_prime_exact_capped(g, DEFAULT_EDGE_CAP)
}

pub fn chi_prime_exact_capped(g: &Multigraph, cap: usize) -> Result<Color> {
    check_cap(g, cap)?;
    if g.edge_count() == 0 {
        return Ok(0);
    }
    let mut k = g.max_degree() as Color;
    loop {
        if is_k_colorable(g, k).0 {
            return Ok(k);
        }
        k += 1;
        // every graph is ||G||-colorable, so this terminates
        debug_assert!(k as usize <= g.edge_count());
    }
}

/// Is `g` minus `skip` colorable with `k` colors?
fn colorable_without(g: &Multigraph, k: Color, skip: EdgeId) -> bool {
    let order = search_order(g, Some(skip));
    backtrack(g, k, &order).is_some()
}

/// Edges whose removal lowers the chromatic index.
pub fn critical_edges(g: &Multigraph) -> Result<Vec<EdgeId>> {
    check_cap(g, DEFAULT_EDGE_CAP)?;
    let chi = chi_prime_exact(g)?;
    if chi == 0 {
        return Ok(Vec::new());
    }
    Ok((0..g.edge_count())
        .filter(|&e| colorable_without(g, chi - 1, e))
        .collect())
}

/// Every edge critical.
pub fn is_critical(g: &Multigraph) -> Result<bool> {
    Ok(critical_edges(g)?.len() == g.edge_count())
}

/// Is the chromatic index equal to the ceiling of the fractional one?
pub fn is_elementary_graph(g: &Multigraph) -> Result<bool> {
    let chi = chi_prime_exact(g)?;
    let frac = crate::fractional::chi_f_exact(g)?;
    Ok(chi == frac.ceil_chi_f)
}

/// A k-triple: a graph with `chi' = k + 1`, a critical edge `e`, and a
/// k-edge-coloring of `G - e`. The Tashkinov machinery of the tree
/// module is guaranteed only in the `k >= max_degree + 1` regime; see
/// [`KTriple::meets_tree_regime`].
#[derive(Clone, Debug)]
pub struct KTriple {
    pub edge: EdgeId,
    pub coloring: PartialColoring,
}

impl KTriple {
    pub fn k(&self) -> Color {
        self.coloring.k()
    }

    /// True when `k >= max_degree + 1`, the regime in which all the
    /// tree-elementarity guarantees apply.
    pub fn meets_tree_regime(&self, g: &Multigraph) -> bool {
        self.k() as usize >= g.max_degree() + 1
    }
}

/// Build a k-triple from `g` when one exists: requires `chi' > max
/// degree` and a critical edge. The seed picks the critical edge and
/// scrambles the oracle coloring with random Kempe flips, so different
/// seeds exercise different colorings of the same graph.
pub fn make_k_triple(g: &Multigraph, seed: u64) -> Result<Option<KTriple>> {
    TripleFactory::new(g)?.make(seed)
}

/// Amortizes the chromatic-index and criticality computation when many
/// triples are drawn from one graph.
pub struct TripleFactory<'g> {
    g: &'g Multigraph,
    chi: Color,
    critical: Vec<EdgeId>,
}

impl<'g> TripleFactory<'g> {
    pub fn new(g: &'g Multigraph) -> Result<Self> {
        check_cap(g, DEFAULT_EDGE_CAP)?;
        let chi = chi_prime_exact(g)?;
        let critical = if chi > g.max_degree() as Color && chi > 0 {
            critical_edges(g)?
        } else {
            Vec::new()
        };
        Ok(TripleFactory { g, chi, critical })
    }

    pub fn chi(&self) -> Color {
        self.chi
    }

    /// Can this graph yield k-triples in the tree regime?
    pub fn in_regime(&self) -> bool {
        !self.critical.is_empty() && self.chi as usize >= self.g.max_degree() + 2
    }

    pub fn make(&self, seed: u64) -> Result<Option<KTriple>> {
        let g = self.g;
        if self.chi <= g.max_degree() as Color || self.chi == 0 || self.critical.is_empty() {
            return Ok(None);
        }
        let k = self.chi - 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let edge = self.critical[rng.random_range(0..self.critical.len())];
        let mut coloring =
            color_all_but(g, k, edge)?.expect("critical edge leaves a k-colorable rest");
        // scramble: a short random walk over proper colorings
        let flips = 3 * g.edge_count();
        for _ in 0..flips {
            let v = rng.random_range(0..g.vertex_count());
            let alpha = rng.random_range(1..=k);
            let beta = rng.random_range(1..=k);
            if alpha == beta {
                continue;
            }
            let chain = coloring.kempe_chain(g, v, alpha, beta)?;
            if !chain.is_single_vertex() {
                coloring = coloring.flip(g, &chain)?;
            }
        }
        Ok(Some(KTriple { edge, coloring }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_obstruction() {
        let g = Multigraph::petersen();
        assert!(!is_k_colorable(&g, 2).0);
    }

    #[test]
    fn vizing_upper_bound_witnessed() {
        for (n, mu, seed) in [(4, 2, 1), (5, 2, 2), (6, 3, 3)] {
            let g = Multigraph::random(n, mu, 0.6, seed).unwrap();
            let k = (g.max_degree() + g.multiplicity()) as Color;
            let (ok, witness) = is_k_colorable(&g, k);
            assert!(ok, "graph must be (max_degree + multiplicity)-colorable");
            assert!(crate::coloring::is_proper_total(
                &g,
                k,
                &witness.unwrap()
            ));
        }
    }

    #[test]
    fn shannon_two() {
        let g = Multigraph::shannon(2).unwrap();
        assert!(!is_k_colorable(&g, 5).0);
        assert!(is_k_colorable(&g, 6).0);
        assert_eq!(chi_prime_exact(&g).unwrap(), 6);
    }

    #[test]
    fn shannon_family_chi() {
        for mu in 1..=4 {
            let g = Multigraph::shannon(mu).unwrap();
            assert_eq!(chi_prime_exact(&g).unwrap(), 3 * mu as Color);
        }
    }

    #[test]
    fn petersen_chi_is_four() {
        let g = Multigraph::petersen();
        assert_eq!(chi_prime_exact(&g).unwrap(), 4);
    }

    #[test]
    fn tiny_graphs() {
        let single = Multigraph::new(1, vec![]).unwrap();
        assert_eq!(chi_prime_exact(&single).unwrap(), 0);
        let edge = Multigraph::new(2, vec![(0, 1)]).unwrap();
        assert_eq!(chi_prime_exact(&edge).unwrap(), 1);
    }

    #[test]
    fn capacity_error() {
        let g = Multigraph::complete(7, 2).unwrap(); // 42 edges
        match chi_prime_exact(&g) {
            Err(Error::Capacity { .. }) => {}
            other => panic!("expected capacity error, got {other:?}"),
        }
    }

    #[test]
    fn shannon_every_edge_critical() {
        for mu in 1..=3 {
            let g = Multigraph::shannon(mu).unwrap();
            assert!(is_critical(&g).unwrap());
        }
    }

    #[test]
    fn disjoint_union_not_critical() {
        // a triangle plus an isolated-component edge
        let g = Multigraph::new(5, vec![(0, 1), (1, 2), (0, 2), (3, 4)]).unwrap();
        assert!(!is_critical(&g).unwrap());
        assert_eq!(critical_edges(&g).unwrap().len(), 3);
    }

    #[test]
    fn elementarity_examples() {
        for mu in 1..=3 {
            assert!(is_elementary_graph(&Multigraph::shannon(mu).unwrap()).unwrap());
        }
        // Petersen: chi' = 4 but ceil(chi_f) = 3
        assert!(!is_elementary_graph(&Multigraph::petersen()).unwrap());
    }

    #[test]
    fn k_triple_from_shannon() {
        let g = Multigraph::shannon(2).unwrap();
        let t = make_k_triple(&g, 7).unwrap().expect("chi' = Delta + 2");
        assert_eq!(t.k(), 5);
        assert!(t.meets_tree_regime(&g));
        t.coloring.validate(&g).unwrap();
        assert_eq!(t.coloring.uncolored_edge(), t.edge);
    }

    #[test]
    fn k_triple_regime_flag() {
        // simple triangle: chi' = 3 = Delta + 1, so k = 2 = Delta; the
        // triple exists but is outside the tree regime
        let g = Multigraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let t = make_k_triple(&g, 0).unwrap().expect("triangle is critical");
        assert_eq!(t.k(), 2);
        assert!(!t.meets_tree_regime(&g));
    }

    #[test]
    fn k_triple_none_for_class_one() {
        // bipartite simple graph: chi' = Delta, no triple
        let g = Multigraph::new(4, vec![(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        assert!(make_k_triple(&g, 0).unwrap().is_none());
    }

    #[test]
    fn k_triple_deterministic() {
        let g = Multigraph::ring(5, 3).unwrap();
        let a = make_k_triple(&g, 42).unwrap().unwrap();
        let b = make_k_triple(&g, 42).unwrap().unwrap();
        assert_eq!(a.edge, b.edge);
        assert_eq!(a.coloring, b.coloring);
    }

    #[test]
    fn sandwich_on_small_corpus() {
        for seed in 0..30 {
            let g = Multigraph::random(5, 3, 0.5, seed).unwrap();
            let chi = chi_prime_exact(&g).unwrap() as usize;
            let delta = g.max_degree();
            let frac = crate::fractional::chi_f_exact(&g).unwrap();
            assert!(delta <= frac.ceil_chi_f as usize);
            assert!(frac.ceil_chi_f <= chi as Color);
            assert!(chi <= delta + g.multiplicity());
        }
    }
}
