//! Partial k-edge-colorings of `G - e` and Kempe chain machinery.
//!
//! A [`PartialColoring`] is a proper assignment of colors `1..=k` to
//! every edge except one distinguished uncolored edge. The uncolored
//! edge is part of the coloring object, not of the graph, so no graph
//! surgery is ever needed. Values are immutable once produced by an
//! operation; [`PartialColoring::flip`] returns a new coloring so that
//! search code can backtrack cheaply.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::{EdgeId, Multigraph, VertexId};
use crate::{bitset::MAX_COLORS, ColorSet, Error, Result, VertexSet};

pub type Color = u32;

#[derive(Clone, PartialEq, Eq)]
pub struct PartialColoring {
    k: Color,
    uncolored: EdgeId,
    colors: Vec<Option<Color>>,
    missing: Vec<ColorSet>,
}

impl PartialColoring {
    /// Validate and build a coloring. `colors[e]` must be `None` exactly
    /// for `uncolored` and a color in `1..=k` otherwise, and no two
    /// edges sharing a vertex may have equal colors.
    pub fn new(
        g: &Multigraph,
        k: Color,
        uncolored: EdgeId,
        colors: Vec<Option<Color>>,
    ) -> Result<Self> {
        if k > MAX_COLORS {
            return Err(Error::Capacity {
                what: "colors",
                cap: MAX_COLORS as usize,
                actual: k as usize,
            });
        }
        if uncolored >= g.edge_count() {
            return Err(Error::usage(format!("uncolored edge {uncolored} out of range")));
        }
        if colors.len() != g.edge_count() {
            return Err(Error::usage(format!(
                "expected {} color entries, got {}",
                g.edge_count(),
                colors.len()
            )));
        }
        for (e, c) in colors.iter().enumerate() {
            match c {
                None if e == uncolored => {}
                None => return Err(Error::usage(format!("edge {e} is unexpectedly uncolored"))),
                Some(_) if e == uncolored => {
                    return Err(Error::usage(format!(
                        "uncolored edge {uncolored} carries a color"
                    )))
                }
                Some(c) if *c == 0 || *c > k => {
                    return Err(Error::usage(format!("edge {e} color {c} outside 1..={k}")))
                }
                Some(_) => {}
            }
        }
        let mut present = vec![ColorSet::EMPTY; g.vertex_count()];
        for (e, c) in colors.iter().enumerate() {
            if let Some(c) = c {
                let (u, v) = g.endpoints(e);
                for w in [u, v] {
                    if present[w].contains(*c) {
                        return Err(Error::usage(format!(
                            "color {c} repeats at vertex {w} (edge {e})"
                        )));
                    }
                    present[w].insert(*c);
                }
            }
        }
        let missing = present
            .into_iter()
            .map(|p| ColorSet::full(k).difference(p))
            .collect();
        Ok(PartialColoring {
            k,
            uncolored,
            colors,
            missing,
        })
    }

    pub fn k(&self) -> Color {
        self.k
    }

    pub fn uncolored_edge(&self) -> EdgeId {
        self.uncolored
    }

    pub fn color(&self, e: EdgeId) -> Option<Color> {
        self.colors[e]
    }

    /// Missing colors at `v`: all of `1..=k` not assigned to any edge
    /// incident to `v`. The uncolored edge contributes nothing.
    pub fn missing(&self, v: VertexId) -> ColorSet {
        self.missing[v]
    }

    /// Colors present at `v`.
    pub fn present(&self, v: VertexId) -> ColorSet {
        ColorSet::full(self.k).difference(self.missing[v])
    }

    /// Union of missing sets over a vertex set.
    pub fn missing_union(&self, x: &VertexSet) -> ColorSet {
        x.iter()
            .fold(ColorSet::EMPTY, |acc, v| acc.union(self.missing[v]))
    }

    /// Union of present sets over a vertex set.
    pub fn present_union(&self, x: &VertexSet) -> ColorSet {
        x.iter()
            .fold(ColorSet::EMPTY, |acc, v| acc.union(self.present(v)))
    }

    /// Colors used on an edge set; uncolored edges contribute nothing.
    pub fn colors_on<I: IntoIterator<Item = EdgeId>>(&self, edges: I) -> ColorSet {
        let mut s = ColorSet::EMPTY;
        for e in edges {
            if let Some(c) = self.colors[e] {
                s.insert(c);
            }
        }
        s
    }

    fn require_ends_inside(&self, g: &Multigraph, x: &VertexSet) -> Result<()> {
        let (u, v) = g.endpoints(self.uncolored);
        if x.contains(u) && x.contains(v) {
            Ok(())
        } else {
            Err(Error::usage(
                "vertex set must contain both ends of the uncolored edge",
            ))
        }
    }

    /// Are the missing-color sets over `x` pairwise disjoint?
    pub fn is_elementary(&self, g: &Multigraph, x: &VertexSet) -> Result<bool> {
        self.require_ends_inside(g, x)?;
        let mut seen = ColorSet::EMPTY;
        for v in x.iter() {
            if !seen.intersection(self.missing[v]).is_empty() {
                return Ok(false);
            }
            seen = seen.union(self.missing[v]);
        }
        Ok(true)
    }

    /// Does no missing color of `x` appear on a boundary edge of `x`?
    pub fn is_closed(&self, g: &Multigraph, x: &VertexSet) -> Result<bool> {
        self.require_ends_inside(g, x)?;
        let missing = self.missing_union(x);
        Ok(self
            .colors_on(g.boundary(x))
            .intersection(missing)
            .is_empty())
    }

    /// Closed, and additionally every color appears at most once on the
    /// boundary of `x`.
    pub fn is_strongly_closed(&self, g: &Multigraph, x: &VertexSet) -> Result<bool> {
        if !self.is_closed(g, x)? {
            return Ok(false);
        }
        let mut seen = ColorSet::EMPTY;
        for e in g.boundary(x) {
            if let Some(c) = self.colors[e] {
                if seen.contains(c) {
                    return Ok(false);
                }
                seen.insert(c);
            }
        }
        Ok(true)
    }

    /// The maximal two-colored component of colors `{alpha, beta}`
    /// containing `v`. If `v` misses both colors the chain is the single
    /// vertex `v` with no edges.
    pub fn kempe_chain(
        &self,
        g: &Multigraph,
        v: VertexId,
        alpha: Color,
        beta: Color,
    ) -> Result<KempeChain> {
        self.check_color_pair(alpha, beta)?;
        let chain_edges_at = |w: VertexId| -> Vec<EdgeId> {
            g.incident_edges(w)
                .iter()
                .copied()
                .filter(|&e| matches!(self.colors[e], Some(c) if c == alpha || c == beta))
                .collect()
        };
        let start_edges = chain_edges_at(v);
        debug_assert!(start_edges.len() <= 2);
        if start_edges.is_empty() {
            return Ok(KempeChain {
                colors: (alpha.min(beta), alpha.max(beta)),
                kind: ChainKind::Path,
                edges: Vec::new(),
                vertices: vec![v],
            });
        }

        // walk away from v along `first`, collecting edges and vertices
        let walk = |first: EdgeId| -> (Vec<EdgeId>, Vec<VertexId>, bool) {
            let mut edges = vec![first];
            let mut verts = vec![v, g.other_end(first, v)];
            loop {
                let w = *verts.last().unwrap();
                if w == v {
                    return (edges, verts, true); // cycle closed
                }
                let next = chain_edges_at(w)
                    .into_iter()
                    .find(|&e| e != *edges.last().unwrap());
                match next {
                    Some(e) => {
                        edges.push(e);
                        verts.push(g.other_end(e, w));
                    }
                    None => return (edges, verts, false),
                }
            }
        };

        let (mut edges, mut vertices, closed) = walk(start_edges[0]);
        let kind = if closed {
            // drop the repeated start vertex
            vertices.pop();
            ChainKind::Cycle
        } else if start_edges.len() == 2 {
            // v is interior: extend in the other direction
            let (edges2, vertices2, closed2) = walk(start_edges[1]);
            debug_assert!(!closed2);
            edges.reverse();
            vertices.reverse();
            edges.extend(edges2);
            vertices.extend(vertices2.into_iter().skip(1));
            ChainKind::Path
        } else {
            ChainKind::Path
        };

        let mut chain = KempeChain {
            colors: (alpha.min(beta), alpha.max(beta)),
            kind,
            edges,
            vertices,
        };
        chain.canonicalize();
        Ok(chain)
    }

    /// The chain containing `u`, ordered from `u`. `u` must be an end of
    /// its chain (a path end or an isolated vertex).
    pub fn kempe_chain_from(
        &self,
        g: &Multigraph,
        u: VertexId,
        alpha: Color,
        beta: Color,
    ) -> Result<KempeChain> {
        let mut chain = self.kempe_chain(g, u, alpha, beta)?;
        match chain.kind {
            ChainKind::Cycle => Err(Error::usage(format!(
                "vertex {u} lies on a two-colored cycle, not a path end"
            ))),
            ChainKind::Path => {
                if chain.vertices.first() == Some(&u) {
                    Ok(chain)
                } else if chain.vertices.last() == Some(&u) {
                    chain.edges.reverse();
                    chain.vertices.reverse();
                    Ok(chain)
                } else {
                    Err(Error::usage(format!(
                        "vertex {u} is interior to its two-colored chain"
                    )))
                }
            }
        }
    }

    fn check_color_pair(&self, alpha: Color, beta: Color) -> Result<()> {
        if alpha == beta {
            return Err(Error::usage("chain colors must differ"));
        }
        for c in [alpha, beta] {
            if c == 0 || c > self.k {
                return Err(Error::usage(format!("color {c} outside 1..={}", self.k)));
            }
        }
        Ok(())
    }

    /// Exchange the two chain colors on the chain's edges, returning a
    /// new coloring. The chain must still be a maximal alternating
    /// component of the current coloring; a stale chain is rejected.
    pub fn flip(&self, g: &Multigraph, chain: &KempeChain) -> Result<PartialColoring> {
        let (alpha, beta) = chain.colors;
        let anchor = *chain
            .vertices
            .first()
            .ok_or_else(|| Error::usage("empty chain"))?;
        let fresh = self.kempe_chain(g, anchor, alpha, beta)?;
        let mut want = chain.edges.clone();
        let mut have = fresh.edges.clone();
        want.sort_unstable();
        have.sort_unstable();
        if want != have {
            return Err(Error::usage(
                "stale chain: edges no longer form this two-colored component",
            ));
        }
        let mut out = self.clone();
        for &e in &chain.edges {
            let c = out.colors[e].expect("chain edges are colored");
            out.colors[e] = Some(if c == alpha { beta } else { alpha });
        }
        for &v in &chain.vertices {
            out.recompute_missing(g, v);
        }
        debug_assert!(out.validate(g).is_ok());
        Ok(out)
    }

    /// Do `c1` and `c2` agree on every edge inside or on the boundary of
    /// `h_vertices`?
    pub fn is_stable(
        g: &Multigraph,
        h_vertices: &VertexSet,
        c1: &PartialColoring,
        c2: &PartialColoring,
    ) -> Result<bool> {
        if c1.k != c2.k {
            return Err(Error::usage("stability requires equal k"));
        }
        if c1.uncolored != c2.uncolored {
            return Err(Error::usage("stability requires the same uncolored edge"));
        }
        c1.require_ends_inside(g, h_vertices)?;
        for e in 0..g.edge_count() {
            let (u, v) = g.endpoints(e);
            if (h_vertices.contains(u) || h_vertices.contains(v)) && c1.colors[e] != c2.colors[e] {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Full re-validation: properness, completeness, missing-set
    /// consistency. Used by tests and debug assertions to catch drift.
    pub fn validate(&self, g: &Multigraph) -> Result<()> {
        let rebuilt = PartialColoring::new(g, self.k, self.uncolored, self.colors.clone())?;
        if rebuilt.missing != self.missing {
            return Err(Error::usage("missing-color sets drifted from assignment"));
        }
        Ok(())
    }

    fn recompute_missing(&mut self, g: &Multigraph, v: VertexId) {
        let mut present = ColorSet::EMPTY;
        for &e in g.incident_edges(v) {
            if let Some(c) = self.colors[e] {
                present.insert(c);
            }
        }
        self.missing[v] = ColorSet::full(self.k).difference(present);
    }

    // Crate-internal mutators for the colorer. They keep missing sets in
    // step and are always followed by a debug validation at call sites.

    pub(crate) fn set_color(&mut self, g: &Multigraph, e: EdgeId, c: Color) {
        debug_assert!(self.colors[e].is_none());
        self.colors[e] = Some(c);
        let (u, v) = g.endpoints(e);
        self.missing[u].remove(c);
        self.missing[v].remove(c);
    }

    pub(crate) fn unset_color(&mut self, g: &Multigraph, e: EdgeId) -> Option<Color> {
        let old = self.colors[e].take();
        if old.is_some() {
            let (u, v) = g.endpoints(e);
            self.recompute_missing(g, u);
            self.recompute_missing(g, v);
        }
        old
    }

    /// JSON dump: `{"k": int, "uncolored": edge_id, "colors": {edge_id: color}}`.
    pub fn to_json(&self) -> String {
        let colors: BTreeMap<String, Color> = self
            .colors
            .iter()
            .enumerate()
            .filter_map(|(e, c)| c.map(|c| (e.to_string(), c)))
            .collect();
        let doc = ColoringJson {
            k: self.k,
            uncolored: self.uncolored,
            colors,
        };
        serde_json::to_string(&doc).expect("coloring serializes")
    }

    pub fn from_json(g: &Multigraph, input: &str) -> Result<Self> {
        let doc: ColoringJson = serde_json::from_str(input)
            .map_err(|e| Error::parse(e.line(), format!("bad coloring JSON: {e}")))?;
        let mut colors = vec![None; g.edge_count()];
        for (e, c) in doc.colors {
            let e: EdgeId = e
                .parse()
                .map_err(|_| Error::usage(format!("bad edge id {e:?}")))?;
            if e >= g.edge_count() {
                return Err(Error::usage(format!("edge id {e} out of range")));
            }
            colors[e] = Some(c);
        }
        PartialColoring::new(g, doc.k, doc.uncolored, colors)
    }
}

#[derive(Serialize, Deserialize)]
struct ColoringJson {
    k: Color,
    uncolored: EdgeId,
    colors: BTreeMap<String, Color>,
}

impl std::fmt::Debug for PartialColoring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "PartialColoring(k={}, uncolored={}, colors={:?})",
            self.k, self.uncolored, self.colors
        )
    }
}

/// Is `colors` a proper total k-edge-coloring of `g`?
pub fn is_proper_total(g: &Multigraph, k: Color, colors: &[Color]) -> bool {
    if colors.len() != g.edge_count() {
        return false;
    }
    if colors.iter().any(|&c| c == 0 || c > k) {
        return false;
    }
    let mut seen: Vec<std::collections::HashSet<Color>> =
        vec![std::collections::HashSet::new(); g.vertex_count()];
    for (e, &c) in colors.iter().enumerate() {
        let (u, v) = g.endpoints(e);
        if !seen[u].insert(c) || !seen[v].insert(c) {
            return false;
        }
    }
    true
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ChainKind {
    Path,
    Cycle,
}

/// A maximal path or cycle component of the two-colored subgraph.
#[derive(Clone, Debug)]
pub struct KempeChain {
    colors: (Color, Color),
    kind: ChainKind,
    edges: Vec<EdgeId>,
    /// Path: `edges.len() + 1` vertices in walk order.
    /// Cycle: `edges.len()` vertices, the walk returning to the first.
    vertices: Vec<VertexId>,
}

impl KempeChain {
    pub fn colors(&self) -> (Color, Color) {
        self.colors
    }

    pub fn kind(&self) -> ChainKind {
        self.kind
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    pub fn is_single_vertex(&self) -> bool {
        self.edges.is_empty()
    }

    /// Paths run from the endpoint with the smaller vertex index; cycles
    /// start at their smallest vertex and step toward the
    /// smaller-indexed neighbor.
    fn canonicalize(&mut self) {
        match self.kind {
            ChainKind::Path => {
                if self.vertices.first() > self.vertices.last() {
                    self.vertices.reverse();
                    self.edges.reverse();
                }
            }
            ChainKind::Cycle => {
                let m = self.vertices.len();
                let start = (0..m).min_by_key(|&i| self.vertices[i]).unwrap();
                // direction tie-break by edge id covers parallel edges
                let fwd = (self.vertices[(start + 1) % m], self.edges[start]);
                let bwd = (
                    self.vertices[(start + m - 1) % m],
                    self.edges[(start + m - 1) % m],
                );
                let mut verts = Vec::with_capacity(m);
                let mut edges = Vec::with_capacity(m);
                if fwd <= bwd {
                    for i in 0..m {
                        verts.push(self.vertices[(start + i) % m]);
                        edges.push(self.edges[(start + i) % m]);
                    }
                } else {
                    for i in 0..m {
                        verts.push(self.vertices[(start + m - i) % m]);
                        edges.push(self.edges[(start + m - 1 - i) % m]);
                    }
                }
                self.vertices = verts;
                self.edges = edges;
            }
        }
    }
}
