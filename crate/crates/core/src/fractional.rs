//! Exact fractional chromatic index by enumeration over odd induced
//! subgraphs, with density certificates.
//!
//! When the fractional index exceeds the maximum degree it equals the
//! maximum of `|E(H)| / floor(|V(H)| / 2)` over induced subgraphs `H`
//! with an odd number of vertices, so a branch-and-bound over vertex
//! subsets is exact at desk scale. All arithmetic is exact rational;
//! ties at the ceiling boundary must not depend on floating point.

use num_rational::Ratio;
use serde::Serialize;

use crate::graph::Multigraph;
use crate::{Error, Result, VertexSet};

/// Default cap on `|G|` for subset enumeration.
pub const DEFAULT_VERTEX_CAP: usize = 20;

pub type Rational = Ratio<u64>;

/// An odd vertex set witnessing a lower bound on the chromatic index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityCertificate {
    /// Vertex ids, increasing. Odd count, at least 3.
    pub vertices: Vec<usize>,
    /// `ceil(2 * ||G[X]|| / (|X| - 1))`.
    pub density: u64,
}

impl DensityCertificate {
    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::from_iter(self.vertices.iter().copied())
    }
}

/// Ceiling density of the subgraph induced by an odd set `x`.
pub fn density(g: &Multigraph, x: &VertexSet) -> Result<u64> {
    if x.len() < 3 || x.len() % 2 == 0 {
        return Err(Error::usage(format!(
            "density needs an odd vertex set of size >= 3, got size {}",
            x.len()
        )));
    }
    let inside = g.edges_inside(x) as u64;
    Ok((2 * inside).div_ceil(x.len() as u64 - 1))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalResult {
    /// Exact fractional chromatic index.
    pub chi_f: Rational,
    pub ceil_chi_f: u32,
    /// An odd set achieving the maximum; present iff `chi_f` exceeds the
    /// maximum degree.
    pub witness: Option<DensityCertificate>,
}

/// Exact fractional chromatic index by branch and bound over odd
/// induced subgraphs.
pub fn chi_f_exact(g: &Multigraph) -> Result<FractionalResult> {
    chi_f_exact_capped(g, DEFAULT_VERTEX_CAP)
}

pub fn chi_f_exact_capped(g: &Multigraph, cap: usize) -> Result<FractionalResult> {
    if g.vertex_count() > cap {
        return Err(Error::Capacity {
            what: "vertices for odd-subgraph enumeration",
            cap,
            actual: g.vertex_count(),
        });
    }
    let delta = Rational::from_integer(g.max_degree() as u64);
    let mut best = delta;
    let mut best_set: Option<Vec<usize>> = None;

    let n = g.vertex_count();
    if n >= 3 {
        let mut state = Enumerator {
            g,
            chosen: Vec::new(),
            best: &mut best,
            best_set: &mut best_set,
        };
        state.descend(0);
    }

    let ceil = best.ceil().to_integer() as u32;
    let witness = match best_set {
        Some(vertices) if best > delta => {
            let x = VertexSet::from_iter(vertices.iter().copied());
            Some(DensityCertificate {
                density: density(g, &x)?,
                vertices,
            })
        }
        _ => None,
    };
    Ok(FractionalResult {
        chi_f: best,
        ceil_chi_f: ceil,
        witness,
    })
}

struct Enumerator<'a> {
    g: &'a Multigraph,
    chosen: Vec<usize>,
    best: &'a mut Rational,
    best_set: &'a mut Option<Vec<usize>>,
}

impl Enumerator<'_> {
    /// Try all completions of `chosen` with vertices `>= next`.
    fn descend(&mut self, next: usize) {
        let n = self.g.vertex_count();
        if self.chosen.len() >= 3 && self.chosen.len() % 2 == 1 {
            let x = VertexSet::from_iter(self.chosen.iter().copied());
            let inside = self.g.edges_inside(&x) as u64;
            let value = Ratio::new(inside, (self.chosen.len() as u64) / 2);
            if value > *self.best {
                *self.best = value;
                *self.best_set = Some(self.chosen.clone());
            }
        }
        if next >= n {
            return;
        }
        if self.prune(next) {
            return;
        }
        self.chosen.push(next);
        self.descend(next + 1);
        self.chosen.pop();
        self.descend(next + 1);
    }

    /// A subset extending `chosen` with candidates from `next..` cannot
    /// beat the incumbent if even the degree-sum and total-edge upper
    /// bounds on its edge count, over the smallest admissible odd size,
    /// stay at or below it.
    fn prune(&self, next: usize) -> bool {
        let g = self.g;
        let full: Vec<usize> = self
            .chosen
            .iter()
            .copied()
            .chain(next..g.vertex_count())
            .collect();
        let degree_sum: usize = full.iter().map(|&v| g.degree(v)).sum();
        let all = VertexSet::from_iter(full.iter().copied());
        let edges_ub = (degree_sum / 2).min(g.edges_inside(&all)) as u64;
        let min_odd = match self.chosen.len() {
            len if len >= 3 && len % 2 == 1 => len,
            len => (len + 1) | 1,
        }
        .max(3) as u64;
        let bound = Ratio::new(edges_ub, (min_odd - 1) / 2);
        bound <= *self.best
    }
}

/// The Goldberg coloring target `max(max_degree + 1, ceil(chi_f))`.
pub fn goldberg_target(g: &Multigraph) -> Result<u32> {
    let frac = chi_f_exact(g)?;
    Ok(frac.ceil_chi_f.max(g.max_degree() as u32 + 1))
}
