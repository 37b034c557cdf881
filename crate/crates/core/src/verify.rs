//! Corpus sweeps: the sandwich inequality, the Goldberg inequality and
//! elementarity at `chi' >= max_degree + 2`, over exhaustive small
//! instances and seeded random ones. Any violation ships with a
//! greedily minimized counterexample.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::graph::Multigraph;
use crate::{fractional, oracle, Error, Result};

#[derive(Clone, Debug)]
pub enum Family {
    /// Every multigraph on at most `max_n` vertices with multiplicity at
    /// most `max_mu` (multiplicity vectors over all vertex pairs).
    Exhaustive { max_n: usize, max_mu: usize },
    /// Seeded random instances.
    Random {
        max_n: usize,
        max_mu: usize,
        count: usize,
        seed: u64,
        edge_prob: f64,
    },
}

/// Deliberate corruption for negative controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Report `chi' + 1` instead of `chi'`.
    ChiPlusOne,
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub family: Family,
    /// Skip instances repeating a (degree sequence, multiplicity
    /// multiset) key already seen. Cheap and may drop non-isomorphic
    /// graphs; off by default so exhaustive means exhaustive.
    pub dedupe: bool,
    pub fault: Option<Fault>,
    pub threads: Option<usize>,
}

impl SweepConfig {
    pub fn exhaustive(max_n: usize, max_mu: usize) -> Self {
        SweepConfig {
            family: Family::Exhaustive { max_n, max_mu },
            dedupe: false,
            fault: None,
            threads: None,
        }
    }

    pub fn random(max_n: usize, max_mu: usize, count: usize, seed: u64) -> Self {
        SweepConfig {
            family: Family::Random {
                max_n,
                max_mu,
                count,
                seed,
                edge_prob: 0.5,
            },
            dedupe: false,
            fault: None,
            threads: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceRecord {
    pub id: String,
    pub n: usize,
    pub m: usize,
    pub delta: usize,
    pub mu: usize,
    pub chi: u32,
    pub ceil_chi_f: u32,
    pub sandwich_ok: bool,
    pub goldberg_ok: bool,
    /// Only checked when `chi >= delta + 2`.
    pub elementary_ok: Option<bool>,
    pub violation: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ViolationDump {
    pub record: InstanceRecord,
    /// Edge-list text of the violating instance.
    pub graph: String,
    /// Edge-list text after greedy edge removal keeping the violation.
    pub minimized: String,
}

#[derive(Debug, Serialize)]
pub struct SweepReport {
    pub instances: usize,
    pub skipped_dedupe: usize,
    pub sandwich_failures: usize,
    pub goldberg_failures: usize,
    pub elementary_failures: usize,
    pub violations: Vec<ViolationDump>,
    pub records: Vec<InstanceRecord>,
}

impl SweepReport {
    pub fn clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check one instance against the sandwich and Goldberg inequalities.
pub fn check_instance(g: &Multigraph, id: &str, fault: Option<Fault>) -> Result<InstanceRecord> {
    let chi_true = oracle::chi_prime_exact(g)?;
    let chi = match fault {
        Some(Fault::ChiPlusOne) => chi_true + 1,
        None => chi_true,
    };
    let frac = fractional::chi_f_exact(g)?;
    let delta = g.max_degree();
    let mu = g.multiplicity();
    let ceil = frac.ceil_chi_f;
    let sandwich_ok =
        delta as u32 <= ceil && ceil <= chi && (chi as usize) <= delta + mu;
    let goldberg_ok = chi <= (delta as u32 + 1).max(ceil);
    let elementary_ok = if chi as usize >= delta + 2 {
        Some(chi == ceil)
    } else {
        None
    };
    let mut problems = Vec::new();
    if !sandwich_ok {
        problems.push(format!(
            "sandwich failed: delta={delta} ceil={ceil} chi={chi} delta+mu={}",
            delta + mu
        ));
    }
    if !goldberg_ok {
        problems.push(format!(
            "goldberg failed: chi={chi} > max(delta+1, ceil)={}",
            (delta as u32 + 1).max(ceil)
        ));
    }
    if elementary_ok == Some(false) {
        problems.push(format!("not elementary: chi={chi} != ceil={ceil}"));
    }
    Ok(InstanceRecord {
        id: id.to_string(),
        n: g.vertex_count(),
        m: g.edge_count(),
        delta,
        mu,
        chi,
        ceil_chi_f: ceil,
        sandwich_ok,
        goldberg_ok,
        elementary_ok,
        violation: if problems.is_empty() {
            None
        } else {
            Some(problems.join("; "))
        },
    })
}

fn enumerate_exhaustive(max_n: usize, max_mu: usize) -> Vec<(String, Multigraph)> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
            .collect();
        let base = max_mu + 1;
        let total = base.pow(pairs.len() as u32);
        for code in 0..total {
            let mut rest = code;
            let mut edges = Vec::new();
            for &(u, v) in &pairs {
                let mult = rest % base;
                rest /= base;
                for _ in 0..mult {
                    edges.push((u, v));
                }
            }
            let g = Multigraph::new(n, edges).expect("enumerated graphs are valid");
            out.push((format!("ex-n{n}-{code}"), g));
        }
    }
    out
}

fn generate_random(
    max_n: usize,
    max_mu: usize,
    count: usize,
    seed: u64,
    edge_prob: f64,
) -> Result<Vec<(String, Multigraph)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let n = rng.random_range(2..=max_n.max(2));
        let sub_seed: u64 = rng.random();
        let g = Multigraph::random(n, max_mu, edge_prob, sub_seed)?;
        out.push((format!("rnd-{i}"), g));
    }
    Ok(out)
}

fn dedupe_key(g: &Multigraph) -> (usize, Vec<usize>, Vec<usize>) {
    let mut degrees: Vec<usize> = (0..g.vertex_count()).map(|v| g.degree(v)).collect();
    degrees.sort_unstable();
    let mut mults = std::collections::HashMap::new();
    for &(u, v) in g.edges() {
        *mults.entry((u.min(v), u.max(v))).or_insert(0usize) += 1;
    }
    let mut mult_list: Vec<usize> = mults.into_values().collect();
    mult_list.sort_unstable();
    (g.vertex_count(), degrees, mult_list)
}

/// Greedily delete edges while the violation persists.
fn minimize(g: &Multigraph, fault: Option<Fault>) -> Result<Multigraph> {
    let mut current = g.clone();
    loop {
        let mut shrunk = None;
        for drop in 0..current.edge_count() {
            let edges: Vec<_> = current
                .edges()
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != drop)
                .map(|(_, &e)| e)
                .collect();
            let candidate = Multigraph::new(current.vertex_count(), edges)?;
            if check_instance(&candidate, "min", fault)?.violation.is_some() {
                shrunk = Some(candidate);
                break;
            }
        }
        match shrunk {
            Some(c) => current = c,
            None => return Ok(current),
        }
    }
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepReport> {
    let mut instances = match &config.family {
        Family::Exhaustive { max_n, max_mu } => enumerate_exhaustive(*max_n, *max_mu),
        Family::Random {
            max_n,
            max_mu,
            count,
            seed,
            edge_prob,
        } => generate_random(*max_n, *max_mu, *count, *seed, *edge_prob)?,
    };
    let mut skipped_dedupe = 0;
    if config.dedupe {
        let mut seen = std::collections::HashSet::new();
        instances.retain(|(_, g)| {
            let fresh = seen.insert(dedupe_key(g));
            if !fresh {
                skipped_dedupe += 1;
            }
            fresh
        });
    }

    let fault = config.fault;
    let run = || -> Result<Vec<InstanceRecord>> {
        instances
            .par_iter()
            .map(|(id, g)| check_instance(g, id, fault))
            .collect()
    };
    let mut records = match config.threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::usage(format!("thread pool: {e}")))?;
            pool.install(run)?
        }
        None => run()?,
    };
    records.sort_by(|a, b| a.id.cmp(&b.id));

    let mut violations = Vec::new();
    for rec in records.iter().filter(|r| r.violation.is_some()) {
        let g = &instances.iter().find(|(id, _)| *id == rec.id).unwrap().1;
        let minimized = minimize(g, fault)?;
        violations.push(ViolationDump {
            record: rec.clone(),
            graph: g.serialize(),
            minimized: minimized.serialize(),
        });
    }
    Ok(SweepReport {
        instances: records.len(),
        skipped_dedupe,
        sandwich_failures: records.iter().filter(|r| !r.sandwich_ok).count(),
        goldberg_failures: records.iter().filter(|r| !r.goldberg_ok).count(),
        elementary_failures: records
            .iter()
            .filter(|r| r.elementary_ok == Some(false))
            .count(),
        violations,
        records,
    })
}
