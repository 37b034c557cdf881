//! Scratch probe for family design; not part of the deliverable surface.
use goldberg_lab::graph::Multigraph;
use goldberg_lab::{oracle, tashkinov};

fn main() {
    let mut found = Vec::new();
    let mut tried = 0;
    let deadline = std::time::Instant::now() + std::time::Duration::from_secs(220);
    'outer: for seed in 0..4000u64 {
        if std::time::Instant::now() > deadline {
            break;
        }
        let n = 6 + (seed % 3) as usize;
        let mu = 2 + (seed % 2) as usize;
        let p = 0.4 + 0.1 * ((seed / 7) % 4) as f64;
        let g = Multigraph::random(n, mu, p, seed).unwrap();
        if g.edge_count() > 26 || g.edge_count() < 8 {
            continue;
        }
        let Ok(f) = oracle::TripleFactory::new(&g) else { continue };
        if !f.in_regime() {
            continue;
        }
        tried += 1;
        for ts in 0..12u64 {
            let Some(t) = f.make(seed * 1000 + ts).unwrap() else { continue };
            if !t.meets_tree_regime(&g) {
                continue;
            }
            let refined = tashkinov::refine_to_e_maximal(
                &g,
                &t.coloring,
                20,
                &mut tashkinov::Trace::disabled(),
            )
            .unwrap();
            let d = refined.tree.defective_colors(&g, &refined.coloring);
            if !d.is_empty() {
                let ett = tashkinov::Ett::new(refined.tree.clone());
                let pair = tashkinov::find_connecting_edge(&g, &refined.coloring, &ett)
                    .ok()
                    .flatten();
                println!(
                    "FOUND seed={seed} ts={ts} n={n} m={} delta={} chi={} tree={} defective={:?} pair={}",
                    g.edge_count(),
                    g.max_degree(),
                    f.chi(),
                    refined.tree.size(),
                    d,
                    pair.is_some(),
                );
                found.push((seed, ts));
                if found.len() >= 12 {
                    break 'outer;
                }
            }
        }
    }
    println!("regime graphs tried: {tried}, defective hits: {}", found.len());
}
