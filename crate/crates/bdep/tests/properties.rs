//! Randomized invariants of the deposition dynamics: the normalized
//! surface shadows the raw process exactly, growth is monotone under
//! subgraph embeddings and rule strength, and initial conditions contract.

use std::collections::BTreeSet;

use proptest::prelude::*;

use bdep::graph::{is_subgraph, Graph};
use bdep::sim::{coupled_run, step, step_nn, HeightConfig, SimConfig};
use bdep::surface::{growth_reward, reward_g2, surface_transition, SurfaceState};

/// Connected graph on 2..=7 vertices: a random attachment tree plus a
/// random subset of the remaining pairs.
fn connected_graph() -> impl Strategy<Value = Graph> {
    (2usize..=7)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec(any::<prop::sample::Index>(), n - 1),
                any::<u64>(),
            )
        })
        .prop_map(|(n, attach, mask)| {
            let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
            for (i, idx) in attach.iter().enumerate() {
                let child = i + 1;
                edges.insert((idx.index(child), child));
            }
            let mut bit = 0;
            for a in 0..n {
                for b in (a + 1)..n {
                    if !edges.contains(&(a, b)) {
                        if (mask >> bit) & 1 == 1 {
                            edges.insert((a, b));
                        }
                        bit += 1;
                    }
                }
            }
            let edges: Vec<(usize, usize)> = edges.into_iter().collect();
            Graph::new(n, &edges, None).expect("construction is connected by the tree part")
        })
}

fn sites(len: usize) -> impl Strategy<Value = Vec<prop::sample::Index>> {
    proptest::collection::vec(any::<prop::sample::Index>(), len)
}

fn normalized(h: &HeightConfig) -> Vec<u32> {
    let min = *h.heights.iter().min().unwrap();
    h.heights.iter().map(|&x| (x - min) as u32).collect()
}

proptest! {
    /// The min-normalized raw process and the surface chain are the same
    /// process, state by state, and the growth reward is exactly how much
    /// the raw maximum rises on each event.
    #[test]
    fn surface_chain_shadows_simulation(g in connected_graph(), ys in sites(120)) {
        let n = g.vertex_count();
        let mut raw = HeightConfig::flat(n);
        let mut s = SurfaceState::flat(n);
        for y in &ys {
            let y = y.index(n);
            let reward = growth_reward(&g, &s, y).unwrap();
            let s_next = surface_transition(&g, &s, y).unwrap();
            prop_assert_eq!(reward_g2(&g, &s, &s_next).unwrap(), reward);

            let raw_next = step(&g, &raw, y).unwrap();
            let raw_rise = raw_next.heights.iter().max().unwrap()
                - raw.heights.iter().max().unwrap();
            prop_assert_eq!(raw_rise as u32, reward);
            prop_assert_eq!(&normalized(&raw_next), s_next.heights());

            raw = raw_next;
            s = s_next;
        }
    }

    /// Two surfaces driven by the same sites: the spread of their
    /// columnwise difference never grows (they coalesce into translates).
    #[test]
    fn initial_conditions_contract(
        g in connected_graph(),
        starts in proptest::collection::vec((0u8..20, 0u8..20), 7),
        ys in sites(150),
    ) {
        let n = g.vertex_count();
        let mut a = HeightConfig { heights: starts.iter().take(n).map(|p| p.0 as u64).collect() };
        let mut b = HeightConfig { heights: starts.iter().take(n).map(|p| p.1 as u64).collect() };
        let spread = |a: &HeightConfig, b: &HeightConfig| {
            let d: Vec<i64> = a.heights.iter().zip(&b.heights)
                .map(|(x, y)| *x as i64 - *y as i64).collect();
            d.iter().max().unwrap() - d.iter().min().unwrap()
        };
        let mut cur = spread(&a, &b);
        for y in &ys {
            let y = y.index(n);
            a = step(&g, &a, y).unwrap();
            b = step(&g, &b, y).unwrap();
            let next = spread(&a, &b);
            prop_assert!(next <= cur, "spread went {cur} -> {next}");
            cur = next;
        }
    }

    /// The strict (nearest-neighbour) rule never outgrows the cooperative
    /// one on a shared deposition stream, column by column.
    #[test]
    fn strict_rule_is_dominated(g in connected_graph(), ys in sites(150)) {
        let n = g.vertex_count();
        let mut loose = HeightConfig::flat(n);
        let mut strict = HeightConfig::flat(n);
        for y in &ys {
            let y = y.index(n);
            loose = step(&g, &loose, y).unwrap();
            strict = step_nn(&g, &strict, y).unwrap();
            for x in 0..n {
                prop_assert!(strict.heights[x] <= loose.heights[x]);
            }
        }
    }

    /// Removing vertices (an induced connected subgraph) can only slow
    /// growth: the coupled run reports no pointwise violation.
    #[test]
    fn induced_subgraph_is_dominated(
        g in connected_graph(),
        root in any::<prop::sample::Index>(),
        keep in 2usize..=7,
        seed in any::<u64>(),
    ) {
        let n = g.vertex_count();
        let keep = keep.min(n);
        // Connected vertex subset: a BFS prefix from a random root.
        let root = root.index(n);
        let order = g.non_decreasing_permutation(root).unwrap();
        let mut subset: Vec<usize> = order.into_iter().take(keep).collect();
        subset.sort_unstable();
        let index_of = |v: usize| subset.binary_search(&v).unwrap();
        let mut sub_edges = Vec::new();
        for (i, &a) in subset.iter().enumerate() {
            for &b in &subset[i + 1..] {
                if g.is_edge(a, b) {
                    sub_edges.push((index_of(a), index_of(b)));
                }
            }
        }
        prop_assume!(is_connected_edges(keep, &sub_edges));
        let sub = Graph::new(keep, &sub_edges, None).unwrap();
        prop_assert!(is_subgraph(&sub, &g, &subset).unwrap());

        let cfg = SimConfig::discrete(seed, 500);
        let rep = coupled_run(&sub, &g, &subset, &cfg).unwrap();
        prop_assert_eq!(rep.violations, 0);
        prop_assert!(rep.max_sub <= rep.max_sup);
    }

    /// Merging equivalent vertices preserves total intensity and is
    /// idempotent; distances are symmetric.
    #[test]
    fn reductions_and_metrics_are_consistent(g in connected_graph()) {
        let n = g.vertex_count();
        let (reduced, classes) = g.reduce_equivalent();
        prop_assert_eq!(classes.len(), n);
        let total: u64 = reduced.intensities().iter().sum();
        prop_assert_eq!(total, g.total_intensity());
        // Members of one class share their closed neighbourhood's image.
        for a in 0..n {
            for b in 0..n {
                if classes[a] == classes[b] {
                    let na: BTreeSet<usize> =
                        g.closed_neighbourhood(a).unwrap().iter().map(|&v| classes[v]).collect();
                    let nb: BTreeSet<usize> =
                        g.closed_neighbourhood(b).unwrap().iter().map(|&v| classes[v]).collect();
                    prop_assert_eq!(&na, &nb);
                }
            }
        }
        let (again, _) = reduced.reduce_equivalent();
        prop_assert_eq!(again.vertex_count(), reduced.vertex_count());

        let m = g.metrics();
        for a in 0..n {
            for b in 0..n {
                prop_assert_eq!(m.distances[a][b], m.distances[b][a]);
            }
        }
        if let Some(girth) = m.girth {
            prop_assert!(girth >= 3);
            prop_assert!(g.edge_count() >= girth);
        }
    }
}

fn is_connected_edges(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}
