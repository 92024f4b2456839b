//! Brute-force oracle equivalence checks. Each oracle here recomputes the
//! quantity from first principles, independent of the library's
//! implementation path.

use layerlink_core::graph::{LayerId, MultilayerGraph, NodeId};
use layerlink_core::interaction::{CheckinRecord, VenueIndex};
use layerlink_core::structural::{adamic_adar, jaccard, NeighbourhoodScope};
use layerlink_core::{roc_auc, DEFAULT_COLOC_WINDOW_SECS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_two_layer_graph(rng: &mut ChaCha8Rng, max_nodes: usize) -> MultilayerGraph {
    let n = rng.gen_range(3..=max_nodes);
    let nodes: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    let mut edges = Vec::new();
    for layer in 0..2usize {
        let m = rng.gen_range(0..n * 2);
        for _ in 0..m {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            edges.push((layer, nodes[a].clone(), nodes[b].clone()));
        }
    }
    MultilayerGraph::build(
        &["twitter".to_string(), "foursquare".to_string()],
        &nodes,
        &edges,
    )
    .map(|(g, _)| g)
    .expect("build failed")
}

/// Scope neighbourhood recomputed by scanning every node and asking for
/// edge membership directly.
fn oracle_neighbourhood(g: &MultilayerGraph, i: NodeId, scope: NeighbourhoodScope) -> Vec<u32> {
    let mut out = Vec::new();
    for z in g.node_ids() {
        if z == i {
            continue;
        }
        let linked = match scope {
            NeighbourhoodScope::SingleLayer(l) => g.has_edge(l, i, z).unwrap(),
            NeighbourhoodScope::Global => {
                (0..g.layer_count()).any(|l| g.has_edge(LayerId(l), i, z).unwrap())
            }
            NeighbourhoodScope::Core => {
                g.layer_count() > 0
                    && (0..g.layer_count()).all(|l| g.has_edge(LayerId(l), i, z).unwrap())
            }
        };
        if linked {
            out.push(z.0);
        }
    }
    out
}

fn oracle_adamic_adar(g: &MultilayerGraph, i: NodeId, j: NodeId, scope: NeighbourhoodScope) -> f64 {
    let ni: Vec<u32> = oracle_neighbourhood(g, i, scope)
        .into_iter()
        .filter(|&z| z != j.0)
        .collect();
    let nj: Vec<u32> = oracle_neighbourhood(g, j, scope)
        .into_iter()
        .filter(|&z| z != i.0)
        .collect();
    let mut total = 0.0;
    for &z in &ni {
        if !nj.contains(&z) {
            continue;
        }
        let deg = oracle_neighbourhood(g, NodeId(z), scope).len();
        if deg > 1 {
            total += 1.0 / (deg as f64).ln();
        }
    }
    total
}

fn oracle_jaccard(g: &MultilayerGraph, i: NodeId, j: NodeId, scope: NeighbourhoodScope) -> f64 {
    let ni: Vec<u32> = oracle_neighbourhood(g, i, scope)
        .into_iter()
        .filter(|&z| z != j.0)
        .collect();
    let nj: Vec<u32> = oracle_neighbourhood(g, j, scope)
        .into_iter()
        .filter(|&z| z != i.0)
        .collect();
    let common = ni.iter().filter(|z| nj.contains(z)).count();
    let union = ni.len() + nj.len() - common;
    if union == 0 {
        0.0
    } else {
        common as f64 / union as f64
    }
}

#[test]
fn adamic_adar_matches_brute_force_on_100_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for round in 0..100 {
        let g = random_two_layer_graph(&mut rng, 30);
        let scopes = [
            NeighbourhoodScope::SingleLayer(LayerId(0)),
            NeighbourhoodScope::SingleLayer(LayerId(1)),
            NeighbourhoodScope::Global,
            NeighbourhoodScope::Core,
        ];
        // A deterministic batch of pairs per graph.
        for _ in 0..20 {
            let a = NodeId(rng.gen_range(0..g.node_count() as u32));
            let b = NodeId(rng.gen_range(0..g.node_count() as u32));
            if a == b {
                continue;
            }
            for scope in scopes {
                let got = adamic_adar(&g, a, b, scope).unwrap();
                let want = oracle_adamic_adar(&g, a, b, scope);
                assert!(
                    (got - want).abs() < 1e-9,
                    "round {round}: aa mismatch {got} vs {want} for {a:?},{b:?} {scope:?}"
                );
                let gj = jaccard(&g, a, b, scope).unwrap();
                let wj = oracle_jaccard(&g, a, b, scope);
                assert!(
                    (gj - wj).abs() < 1e-9,
                    "round {round}: jaccard mismatch {gj} vs {wj}"
                );
            }
        }
    }
}

/// Mann-Whitney: concordant positive/negative score pairs, ties half.
fn mann_whitney(scores: &[f64], labels: &[i8]) -> f64 {
    let pos: Vec<f64> = scores
        .iter()
        .zip(labels)
        .filter(|(_, &y)| y > 0)
        .map(|(&s, _)| s)
        .collect();
    let neg: Vec<f64> = scores
        .iter()
        .zip(labels)
        .filter(|(_, &y)| y < 0)
        .map(|(&s, _)| s)
        .collect();
    let mut total = 0.0;
    for &p in &pos {
        for &n in &neg {
            if p > n {
                total += 1.0;
            } else if p == n {
                total += 0.5;
            }
        }
    }
    total / (pos.len() * neg.len()) as f64
}

#[test]
fn auc_matches_mann_whitney_on_1000_random_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for round in 0..1000 {
        let n = rng.gen_range(4..80);
        // Half the rounds use coarse scores so ties are common.
        let coarse = round % 2 == 0;
        let scores: Vec<f64> = (0..n)
            .map(|_| {
                if coarse {
                    rng.gen_range(0..6) as f64 / 5.0
                } else {
                    rng.gen_range(0.0..1.0)
                }
            })
            .collect();
        let mut labels: Vec<i8> = (0..n)
            .map(|_| if rng.gen_bool(0.5) { 1 } else { -1 })
            .collect();
        labels[0] = 1;
        labels[1] = -1;
        let got = roc_auc(&scores, &labels).unwrap().auc;
        let want = mann_whitney(&scores, &labels);
        assert!(
            (got - want).abs() < 1e-9,
            "round {round}: auc {got} vs mann-whitney {want}"
        );
    }
}

#[test]
fn shuffled_labels_auc_near_half_at_10k() {
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    let n = 10_000;
    let scores: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
    let labels: Vec<i8> = (0..n)
        .map(|_| if rng.gen_bool(0.5) { 1 } else { -1 })
        .collect();
    let auc = roc_auc(&scores, &labels).unwrap().auc;
    assert!((0.45..=0.55).contains(&auc), "auc {auc}");
}

/// Quadratic oracle: enumerate all in-window check-in pairs per venue, then
/// greedily accept them in time order, never reusing a check-in.
fn oracle_colocation_count(a_visits: &[(u32, i64)], b_visits: &[(u32, i64)], window: i64) -> usize {
    let mut candidates: Vec<(i64, i64, usize, usize)> = Vec::new();
    for (x, &(va, ta)) in a_visits.iter().enumerate() {
        for (y, &(vb, tb)) in b_visits.iter().enumerate() {
            if va == vb && (ta - tb).abs() <= window {
                candidates.push((ta.min(tb), ta.max(tb), x, y));
            }
        }
    }
    candidates.sort();
    let mut used_a = vec![false; a_visits.len()];
    let mut used_b = vec![false; b_visits.len()];
    let mut count = 0;
    for (_, _, x, y) in candidates {
        if !used_a[x] && !used_b[y] {
            used_a[x] = true;
            used_b[y] = true;
            count += 1;
        }
    }
    count
}

#[test]
fn colocation_count_matches_quadratic_greedy_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for round in 0..300 {
        let n_venues = rng.gen_range(1..5u32);
        let mut records = Vec::new();
        let mut a_visits = Vec::new();
        let mut b_visits = Vec::new();
        for _ in 0..rng.gen_range(0..25) {
            let v = rng.gen_range(0..n_venues);
            let t = rng.gen_range(0..40_000i64);
            a_visits.push((v, t));
            records.push(CheckinRecord {
                user: "a".into(),
                venue: format!("v{v}"),
                lat: v as f64,
                lon: v as f64,
                timestamp: t,
            });
        }
        for _ in 0..rng.gen_range(0..25) {
            let v = rng.gen_range(0..n_venues);
            let t = rng.gen_range(0..40_000i64);
            b_visits.push((v, t));
            records.push(CheckinRecord {
                user: "b".into(),
                venue: format!("v{v}"),
                lat: v as f64,
                lon: v as f64,
                timestamp: t,
            });
        }
        let idx = VenueIndex::build(&records).unwrap();
        let got = idx.colocation_count("a", "b", DEFAULT_COLOC_WINDOW_SECS);
        let want = oracle_colocation_count(&a_visits, &b_visits, DEFAULT_COLOC_WINDOW_SECS);
        assert_eq!(got, want, "round {round}");
    }
}
