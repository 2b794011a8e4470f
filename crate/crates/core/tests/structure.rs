use permagic::context::{build_graph, find_pentagons, pentagons_in, witness_check, OrthoGraph};
use permagic::fixtures::group_fixture;
use permagic::graph::Graph;
use permagic::pauli::{stabilizer_set, StabilizerConvention};
use permagic::spectra::{classify_group, ClassifyOptions};
use permagic::wigner::{phase_points, wigner_function, Construction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// p^n ∏_{k=1..n} (p^k + 1) stabilizer states on n qudits of prime dimension p,
/// multiplied over coprime factors.
fn stabilizer_count(factors: &[(u64, u32)]) -> usize {
    factors
        .iter()
        .map(|&(p, n)| p.pow(n) * (1..=n).map(|k| p.pow(k) + 1).product::<u64>())
        .product::<u64>() as usize
}

#[test]
fn tensor_stabilizer_counts() {
    let cases: [(usize, &[(u64, u32)]); 8] = [
        (2, &[(2, 1)]),
        (3, &[(3, 1)]),
        (4, &[(2, 2)]),
        (5, &[(5, 1)]),
        (6, &[(2, 1), (3, 1)]),
        (7, &[(7, 1)]),
        (8, &[(2, 3)]),
        (9, &[(3, 2)]),
    ];
    for (d, factors) in cases {
        let set = stabilizer_set(d, StabilizerConvention::Tensor).unwrap();
        assert_eq!(set.rays.len(), stabilizer_count(factors), "d={d}");
    }
}

#[test]
fn odd_prime_stabilizers_have_nonnegative_wigner_functions() {
    for d in [3, 5, 7] {
        let pps = phase_points(d, Construction::Direct).unwrap();
        for r in &stabilizer_set(d, StabilizerConvention::Tensor).unwrap().rays {
            assert!(wigner_function(r, &pps).unwrap().is_nonnegative(), "d={d} {r}");
        }
    }
}

fn ray_graph(name: &str) -> OrthoGraph {
    let g = group_fixture(name).unwrap().group().unwrap();
    OrthoGraph::from_report(&classify_group(&g, &ClassifyOptions::default()).unwrap())
}

fn brute_independence(g: &Graph) -> usize {
    let n = g.len();
    (0u32..1 << n)
        .filter(|&mask| {
            (0..n).all(|i| mask & (1 << i) == 0 || (i + 1..n).all(|j| mask & (1 << j) == 0 || !g.has_edge(i, j)))
        })
        .map(u32::count_ones)
        .max()
        .unwrap_or(0) as usize
}

#[test]
fn independence_number_matches_exhaustive_search() {
    for name in ["S3", "A4"] {
        let g = ray_graph(name);
        assert_eq!(g.independence_number(u64::MAX).unwrap(), brute_independence(g.graph()), "{name}");
    }
}

/// Induced 5-cycles: 5-vertex sets in which every vertex has exactly two neighbours.
fn brute_pentagons(g: &Graph) -> usize {
    let n = g.len();
    let mut count = 0;
    let mut idx = [0usize; 5];
    fn rec(g: &Graph, start: usize, depth: usize, idx: &mut [usize; 5], count: &mut usize) {
        if depth == 5 {
            let two_regular = idx.iter().all(|&u| idx.iter().filter(|&&v| v != u && g.has_edge(u, v)).count() == 2);
            *count += usize::from(two_regular);
            return;
        }
        for v in start..g.len() {
            idx[depth] = v;
            rec(g, v + 1, depth + 1, idx, count);
        }
    }
    if n >= 5 {
        rec(g, 0, 0, &mut idx, &mut count);
    }
    count
}

#[test]
fn pentagon_counts_on_named_graphs() {
    let k5 = Graph::from_fn(5, |_, _| true);
    let c5 = Graph::from_fn(5, |i, j| (i + 1) % 5 == j || (j + 1) % 5 == i);
    // Petersen: outer cycle, inner pentagram, spokes
    let petersen = Graph::from_fn(10, |i, j| {
        let (a, b) = (i.min(j), i.max(j));
        (b < 5 && (b - a == 1 || b - a == 4)) || (a >= 5 && (b - a == 2 || b - a == 3)) || (a < 5 && b == a + 5)
    });
    assert_eq!(pentagons_in(&k5).len(), 0);
    assert_eq!(pentagons_in(&c5).len(), 1);
    assert_eq!(pentagons_in(&petersen).len(), 12);
}

#[test]
fn pentagon_search_matches_exhaustive_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..30 {
        let n = rng.gen_range(5..13);
        let p: f64 = rng.gen_range(0.2..0.7);
        let edges: Vec<bool> = (0..n * n).map(|_| rng.gen_bool(p)).collect();
        let g = Graph::from_fn(n, |i, j| edges[i.min(j) * n + i.max(j)]);
        assert_eq!(pentagons_in(&g).len(), brute_pentagons(&g));
    }
    for name in ["S3", "A4"] {
        let g = ray_graph(name);
        assert_eq!(find_pentagons(&g).len(), brute_pentagons(g.graph()), "{name}");
    }
}

#[test]
fn maximal_cliques_match_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let n = rng.gen_range(1..12);
        let edges: Vec<bool> = (0..n * n).map(|_| rng.gen_bool(0.5)).collect();
        let g = Graph::from_fn(n, |i, j| edges[i.min(j) * n + i.max(j)]);
        let mut expected: Vec<Vec<usize>> = (1u32..1 << n)
            .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect::<Vec<_>>())
            .filter(|s| g.is_clique(s))
            .filter(|s| (0..n).all(|v| s.contains(&v) || !s.iter().all(|&u| g.has_edge(u, v))))
            .collect();
        expected.sort();
        assert_eq!(g.maximal_cliques(1), expected);
    }
}

#[test]
fn pentagon_witnesses_respect_the_lovasz_bound() {
    for name in ["S3", "A4"] {
        let g = ray_graph(name);
        for p in find_pentagons(&g) {
            let w = witness_check(p.vertices(), &g).unwrap();
            assert_eq!(w.independence_number, 2);
            assert!(w.witness_max <= 5f64.sqrt() + w.error_bound + 1e-12, "{name} {:?}", p.vertices());
            assert!(w.witness_max >= 1.0);
            assert!((w.rayleigh - w.witness_max).abs() <= 1e-9);
        }
    }
}

#[test]
fn graph_of_explicit_rays() {
    let rays: Vec<_> = ["1,0,0", "0,1,0", "0,0,1", "0,1,1", "0,1,-1"]
        .iter()
        .map(|s| permagic::Ray::parse(s, &Default::default()).unwrap())
        .collect();
    let g = build_graph(&rays).unwrap();
    // the computational basis is one triangle, (0,1,±1) with (1,0,0) the other
    assert_eq!(g.maximal_cliques(3), vec![vec![0, 1, 2], vec![0, 3, 4]]);
}
