use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use orthorep::connectivity::{is_k_connected, vertex_connectivity, KConnectivity, Witness};
use orthorep::construct::{construct_gor_plus, construct_lss_randomized, sample_parameters};
use orthorep::graph::{path_within_prefix, Graph, GraphFormat, VertexOrdering};
use orthorep::linalg::{
    adjugate, complement_map, complement_map_with_det, determinant, general_position, rank,
    GeneralPosition, Matrix, Rational, Tolerance, Vector,
};
use orthorep::ordering::{
    constraint_signature, edge_swap_invariance, exchange_sequence,
    reduce_to_adjacent_transposition, SwapCheck,
};
use orthorep::verify::{certify_no_gor, verify_gor, verify_or};

fn q(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

fn qv(v: &[i64]) -> Vector<Rational> {
    Vector(v.iter().map(|&x| q(x)).collect())
}

fn graph_from_bits(n: usize, bits: &[bool]) -> Graph {
    let pairs = (0..n).tuple_combinations::<(usize, usize)>();
    let edges: Vec<(usize, usize)> = pairs
        .zip(bits)
        .filter(|(_, &b)| b)
        .map(|(e, _)| e)
        .collect();
    Graph::from_edges(n, &edges).unwrap()
}

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2)
            .prop_map(move |b| graph_from_bits(n, &b))
    })
}

fn graph_and_ordering(max_n: usize) -> impl Strategy<Value = (Graph, VertexOrdering)> {
    graph(max_n).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
            .prop_map(|(g, o)| (g, VertexOrdering::new(o).unwrap()))
    })
}

fn int_vectors(
    count: std::ops::Range<usize>,
    dim: usize,
    bound: i64,
) -> impl Strategy<Value = Vec<Vector<Rational>>> {
    proptest::collection::vec(proptest::collection::vec(-bound..=bound, dim), count)
        .prop_map(|vs| vs.iter().map(|v| qv(v)).collect())
}

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=7).prop_map(|(p, d)| Rational::new(BigInt::from(p), BigInt::from(d)))
}

/// Leibniz expansion; independent of the elimination code.
fn leibniz(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    (0..n)
        .permutations(n)
        .map(|p| {
            let inversions = (0..n)
                .tuple_combinations()
                .filter(|&(a, b)| p[a] > p[b])
                .count();
            let term = (0..n).fold(Rational::one(), |acc, r| acc * &m[r][p[r]]);
            if inversions % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .fold(Rational::zero(), |a, b| a + b)
}

/// Gauss-Jordan inverse over the rationals, `None` when singular.
fn inverse(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let piv = a[c][c].clone();
        for x in a[c].iter_mut() {
            *x = &*x / &piv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                let pivot_row = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn brute_kappa(g: &Graph) -> usize {
    let n = g.n();
    for size in 0..n.saturating_sub(1) {
        if (0..n)
            .combinations(size)
            .any(|c| g.is_separating_set(&c.into_iter().collect()))
        {
            return size;
        }
    }
    n.saturating_sub(1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn complement_map_is_orthogonal(pre in int_vectors(0..5, 4, 30), w in proptest::collection::vec(-30i64..=30, 4)) {
        let v = complement_map(&pre, &qv(&w)).unwrap();
        for p in &pre {
            prop_assert!(v.dot(p).is_zero());
        }
        if pre.is_empty() {
            prop_assert_eq!(v, qv(&w));
        }
    }

    #[test]
    fn complement_map_orthogonal_over_rationals(
        pre in proptest::collection::vec(proptest::collection::vec(rational(), 3), 0..4),
        w in proptest::collection::vec(rational(), 3),
    ) {
        let pre: Vec<Vector<Rational>> = pre.into_iter().map(Vector).collect();
        let v = complement_map(&pre, &Vector(w)).unwrap();
        for p in &pre {
            prop_assert!(v.dot(p).is_zero());
        }
    }

    #[test]
    fn complement_map_scaling(
        pre in int_vectors(1..4, 4, 20),
        w in proptest::collection::vec(-20i64..=20, 4),
        c in rational(),
        j in 0usize..4,
    ) {
        let w = qv(&w);
        let base = complement_map(&pre, &w).unwrap();
        prop_assert_eq!(complement_map(&pre, &w.scale(&c)).unwrap(), base.scale(&c));
        let j = j % pre.len();
        let mut scaled = pre.clone();
        scaled[j] = scaled[j].scale(&c);
        prop_assert_eq!(complement_map(&scaled, &w).unwrap(), base.scale(&(&c * &c)));
    }

    #[test]
    fn complement_map_matches_projector(pre in int_vectors(1..4, 5, 15), w in proptest::collection::vec(-15i64..=15, 5)) {
        let w = qv(&w);
        let (v, det) = complement_map_with_det(&pre, &w).unwrap();
        let g: Vec<Vec<Rational>> = pre.iter().map(|a| pre.iter().map(|b| a.dot(b)).collect()).collect();
        prop_assert_eq!(&det, &leibniz(&g));
        match inverse(&g) {
            Some(inv) => {
                prop_assert!(det.is_positive());
                let vtw: Vec<Rational> = pre.iter().map(|p| p.dot(&w)).collect();
                let coeffs: Vec<Rational> =
                    inv.iter().map(|row| row.iter().zip(&vtw).fold(Rational::zero(), |a, (x, y)| a + x * y)).collect();
                let mut proj = w.clone();
                for (c, p) in coeffs.iter().zip(&pre) {
                    proj = proj.sub_scaled(c, p);
                }
                prop_assert_eq!(v, proj.scale(&det));
            }
            None => {
                prop_assert!(det.is_zero());
                prop_assert!(v.is_zero());
            }
        }
    }

    #[test]
    fn adjugate_identity(rows in proptest::collection::vec(proptest::collection::vec(rational(), 4), 4), n in 1usize..=4) {
        let m = Matrix::from_rows(rows.into_iter().take(n).map(|r| r.into_iter().take(n).collect()).collect()).unwrap();
        let det = determinant(&m).unwrap();
        let leib = leibniz(&(0..n).map(|r| (0..n).map(|c| m.get(r, c).clone()).collect()).collect::<Vec<_>>());
        prop_assert_eq!(&det, &leib);
        let prod = m.mul(&adjugate(&m).unwrap()).unwrap();
        prop_assert_eq!(prod, Matrix::<Rational>::identity(n).scale(&det));
    }

    #[test]
    fn rank_agrees_across_modes(
        left in proptest::collection::vec(proptest::collection::vec(-16i64..=16, 4), 5),
        right in proptest::collection::vec(proptest::collection::vec(-16i64..=16, 6), 4),
        inner in 1usize..=4,
    ) {
        // A 5x6 product through an inner dimension of at most 4, so the rank
        // is often deficient; entries stay within 4 * 16 * 16 = 2^10.
        let prod: Vec<Vec<i64>> = (0..5)
            .map(|r| (0..6).map(|c| (0..inner).map(|k| left[r][k] * right[k][c]).sum::<i64>()).collect())
            .collect();
        let cols_q: Vec<Vector<Rational>> = (0..6).map(|c| qv(&(0..5).map(|r| prod[r][c]).collect::<Vec<_>>())).collect();
        let cols_f: Vec<Vector<f64>> = cols_q.iter().map(Vector::to_f64).collect();
        prop_assert_eq!(rank(&cols_q, Tolerance::DEFAULT).unwrap(), rank(&cols_f, Tolerance::DEFAULT).unwrap());
    }

    #[test]
    fn general_position_matches_leibniz(vs in int_vectors(3..7, 3, 3)) {
        let expected = (0..vs.len())
            .combinations(3)
            .find(|s| leibniz(&s.iter().map(|&i| vs[i].0.clone()).collect::<Vec<_>>()).is_zero());
        let got = general_position(&vs, 3, Tolerance::DEFAULT).unwrap();
        match expected {
            Some(s) => prop_assert_eq!(got, GeneralPosition::Fails(s)),
            None => prop_assert_eq!(got, GeneralPosition::Yes),
        }
    }

    #[test]
    fn serialization_round_trips(g in graph(70)) {
        for format in [GraphFormat::EdgeList, GraphFormat::Graph6] {
            let text = g.serialize(format);
            let back = Graph::parse(&text, format).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(back.serialize(format), text);
        }
    }

    #[test]
    fn connectivity_matches_enumeration(g in graph(7)) {
        let cert = vertex_connectivity(&g);
        prop_assert_eq!(cert.kappa, brute_kappa(&g));
        prop_assert!(cert.validate(&g));
        if let Witness::CutSet(cut) = &cert.witness {
            prop_assert_eq!(cut.len(), cert.kappa);
        }
        for k in 0..=g.n() {
            match is_k_connected(&g, k) {
                KConnectivity::Yes => prop_assert!(cert.kappa >= k),
                KConnectivity::No(c) => {
                    prop_assert!(cert.kappa < k);
                    prop_assert!(c.validate(&g));
                }
            }
        }
    }

    #[test]
    fn construction_is_an_or((g, order) in graph_and_ordering(8), dim in 1usize..=5, seed in any::<u64>()) {
        let params = sample_parameters(g.n(), dim, 1 << 20, seed).unwrap();
        let (rep, trace) = construct_gor_plus::<Rational>(&g, &order, dim, &params).unwrap();
        prop_assert!(verify_or(&g, &rep, Tolerance::DEFAULT).unwrap().passes());
        prop_assert_eq!(trace.steps.len(), g.n());
        for step in &trace.steps {
            let zero = rep.vectors()[step.vertex].is_zero();
            prop_assert_eq!(step.zero_output, zero);
            if !step.independent || step.preceding_non_neighbors.len() >= dim {
                prop_assert!(zero);
            }
        }
        if dim <= g.n() && is_k_connected(&g, g.n() - dim).is_yes() {
            prop_assert!(trace.max_preceding() < dim);
        }
        if dim <= g.n() && certify_no_gor(&g, dim).is_some() {
            prop_assert!(!verify_gor(&g, &rep, dim, Tolerance::DEFAULT).unwrap().gor);
        }
    }

    #[test]
    fn prefix_consistency((g, order) in graph_and_ordering(8), dim in 1usize..=4, seed in any::<u64>(), cut in 0usize..=8) {
        let params = sample_parameters(g.n(), dim, 1 << 20, seed).unwrap();
        let cut = cut.min(g.n());
        let (full, _) = construct_gor_plus::<Rational>(&g, &order, dim, &params).unwrap();
        let (part, trace) = construct_gor_plus::<Rational>(&g, &order, dim, &params.truncated(cut)).unwrap();
        prop_assert_eq!(trace.steps.len(), cut);
        for p in 0..g.n() {
            let v = order.at(p);
            if p < cut {
                prop_assert_eq!(&part.vectors()[v], &full.vectors()[v]);
            } else {
                prop_assert!(part.vectors()[v].is_zero());
            }
        }
    }

    #[test]
    fn edge_swaps_preserve_outputs((g, order) in graph_and_ordering(8), dim in 1usize..=5, seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let edges: Vec<usize> = (0..g.n().saturating_sub(1)).filter(|&p| g.has_edge(order.at(p), order.at(p + 1))).collect();
        prop_assume!(!edges.is_empty());
        let p = *pick.get(&edges);
        prop_assert_eq!(edge_swap_invariance(&g, &order, p).unwrap(), SwapCheck::Invariant);
        let swapped = order.swapped(p, p + 1);
        prop_assert_eq!(constraint_signature(&g, &order), constraint_signature(&g, &swapped));
        let params = sample_parameters(g.n(), dim, 1 << 20, seed).unwrap();
        let (a, _) = construct_gor_plus::<Rational>(&g, &order, dim, &params).unwrap();
        let (b, _) = construct_gor_plus::<Rational>(&g, &swapped, dim, &params.swapped(p, p + 1)).unwrap();
        prop_assert_eq!(a.vectors(), b.vectors());
    }

    #[test]
    fn prefix_paths_exist_when_connected_enough((g, order) in graph_and_ordering(9), dim in 1usize..=9) {
        let n = g.n();
        prop_assume!(dim <= n && n >= 2);
        let connected = is_k_connected(&g, n - dim).is_yes();
        for p in dim - 1..n - 1 {
            match path_within_prefix(&g, &order, p) {
                Some(path) => {
                    let pos = order.positions();
                    prop_assert_eq!(path[0], order.at(p));
                    prop_assert_eq!(*path.last().unwrap(), order.at(p + 1));
                    prop_assert!(path.windows(2).all(|w| g.has_edge(w[0], w[1])));
                    prop_assert!(path[1..path.len() - 1].iter().all(|&v| pos[v] < p));
                    let steps = exchange_sequence(&g, &order, p, dim).unwrap();
                    prop_assert!(steps.len() == 1 || steps.len() == 5);
                    prop_assert_eq!(&steps.last().unwrap().ordering, &order.swapped(p, p + 1));
                }
                None => prop_assert!(!connected),
            }
        }
    }

    #[test]
    fn reduction_yields_adjacent_transposition(
        perm in Just((0..8usize).collect::<Vec<_>>()).prop_shuffle(),
        prefix in Just((0..8usize).collect::<Vec<_>>()).prop_shuffle(),
        i in 1usize..8,
    ) {
        let sigma = VertexOrdering::new(perm.clone()).unwrap();
        // tau permutes sigma's first i + 1 entries and keeps the rest.
        let order: Vec<usize> = prefix.into_iter().filter(|&x| x <= i).collect();
        let mut t: Vec<usize> = order.iter().map(|&k| perm[k]).collect();
        t.extend_from_slice(&perm[i + 1..]);
        let tau = VertexOrdering::new(t).unwrap();
        let (s2, t2) = reduce_to_adjacent_transposition(&sigma, &tau, i).unwrap();
        prop_assert_eq!(s2.as_slice()[i], sigma.as_slice()[i]);
        prop_assert_eq!(t2.as_slice()[i], tau.as_slice()[i]);
        prop_assert_eq!(&s2.as_slice()[i + 1..], &perm[i + 1..]);
        if sigma.at(i) == tau.at(i) {
            prop_assert_eq!(s2, t2);
        } else {
            prop_assert_eq!(t2, s2.swapped(i - 1, i));
        }
    }

    #[test]
    fn randomized_construction_is_a_float_or((g, order) in graph_and_ordering(8), dim in 1usize..=5, seed in any::<u64>()) {
        let (rep, trace) = construct_lss_randomized(&g, &order, dim, seed, Tolerance::DEFAULT).unwrap();
        prop_assert!(verify_or(&g, &rep, Tolerance::DEFAULT).unwrap().passes());
        for step in &trace.steps {
            let v = &rep.vectors()[step.vertex];
            prop_assert_eq!(step.zero_output, v.is_zero());
            if !v.is_zero() {
                prop_assert!((v.norm2() - 1.0).abs() < 1e-9);
            }
        }
        let again = construct_lss_randomized(&g, &order, dim, seed, Tolerance::DEFAULT).unwrap().0;
        prop_assert_eq!(again.vectors(), rep.vectors());
    }
}

#[test]
fn petersen_certificate_is_a_minimum_cut() {
    let g = orthorep::harness::generate_graph(&orthorep::harness::GraphModel::Petersen, 0).unwrap();
    let cert = vertex_connectivity(&g);
    assert_eq!(cert.kappa, brute_kappa(&g));
    let cut: BTreeSet<usize> = cert.cut_set().unwrap().clone();
    assert!(g.is_separating_set(&cut));
}
