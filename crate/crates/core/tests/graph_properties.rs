use std::collections::BTreeSet;
use std::sync::OnceLock;

use magnihom_core::graph::*;
use magnihom_core::rational::{int, ratio};
use magnihom_core::unionfind::UnionFind;
use magnihom_core::*;
use proptest::prelude::*;

/// Connected graph: a random spanning tree plus extra edges, lengths in halves.
fn random_graph() -> impl Strategy<Value = MetricGraph> {
    (2usize..=6)
        .prop_flat_map(|n| {
            let parents: Vec<BoxedStrategy<usize>> = (1..n).map(|i| (0..i).boxed()).collect();
            (Just(n), parents, proptest::collection::vec((0..n, 0..n, 1i64..=6), 0..4), proptest::collection::vec(1i64..=6, n - 1))
        })
        .prop_map(|(n, parents, extra, tree_lens)| {
            let mut edges: Vec<(usize, usize, Rational)> =
                parents.iter().enumerate().map(|(i, &p)| (p, i + 1, ratio(tree_lens[i], 2))).collect();
            edges.extend(extra.into_iter().map(|(u, v, l)| (u, v, ratio(l, 2))));
            MetricGraph::unlabeled(n, edges).unwrap()
        })
}

fn points_of(g: &MetricGraph, picks: &[(usize, u8)]) -> Vec<GraphPoint> {
    picks
        .iter()
        .map(|&(k, q)| {
            let k = k % g.edges().len();
            g.point(k, g.edge(k).len.clone() * ratio(i64::from(q % 5), 4)).unwrap()
        })
        .collect()
}

fn partition(classes: &[Vec<usize>], geo: &[GeodesicPath]) -> BTreeSet<BTreeSet<GeodesicPath>> {
    classes.iter().map(|c| c.iter().map(|&i| geo[i].clone()).collect()).collect()
}

fn two_arc_circle(l: i64) -> MetricGraph {
    MetricGraph::unlabeled(2, vec![(0, 1, int(l)), (0, 1, int(l))]).unwrap()
}

fn cube(r: i64) -> MetricGraph {
    let pairs = [(1, 2), (1, 4), (2, 6), (4, 6), (4, 5), (6, 8), (5, 8), (1, 3), (2, 7), (5, 3), (8, 7), (3, 7)];
    let labels = (1..=8).map(|i: usize| i.to_string()).collect();
    MetricGraph::new(labels, pairs.iter().map(|&(u, v): &(usize, usize)| (u - 1, v - 1, int(r))).collect()).unwrap()
}

struct CubeSample {
    g: MetricGraph,
    refs: Vec<GeodesicPath>,
    three: Vec<[GraphPoint; 2]>,
    four: Vec<[GraphPoint; 3]>,
}

/// Cube with edge length 4, sampled at integer offsets, with every proper
/// chain from vertex 1 to vertex 8 of length 12 through those points.
fn cube_sample() -> &'static CubeSample {
    static S: OnceLock<CubeSample> = OnceLock::new();
    S.get_or_init(|| {
        let g = cube(4);
        let (a, b) = (GraphPoint::Vertex(0), GraphPoint::Vertex(7));
        let mut pts = g.vertex_points();
        for k in 0..g.edges().len() {
            for t in 1..4 {
                pts.push(g.point(k, int(t)).unwrap());
            }
        }
        let inner: Vec<GraphPoint> = pts.into_iter().filter(|p| *p != a && *p != b).collect();
        let twelve = int(12);
        let mut three = Vec::new();
        for x in &inner {
            for y in &inner {
                let c = Chain::new(vec![a.clone(), x.clone(), y.clone(), b.clone()]);
                if c.is_proper() && chain_length(&g, &c) == twelve {
                    three.push([x.clone(), y.clone()]);
                }
            }
        }
        let mut four = Vec::new();
        for [x, y] in &three {
            for z in &inner {
                let c = Chain::new(vec![a.clone(), x.clone(), y.clone(), z.clone(), b.clone()]);
                if c.is_proper() && chain_length(&g, &c) == twelve {
                    four.push([x.clone(), y.clone(), z.clone()]);
                }
            }
        }
        let refs = enumerate_geodesics(&g, &a, &b).unwrap();
        CubeSample { g, refs, three, four }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn geodesics_are_isometric_and_distinct(
        g in random_graph(),
        picks in proptest::collection::vec((0usize..16, any::<u8>()), 2),
    ) {
        let pts = points_of(&g, &picks);
        let geo = enumerate_geodesics(&g, &pts[0], &pts[1]).unwrap();
        prop_assert!(!geo.is_empty());
        let d = graph_distance(&g, &pts[0], &pts[1]);
        for p in &geo {
            prop_assert_eq!(&p.length, &d);
            for (x, s) in p.breakpoints(&g) {
                for (y, t) in p.breakpoints(&g) {
                    let gap = if s > t { &s - &t } else { &t - &s };
                    prop_assert_eq!(gap, graph_distance(&g, &x, &y));
                }
            }
            prop_assert!(p.verify(&g));
        }
        let distinct: BTreeSet<&GeodesicPath> = geo.iter().collect();
        prop_assert_eq!(distinct.len(), geo.len());
        prop_assert_eq!(graph_distance(&g, &pts[1], &pts[0]), d);
    }

    #[test]
    fn geodesic_classes_ignore_enumeration_order(
        g in random_graph(),
        picks in proptest::collection::vec((0usize..16, any::<u8>()), 2),
        order in Just((0..64).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let pts = points_of(&g, &picks);
        let classes = pi0_geodesics(&g, &pts[0], &pts[1]).unwrap();
        let n = classes.geodesics.len();
        let order: Vec<usize> = order.into_iter().filter(|&i| i < n).collect();
        prop_assume!(order.len() == n);
        let shuffled: Vec<GeodesicPath> = order.iter().map(|&i| classes.geodesics[i].clone()).collect();
        let mut uf = UnionFind::new(n);
        for i in 0..n {
            for j in 0..n {
                if i != j && common_time(&g, &shuffled[i], &shuffled[j]).is_some() {
                    uf.union(i, j);
                }
            }
        }
        prop_assert_eq!(partition(&uf.classes(), &shuffled), partition(&classes.classes, &classes.geodesics));
        let mut seen: Vec<usize> = classes.classes.concat();
        seen.sort();
        prop_assert_eq!(seen, (0..n).collect::<Vec<_>>());
    }

    #[test]
    fn trees_have_no_second_homology(n in 2usize..=7, lens in proptest::collection::vec(1i64..=5, 6), parents in proptest::collection::vec(any::<usize>(), 6), i in 0usize..7, j in 0usize..7) {
        let edges = (1..n).map(|v| (parents[v - 1] % v, v, int(lens[v - 1]))).collect();
        let g = MetricGraph::unlabeled(n, edges).unwrap();
        let (p, q) = (GraphPoint::Vertex(i % n), GraphPoint::Vertex(j % n));
        prop_assert_eq!(h2_rank_geodesic(&g, &p, &q).unwrap(), 0);
        prop_assert_eq!(enumerate_geodesics(&g, &p, &q).unwrap().len(), 1);
    }

    #[test]
    fn gamma_cycles_are_antisymmetric_cycles(
        l in 2i64..=6,
        q in 1usize..=3,
        steps in proptest::collection::vec(1i64..=4, 3),
        flips in proptest::collection::vec(any::<bool>(), 3),
        slot in 0usize..3,
    ) {
        let g = two_arc_circle(l);
        // distances from phi_{i-1} strictly increasing inside (0, l)
        let den = 4 * 13;
        let mut s = 0i64;
        let dist: Vec<Rational> = steps.iter().map(|k| { s += k; ratio(s * l, den) }).collect();
        let frame: Vec<GraphPoint> = (0..=q).map(|i| GraphPoint::Vertex(i % 2)).collect();
        let pairs: Vec<(GraphPoint, GraphPoint)> = (0..q)
            .map(|i| {
                let t = if i % 2 == 0 { dist[i].clone() } else { int(l) - &dist[i] };
                let (x, y) = (g.point(0, t.clone()).unwrap(), g.point(1, t).unwrap());
                if flips[i] { (y, x) } else { (x, y) }
            })
            .collect();
        let adm = AdmissibleSet { pairs };
        prop_assert!(check_admissible(&g, &frame, &adm));
        let gamma = build_gamma_cycle(&g, &frame, &adm).unwrap();
        prop_assert_eq!(gamma.len(), 1 << q);
        prop_assert!(boundary(&g, &gamma).is_zero());
        let mut swapped = adm.clone();
        let k = slot % q;
        let (x, y) = swapped.pairs[k].clone();
        swapped.pairs[k] = (y, x);
        prop_assert_eq!(build_gamma_cycle(&g, &frame, &swapped).unwrap(), gamma.negated());

        // the same cycle inside the finite space on the points it uses
        let mut pts: Vec<GraphPoint> = frame.clone();
        for (x, y) in &adm.pairs {
            pts.push(x.clone());
            pts.push(y.clone());
        }
        pts.sort();
        pts.dedup();
        let m = g.induced_space(&pts).unwrap();
        let id = |p: &GraphPoint| PointId(pts.iter().position(|x| x == p).unwrap());
        let finite: FormalSum<PointId> = gamma.terms().map(|(c, k)| (c.map(id), k)).collect();
        prop_assert!(boundary(&m, &finite).is_zero());
        let cols: Vec<Chain<PointId>> = finite.terms().map(|(c, _)| c.clone()).collect();
        let len = chain_length(&m, &cols[0]);
        let rows = homology::enumerate_chains(&m, 2 * q - 1, &len, id(&frame[0]), id(&frame[q])).chains;
        let mat = homology::boundary_matrix_of(&m, &cols, &rows).unwrap();
        let coeffs: Vec<num_bigint::BigInt> = finite.terms().map(|(_, k)| k.into()).collect();
        prop_assert!(mat.apply(&coeffs).iter().all(|x| *x == 0.into()));
    }

    #[test]
    fn intersection_number_kills_boundaries(pick in any::<usize>(), r in 0usize..6) {
        let s = cube_sample();
        let f = &s.refs[r];
        let [x, y, z] = s.four[pick % s.four.len()].clone();
        let (a, b) = (GraphPoint::Vertex(0), GraphPoint::Vertex(7));
        let beta = FormalSum::single(Chain::new(vec![a, x, y, z, b]), 1);
        let d = boundary(&s.g, &beta);
        prop_assert_eq!(d.len(), 3);
        prop_assert_eq!(nu_f(&s.g, f, &d).unwrap(), 0);
    }

    #[test]
    fn intersection_number_ignores_refinement(pick in any::<usize>(), r in 0usize..6, cuts in proptest::collection::vec(1i64..64, 0..5)) {
        let s = cube_sample();
        let f = &s.refs[r];
        let [x, y] = s.three[pick % s.three.len()].clone();
        let base: i64 = decompose_f_regular(&s.g, f, &x, &y).unwrap().iter().map(|p| p.case.nu()).sum();
        let d = graph_distance(&s.g, &x, &y);
        let extra: Vec<Rational> = cuts.iter().map(|&c| &d * ratio(c, 64)).collect();
        prop_assert_eq!(nu_f_of_subdivision(&s.g, f, &x, &y, &extra).unwrap(), base);
        let single = FormalSum::single(Chain::new(vec![GraphPoint::Vertex(0), x, y, GraphPoint::Vertex(7)]), 1);
        prop_assert_eq!(nu_f(&s.g, f, &single).unwrap(), base);
    }
}

#[test]
fn cube_sample_is_rich_enough() {
    let s = cube_sample();
    assert_eq!(s.refs.len(), 6);
    assert!(s.four.len() > 100, "{}", s.four.len());
}
