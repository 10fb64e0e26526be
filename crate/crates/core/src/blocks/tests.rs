use super::*;
use crate::submodular::{ConcaveOfModular, CutFunction, Modular, SumOracle};
use proptest::prelude::*;
use std::sync::Arc;

/// Minimizes `phi(t)` over `t ∈ [-w, w]` on a fine grid followed by a local
/// refinement; used as an oracle for the closed-form segment projections.
fn grid_argmin(w: f64, phi: impl Fn(f64) -> f64) -> f64 {
    let steps = 20_000;
    let mut best_t = -w;
    let mut best = phi(-w);
    for k in 0..=steps {
        let t = -w + 2.0 * w * k as f64 / steps as f64;
        let v = phi(t);
        if v < best {
            best = v;
            best_t = t;
        }
    }
    // golden-section refinement in the bracketing cell
    let h = 2.0 * w / steps as f64;
    let (mut lo, mut hi) = ((best_t - h).max(-w), (best_t + h).min(w));
    for _ in 0..100 {
        let m1 = lo + (hi - lo) * 0.382;
        let m2 = lo + (hi - lo) * 0.618;
        if phi(m1) < phi(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    0.5 * (lo + hi)
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[test]
fn project_edge_examples() {
    let e = EdgeCutBlock::new(0, 1, 2.0).unwrap();
    assert_eq!(project_edge(&e, &[3.0, 1.0]), vec![1.0, -1.0]);
    assert_eq!(project_edge(&e, &[0.0, 0.0]), vec![0.0, 0.0]);
    assert_eq!(project_edge(&e, &[5.0, -5.0]), vec![2.0, -2.0]);

    for a in [[3.0, 1.0], [5.0, -5.0], [-0.3, 0.9]] {
        let t = grid_argmin(2.0, |t| dist2(&[t, -t], &a));
        let p = project_edge(&e, &a);
        assert!((p[0] - t).abs() < 1e-6, "{a:?}: {} vs {t}", p[0]);
    }
}

#[test]
fn edge_block_validation() {
    assert!(EdgeCutBlock::new(1, 1, 1.0).is_err());
    assert!(EdgeCutBlock::new(0, 1, -1.0).is_err());
    assert!(EdgeCutBlock::new(0, 1, f64::NAN).is_err());
}

#[test]
fn matching_rejects_shared_endpoints() {
    let e1 = EdgeCutBlock::new(0, 1, 1.0).unwrap();
    let e2 = EdgeCutBlock::new(1, 2, 1.0).unwrap();
    assert!(matches!(
        MatchingCutBlock::new(vec![e1, e2]),
        Err(Error::InvalidBlock(_))
    ));
}

#[test]
fn project_matching_is_edgewise() {
    let e1 = EdgeCutBlock::new(0, 1, 2.0).unwrap();
    let e2 = EdgeCutBlock::new(3, 2, 2.0).unwrap();
    let single = MatchingCutBlock::new(vec![e1]).unwrap();
    let a = [3.0, 1.0, -5.0, 5.0, 7.0];
    assert_eq!(project_matching(&single, &a), project_edge(&e1, &a));

    let m = MatchingCutBlock::new(vec![e1, e2]).unwrap();
    let p = project_matching(&m, &a);
    assert_eq!(p, vec![1.0, -1.0, -2.0, 2.0, 0.0]);
    assert_eq!(project_matching(&m, &[0.0; 5]), vec![0.0; 5]);

    // joint search over both segment parameters, coordinate-wise grid
    let t1 = grid_argmin(2.0, |t| (t - a[0]).powi(2) + (-t - a[1]).powi(2));
    let t2 = grid_argmin(2.0, |t| (t - a[3]).powi(2) + (-t - a[2]).powi(2));
    assert!((p[0] - t1).abs() < 1e-6);
    assert!((p[3] - t2).abs() < 1e-6);
}

#[test]
fn project_modular_ignores_input() {
    let m = ModularBlock { w: vec![1.0, -2.0] };
    assert_eq!(project_modular(&m, &[9.0, 9.0]), vec![1.0, -2.0]);
    assert_eq!(project_modular(&m, &[1.0, -2.0]), vec![1.0, -2.0]);
    let z = ModularBlock { w: vec![0.0, 0.0] };
    assert_eq!(project_modular(&z, &[1.0, 1.0]), vec![0.0, 0.0]);
}

#[test]
fn prox_block_examples() {
    let b = Block::edge(2, EdgeCutBlock::new(0, 1, 1.0).unwrap()).unwrap();
    let a = [-2.0, 2.0];
    let p = prox_block(&b, &a).unwrap();
    assert_eq!(p, vec![1.0, -1.0]);
    let t = grid_argmin(1.0, |t| t * a[0] - t * a[1] + 2.0 * t * t);
    assert!((p[0] - t).abs() < 1e-6);

    assert_eq!(prox_block(&b, &[0.0, 0.0]).unwrap(), vec![0.0, 0.0]);

    let m = Block::modular(vec![0.5, -1.5]).unwrap();
    assert_eq!(prox_block(&m, &[3.0, 4.0]).unwrap(), vec![0.5, -1.5]);
}

#[test]
fn generic_matches_edge_projection() {
    let oracle = CutFunction::new(2, vec![(0, 1, 2.0)]).unwrap();
    let g = GenericBlock::new(oracle, DEFAULT_TOL).unwrap();
    let p = project_generic(&g, &[3.0, 1.0]).unwrap();
    assert!((p[0] - 1.0).abs() < 1e-6 && (p[1] + 1.0).abs() < 1e-6, "{p:?}");
}

#[test]
fn generic_fixes_members() {
    let oracle = SumOracle::new(
        3,
        vec![
            Arc::new(CutFunction::new(3, vec![(0, 1, 1.0), (1, 2, 2.0)]).unwrap()),
            Arc::new(Modular::new(vec![0.5, -0.5, 1.0])),
        ],
    )
    .unwrap();
    let g = GenericBlock::new(oracle, DEFAULT_TOL).unwrap();
    // midpoint of two greedy vertices is in B(F)
    let v1 = edmonds_greedy(g.oracle(), &[1.0, 0.0, -1.0]).unwrap().w;
    let v2 = edmonds_greedy(g.oracle(), &[-1.0, 2.0, 0.5]).unwrap().w;
    let mid: Vec<f64> = v1.iter().zip(&v2).map(|(a, b)| 0.5 * (a + b)).collect();
    let p = g.project(&mid).unwrap();
    assert!(dist2(&p, &mid).sqrt() < 1e-6, "{p:?} vs {mid:?}");
}

#[test]
fn generic_reports_convergence_failure() {
    let oracle = ConcaveOfModular {
        coefficients: vec![1.0, 2.0, 3.0, 0.5],
        scale: 1.0,
    };
    let g = GenericBlock::new(oracle, 1e-12).unwrap().with_max_iter(1);
    match g.project(&[0.3, 0.3, 0.3, 0.3]) {
        Err(Error::ConvergenceFailure { best, gap, iterations }) => {
            assert_eq!(iterations, 1);
            assert_eq!(best.len(), 4);
            assert!(gap > 0.0);
        }
        other => panic!("expected convergence failure, got {other:?}"),
    }
}

#[test]
fn generic_block_checks_normalization() {
    let oracle = crate::submodular::FnOracle::new(2, |m: &[bool]| 1.0 + m[0] as u8 as f64);
    let g = GenericBlock::new(oracle, DEFAULT_TOL).unwrap();
    assert!(Block::generic(2, vec![0, 1], g).is_err());
}

#[test]
fn cut_greedy_agrees_with_edmonds() {
    let m = MatchingCutBlock::new(vec![
        EdgeCutBlock::new(4, 1, 1.5).unwrap(),
        EdgeCutBlock::new(0, 2, 0.5).unwrap(),
    ])
    .unwrap();
    let b = Block::matching(5, m).unwrap();
    let cut = CutFunction::new(5, vec![(4, 1, 1.5), (0, 2, 0.5)]).unwrap();
    for x in [
        vec![0.0; 5],
        vec![1.0, 2.0, 1.0, 0.0, 2.0],
        vec![-0.3, 0.7, 1.1, 5.0, -2.0],
    ] {
        let fast = b.greedy_local(&b.gather(&x)).unwrap();
        let slow = edmonds_greedy(&cut, &x).unwrap();
        assert_eq!(b.to_dense(&fast.w), slow.w, "x = {x:?}");
        assert!((fast.value - slow.value).abs() < 1e-12);
        assert!((b.lovasz_local(&b.gather(&x)).unwrap() - slow.value).abs() < 1e-12);
        // prefix values through the block match the plain cut oracle
        let order = crate::submodular::descending_order(&x);
        for (p, q) in b.prefix_values(&order).iter().zip(cut.prefix_values(&order)) {
            assert!((p - q).abs() < 1e-12);
        }
    }
}

#[test]
fn generic_block_prefix_values_skip_outside_support() {
    let oracle = ConcaveOfModular {
        coefficients: vec![1.0, 4.0],
        scale: 1.0,
    };
    let b = Block::generic(4, vec![3, 1], GenericBlock::new(oracle, DEFAULT_TOL).unwrap()).unwrap();
    // support sorted: local 0 -> element 1, local 1 -> element 3
    assert_eq!(b.prefix_values(&[0, 3, 2, 1]), vec![0.0, 0.0, 2.0, 2.0, 5f64.sqrt()]);
    assert_eq!(b.eval(&Subset::from_indices(4, &[1])), 1.0);
}

fn vertices_of_matching(b: &Block) -> Vec<Vec<f64>> {
    let k = b.support().len() / 2;
    (0..1u32 << k)
        .map(|signs| {
            let x: Vec<f64> = (0..b.support().len())
                .map(|p| {
                    // pick a direction that selects the desired endpoint per edge
                    let BlockKind::Matching(m) = b.kind() else { unreachable!() };
                    let idx = m
                        .edges()
                        .iter()
                        .position(|e| b.support()[p] == e.u || b.support()[p] == e.v)
                        .unwrap();
                    let e = m.edges()[idx];
                    let is_u = b.support()[p] == e.u;
                    let up = signs >> idx & 1 == 1;
                    if is_u == up { 1.0 } else { -1.0 }
                })
                .collect();
            b.greedy_local(&x).unwrap().w
        })
        .collect()
}

fn small_matching() -> Block {
    let m = MatchingCutBlock::new(vec![
        EdgeCutBlock::new(0, 3, 1.0).unwrap(),
        EdgeCutBlock::new(2, 1, 0.5).unwrap(),
    ])
    .unwrap();
    Block::matching(5, m).unwrap()
}

proptest! {
    #[test]
    fn projection_is_idempotent_and_feasible(a in prop::collection::vec(-4.0f64..4.0, 5)) {
        let b = small_matching();
        let p = b.project(&a).unwrap();
        let pp = b.project(&p).unwrap();
        prop_assert!(dist2(&p, &pp).sqrt() <= 1e-12);
        // membership: each edge coefficient within its weight, zero elsewhere
        prop_assert!(p[0].abs() <= 1.0 && p[0] == -p[3]);
        prop_assert!(p[2].abs() <= 0.5 && p[2] == -p[1]);
        prop_assert_eq!(p[4], 0.0);
    }

    #[test]
    fn projection_is_nonexpansive(
        a in prop::collection::vec(-4.0f64..4.0, 5),
        c in prop::collection::vec(-4.0f64..4.0, 5),
    ) {
        let b = small_matching();
        let pa = b.project(&a).unwrap();
        let pc = b.project(&c).unwrap();
        prop_assert!(dist2(&pa, &pc) <= dist2(&a, &c) + 1e-12);
    }

    #[test]
    fn projection_obtuse_angle(a in prop::collection::vec(-4.0f64..4.0, 5)) {
        let b = small_matching();
        let p = b.project(&a).unwrap();
        for z in vertices_of_matching(&b) {
            let z = b.to_dense(&z);
            let ip: f64 = (0..5).map(|i| (a[i] - p[i]) * (z[i] - p[i])).sum();
            prop_assert!(ip <= 1e-12, "ip = {}", ip);
        }
    }

    #[test]
    fn generic_projection_is_feasible(a in prop::collection::vec(-3.0f64..3.0, 4)) {
        let oracle = SumOracle::new(4, vec![
            Arc::new(CutFunction::new(4, vec![(0, 1, 1.0), (1, 2, 0.5), (2, 3, 1.5)]).unwrap()),
            Arc::new(ConcaveOfModular { coefficients: vec![1.0, 0.5, 2.0, 1.0], scale: 1.0 }),
        ]).unwrap();
        let g = GenericBlock::new(oracle, DEFAULT_TOL).unwrap();
        let p = g.project(&a).unwrap();
        let total: f64 = p.iter().sum();
        let fv = g.oracle().eval(&Subset::full(4));
        prop_assert!((total - fv).abs() <= 1e-9 * fv.abs().max(1.0));
        for bits in 0..16u64 {
            let s = Subset::from_bits(4, bits);
            let ws: f64 = s.indices().iter().map(|&i| p[i]).sum();
            prop_assert!(ws <= g.oracle().eval(&s) + 1e-9);
        }
    }
}
