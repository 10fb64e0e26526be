mod common;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subcd_core::blocks::{project_edge, project_generic, project_matching, EdgeCutBlock, GenericBlock, MatchingCutBlock};
use subcd_core::submodular::{ConcaveOfModular, CutFunction, Modular, SubmodularOracle, SumOracle};

use common::{max_abs_diff, min_norm_point, reference_projection};

fn random_point(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-scale..scale)).collect()
}

#[test]
fn wolfe_reference_on_known_hulls() {
    // segment from (1, −1) to (−1, 1): closest point to the origin is 0
    let p = min_norm_point(&[vec![1.0, -1.0], vec![-1.0, 1.0]]);
    assert!(max_abs_diff(&p, &[0.0, 0.0]) < 1e-14);
    // triangle not containing the origin
    let p = min_norm_point(&[vec![1.0, 1.0], vec![2.0, 1.0], vec![1.0, 3.0]]);
    assert!(max_abs_diff(&p, &[1.0, 1.0]) < 1e-14);
    let p = min_norm_point(&[vec![1.0, -1.0], vec![1.0, 1.0]]);
    assert!(max_abs_diff(&p, &[1.0, 0.0]) < 1e-14);
}

#[test]
fn generic_matches_edge_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..300 {
        let n = rng.gen_range(2..6);
        let u = rng.gen_range(0..n);
        let v = (u + rng.gen_range(1..n)) % n;
        let w = rng.gen_range(0.0..3.0);
        let edge = EdgeCutBlock::new(u, v, w).unwrap();
        let cut = CutFunction::new(n, vec![(u, v, w)]).unwrap();
        let generic = GenericBlock::new(cut, 1e-9).unwrap();
        let a = random_point(&mut rng, n, 4.0);
        let closed = project_edge(&edge, &a);
        let fw = project_generic(&generic, &a).unwrap();
        assert!(max_abs_diff(&closed, &fw) <= 1e-6, "{closed:?} vs {fw:?}");
    }
}

#[test]
fn generic_matches_matching_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let n = 6;
        let edges = vec![(0, 3, rng.gen_range(0.0..2.0)), (1, 5, rng.gen_range(0.0..2.0)), (2, 4, rng.gen_range(0.0..2.0))];
        let m = MatchingCutBlock::new(edges.iter().map(|&(u, v, w)| EdgeCutBlock::new(u, v, w).unwrap()).collect()).unwrap();
        let generic = GenericBlock::new(CutFunction::new(n, edges).unwrap(), 1e-9).unwrap();
        let a = random_point(&mut rng, n, 3.0);
        let closed = project_matching(&m, &a);
        let fw = project_generic(&generic, &a).unwrap();
        assert!(max_abs_diff(&closed, &fw) <= 1e-6, "{closed:?} vs {fw:?}");
    }
}

fn random_oracle(rng: &mut ChaCha8Rng, n: usize) -> Arc<dyn SubmodularOracle> {
    let concave = ConcaveOfModular {
        coefficients: (0..n).map(|_| rng.gen_range(0.1..2.0)).collect(),
        scale: rng.gen_range(0.5..2.0),
    };
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.4) {
                edges.push((u, v, rng.gen_range(0.0..1.5)));
            }
        }
    }
    let modular = Modular::new((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect());
    Arc::new(
        SumOracle::new(
            n,
            vec![Arc::new(concave), Arc::new(CutFunction::new(n, edges).unwrap()), Arc::new(modular)],
        )
        .unwrap(),
    )
}

#[test]
fn generic_matches_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for trial in 0..60 {
        let n = 2 + trial % 4;
        let f = random_oracle(&mut rng, n);
        let generic = GenericBlock::new(f.clone(), 1e-9).unwrap();
        let a = random_point(&mut rng, n, 3.0);
        let reference = reference_projection(f.as_ref(), &a);
        let fw = project_generic(&generic, &a).unwrap();
        assert!(max_abs_diff(&reference, &fw) <= 1e-6, "n={n}: {reference:?} vs {fw:?}");
    }
}

#[test]
fn closed_forms_match_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let edges = vec![(0, 2, rng.gen_range(0.0..2.0)), (1, 3, rng.gen_range(0.0..2.0))];
        let m = MatchingCutBlock::new(edges.iter().map(|&(u, v, w)| EdgeCutBlock::new(u, v, w).unwrap()).collect()).unwrap();
        let cut = CutFunction::new(5, edges).unwrap();
        let a = random_point(&mut rng, 5, 3.0);
        let reference = reference_projection(&cut, &a);
        assert!(max_abs_diff(&reference, &project_matching(&m, &a)) <= 1e-9);
    }
}
