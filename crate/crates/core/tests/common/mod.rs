#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use subcd_core::submodular::{Subset, SubmodularOracle};

/// Every permutation of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

/// All distinct vertices of `B(F)`, one greedy vertex per permutation,
/// built from raw set evaluations.
pub fn base_vertices(f: &dyn SubmodularOracle) -> Vec<Vec<f64>> {
    let n = f.ground_size();
    let mut out: Vec<Vec<f64>> = Vec::new();
    for order in permutations(n) {
        let mut set = Subset::empty(n);
        let mut prev = f.eval(&set);
        let mut w = vec![0.0; n];
        for &e in &order {
            set.insert(e);
            let cur = f.eval(&set);
            w[e] = cur - prev;
            prev = cur;
        }
        if !out.iter().any(|v| v.iter().zip(&w).all(|(a, b)| (a - b).abs() < 1e-12)) {
            out.push(w);
        }
    }
    out
}

fn affine_min_norm(points: &[&Vec<f64>]) -> Vec<f64> {
    let k = points.len();
    let mut m = DMatrix::<f64>::zeros(k + 1, k + 1);
    for i in 0..k {
        for j in 0..k {
            m[(i, j)] = points[i].iter().zip(points[j]).map(|(a, b)| a * b).sum();
        }
        m[(i, k)] = 1.0;
        m[(k, i)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(k + 1);
    rhs[k] = 1.0;
    let sol = m.lu().solve(&rhs).expect("affinely independent corral");
    (0..k).map(|i| sol[i]).collect()
}

fn combine(points: &[Vec<f64>], idx: &[usize], weights: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; points[0].len()];
    for (&i, &w) in idx.iter().zip(weights) {
        for (a, b) in x.iter_mut().zip(&points[i]) {
            *a += w * b;
        }
    }
    x
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minimum-norm point of the convex hull of `points` by Wolfe's algorithm.
pub fn min_norm_point(points: &[Vec<f64>]) -> Vec<f64> {
    let scale = points.iter().map(|p| dot(p, p)).fold(1.0, f64::max);
    let start = (0..points.len())
        .min_by(|&i, &j| dot(&points[i], &points[i]).total_cmp(&dot(&points[j], &points[j])))
        .unwrap();
    let mut idx = vec![start];
    let mut lambda = vec![1.0];
    let mut x = points[start].clone();
    for _ in 0..1000 {
        let j = (0..points.len())
            .min_by(|&i, &k| dot(&x, &points[i]).total_cmp(&dot(&x, &points[k])))
            .unwrap();
        if dot(&x, &points[j]) >= dot(&x, &x) - 1e-13 * scale || idx.contains(&j) {
            break;
        }
        idx.push(j);
        lambda.push(0.0);
        loop {
            let corral: Vec<&Vec<f64>> = idx.iter().map(|&i| &points[i]).collect();
            let alpha = affine_min_norm(&corral);
            if alpha.iter().all(|&a| a > 1e-14) {
                lambda = alpha;
                x = combine(points, &idx, &lambda);
                break;
            }
            let theta = lambda
                .iter()
                .zip(&alpha)
                .filter(|(_, &a)| a <= 1e-14)
                .map(|(&l, &a)| l / (l - a))
                .fold(f64::INFINITY, f64::min);
            for (l, a) in lambda.iter_mut().zip(&alpha) {
                *l = (1.0 - theta) * *l + theta * a;
            }
            let mut k = 0;
            while k < idx.len() {
                if lambda[k] <= 1e-14 {
                    idx.remove(k);
                    lambda.remove(k);
                } else {
                    k += 1;
                }
            }
            let total: f64 = lambda.iter().sum();
            lambda.iter_mut().for_each(|l| *l /= total);
        }
    }
    x
}

/// Euclidean projection of `a` onto `B(F)` through the vertex list.
pub fn reference_projection(f: &dyn SubmodularOracle, a: &[f64]) -> Vec<f64> {
    let shifted: Vec<Vec<f64>> = base_vertices(f)
        .into_iter()
        .map(|v| v.iter().zip(a).map(|(p, q)| p - q).collect())
        .collect();
    min_norm_point(&shifted).iter().zip(a).map(|(p, q)| p + q).collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
