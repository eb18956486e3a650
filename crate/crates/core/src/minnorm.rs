//! Wolfe's minimum-norm-point algorithm over the convex hull of the points
//! produced by a linear minimization oracle, in the metric `Σ w_i x_i²`.

use nalgebra::{DMatrix, DVector};

pub trait LinearOracle {
    fn dim(&self) -> usize;
    /// A point of the hull minimizing `<g, p>`.
    fn argmin(&self, g: &[f64]) -> Vec<f64>;
}

/// Oracle over an explicit finite point set.
pub struct PointSet<'a> {
    pub points: &'a [Vec<f64>],
}

impl LinearOracle for PointSet<'_> {
    fn dim(&self) -> usize {
        self.points.first().map_or(0, |p| p.len())
    }

    fn argmin(&self, g: &[f64]) -> Vec<f64> {
        let mut best = &self.points[0];
        let mut bv = f64::INFINITY;
        for p in self.points {
            let v: f64 = p.iter().zip(g).map(|(a, b)| a * b).sum();
            if v < bv - 1e-15 {
                bv = v;
                best = p;
            }
        }
        best.clone()
    }
}

pub struct MinNorm {
    pub x: Vec<f64>,
    /// Active points and their convex coefficients.
    pub atoms: Vec<(Vec<f64>, f64)>,
    pub iterations: usize,
    pub converged: bool,
}

fn dot(w: &[f64], a: &[f64], b: &[f64]) -> f64 {
    w.iter().zip(a).zip(b).map(|((w, a), b)| w * a * b).sum()
}

fn combine(points: &[Vec<f64>], coef: &[f64]) -> Vec<f64> {
    let n = points[0].len();
    let mut x = vec![0.0; n];
    for (p, &c) in points.iter().zip(coef) {
        for i in 0..n {
            x[i] += c * p[i];
        }
    }
    x
}

/// Affine combination of `points` with least norm.
fn affine_min(points: &[Vec<f64>], w: &[f64]) -> Vec<f64> {
    let k = points.len();
    let mut a = DMatrix::<f64>::zeros(k + 1, k + 1);
    for i in 0..k {
        for j in 0..=i {
            let g = dot(w, &points[i], &points[j]);
            a[(i, j)] = g;
            a[(j, i)] = g;
        }
        a[(i, k)] = 1.0;
        a[(k, i)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(k + 1);
    rhs[k] = 1.0;
    let sol = a.clone().lu().solve(&rhs).filter(|s| s.iter().all(|v| v.is_finite())).unwrap_or_else(|| {
        a.svd(true, true).solve(&rhs, 1e-13).unwrap_or_else(|_| DVector::from_element(k + 1, 1.0 / k as f64))
    });
    sol.iter().take(k).copied().collect()
}

/// Run Wolfe's algorithm from `start` (a point of the hull).
pub fn min_norm_point(oracle: &dyn LinearOracle, w: &[f64], start: Vec<f64>, tol: f64, max_iter: usize) -> MinNorm {
    let mut pts = vec![start];
    let mut lam = vec![1.0];
    let mut x = pts[0].clone();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        let g: Vec<f64> = x.iter().zip(w).map(|(a, b)| a * b).collect();
        let q = oracle.argmin(&g);
        let xx = dot(w, &x, &x);
        let xq = dot(w, &x, &q);
        if xx - xq <= tol * xx.max(1.0) {
            converged = true;
            break;
        }
        if pts.iter().any(|p| p == &q) {
            // numerically stuck on a vertex already in the corral
            converged = xx - xq <= 1e-9 * xx.max(1.0);
            break;
        }
        pts.push(q);
        lam.push(0.0);
        loop {
            let alpha = affine_min(&pts, w);
            if alpha.iter().all(|&a| a > 1e-14) {
                lam = alpha;
                break;
            }
            let mut theta = 1.0f64;
            for (l, a) in lam.iter().zip(&alpha) {
                if *a <= 1e-14 {
                    let d = l - a;
                    if d > 0.0 {
                        theta = theta.min(l / d);
                    }
                }
            }
            for (l, a) in lam.iter_mut().zip(&alpha) {
                *l = theta * a + (1.0 - theta) * *l;
            }
            let mut keep = Vec::new();
            let mut keep_l = Vec::new();
            for (p, &l) in pts.iter().zip(&lam) {
                if l > 1e-14 {
                    keep.push(p.clone());
                    keep_l.push(l);
                }
            }
            if keep.is_empty() {
                // degenerate; restart at the newest point
                keep.push(pts.last().unwrap().clone());
                keep_l.push(1.0);
            }
            let s: f64 = keep_l.iter().sum();
            pts = keep;
            lam = keep_l.iter().map(|l| l / s).collect();
            if pts.len() == 1 {
                break;
            }
        }
        x = combine(&pts, &lam);
    }
    MinNorm { x, atoms: pts.into_iter().zip(lam).collect(), iterations, converged }
}
