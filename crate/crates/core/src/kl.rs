//! Minimum Kullback–Leibler divergence over the base polytope.

use std::collections::HashMap;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::matroid::MatroidHandle;
use crate::matroid::{greedy_base, is_base};
use crate::rational;
use crate::sfm::fractional_arboricity;
use crate::subset::SubsetMask;
use crate::universal::BasePmf;
use crate::weights::WeightVector;

#[derive(Clone, Copy, Debug)]
pub struct MklOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for MklOptions {
    fn default() -> Self {
        MklOptions { tol: 1e-10, max_iter: 200_000 }
    }
}

#[derive(Clone, Debug)]
pub struct MklSolution {
    pub density: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub duality_gap: f64,
    pub converged: bool,
    /// Mixture of visited bases whose usage is `density`.
    pub pmf: BasePmf<f64>,
}

/// `−Σ σ(e) log η(e)`, `+∞` when some `η(e) = 0`.
pub fn mkl_objective(eta: &[f64], sigma: &[f64]) -> f64 {
    let mut v = 0.0;
    for (&x, &s) in eta.iter().zip(sigma) {
        if x <= 0.0 {
            return f64::INFINITY;
        }
        v -= s * x.ln();
    }
    v
}

pub fn mkl_gradient(eta: &[f64], sigma: &[f64]) -> Vec<f64> {
    eta.iter().zip(sigma).map(|(x, s)| -s / x).collect()
}

/// `σ(E)·H(σ/σ(E)) − σ(E)·log r(M)`, a lower bound on the optimal value.
pub fn gibbs_bound(m: &MatroidHandle, sigma: &WeightVector) -> f64 {
    let s = sigma.to_f64();
    let total: f64 = s.iter().sum();
    let h: f64 = -s.iter().map(|x| x / total).map(|p| p * p.ln()).sum::<f64>();
    total * h - total * (m.full_rank() as f64).ln()
}

/// Maximum `w`-weight base by greedy.
fn max_weight_base(m: &MatroidHandle, w: &[f64]) -> SubsetMask {
    let mut order: Vec<usize> = (0..w.len()).collect();
    order.sort_by(|&a, &b| w[b].total_cmp(&w[a]).then(a.cmp(&b)));
    greedy_base(m, &order)
}

fn dot(g: &[f64], b: &SubsetMask) -> f64 {
    b.iter().map(|e| g[e]).sum()
}

/// Step length minimizing the objective along `η + γd` on `[0, γ_max]`.
fn line_search(eta: &[f64], d: &[f64], sigma: &[f64], gamma_max: f64) -> f64 {
    let deriv = |g: f64| -> f64 { eta.iter().zip(d).zip(sigma).map(|((x, dx), s)| -s * dx / (x + g * dx)).sum() };
    let mut hi = gamma_max;
    for (x, dx) in eta.iter().zip(d) {
        if *dx < 0.0 {
            hi = hi.min(-x / dx);
        }
    }
    if hi == gamma_max && eta.iter().zip(d).all(|(x, dx)| x + hi * dx > 0.0) && deriv(hi) <= 0.0 {
        return hi;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if deriv(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

pub fn mkl_solve(m: &MatroidHandle, sigma: &WeightVector, opts: &MklOptions) -> Result<MklSolution> {
    if !(opts.tol > 0.0) {
        return Err(Error::input("tol must be positive"));
    }
    sigma.check_len(m.len())?;
    m.ensure_loopless()?;
    let n = m.len();
    let s = sigma.to_f64();

    let mut active: Vec<(SubsetMask, f64)> = Vec::new();
    let mut index: HashMap<SubsetMask, usize> = HashMap::new();
    let mut covered = max_weight_base(m, &s);
    let mut init = vec![covered.clone()];
    for e in 0..n {
        if !covered.contains(e) {
            let mut order = vec![e];
            order.extend((0..n).filter(|&x| x != e));
            let b = greedy_base(m, &order);
            covered = covered.union(&b);
            init.push(b);
        }
    }
    let w0 = 1.0 / init.len() as f64;
    for b in init {
        index.insert(b.clone(), active.len());
        active.push((b, w0));
    }

    let usage = |active: &[(SubsetMask, f64)]| {
        let mut eta = vec![0.0; n];
        for (b, w) in active {
            for e in b.iter() {
                eta[e] += w;
            }
        }
        eta
    };
    let mut eta = usage(&active);
    let mut gap = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;
    let mut d = vec![0.0; n];

    while iterations < opts.max_iter {
        let g = mkl_gradient(&eta, &s);
        let v: Vec<f64> = g.iter().map(|x| -x).collect();
        let fw = max_weight_base(m, &v);
        let g_eta: f64 = g.iter().zip(&eta).map(|(a, b)| a * b).sum();
        gap = g_eta - dot(&g, &fw);
        if gap <= opts.tol {
            converged = true;
            break;
        }
        iterations += 1;
        let (away, away_val) = active
            .iter()
            .enumerate()
            .map(|(i, (b, _))| (i, dot(&g, b)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty active set");
        let away_gap = away_val - g_eta;
        if gap >= away_gap || active.len() == 1 {
            for e in 0..n {
                d[e] = -eta[e] + if fw.contains(e) { 1.0 } else { 0.0 };
            }
            let gamma = line_search(&eta, &d, &s, 1.0);
            for (_, w) in active.iter_mut() {
                *w *= 1.0 - gamma;
            }
            match index.get(&fw) {
                Some(&i) => active[i].1 += gamma,
                None => {
                    index.insert(fw.clone(), active.len());
                    active.push((fw, gamma));
                }
            }
        } else {
            let wa = active[away].1;
            for e in 0..n {
                d[e] = eta[e] - if active[away].0.contains(e) { 1.0 } else { 0.0 };
            }
            let gamma = line_search(&eta, &d, &s, wa / (1.0 - wa));
            for (_, w) in active.iter_mut() {
                *w *= 1.0 + gamma;
            }
            active[away].1 -= gamma;
        }
        if active.iter().any(|(_, w)| *w <= 1e-300) {
            active.retain(|(_, w)| *w > 1e-300);
            index = active.iter().enumerate().map(|(i, (b, _))| (b.clone(), i)).collect();
        }
        let next = usage(&active);
        if next.iter().any(|&x| x <= 0.0) {
            break;
        }
        eta = next;
    }
    if converged {
        polish(&mut active, &mut eta, &s);
        let g = mkl_gradient(&eta, &s);
        let v: Vec<f64> = g.iter().map(|x| -x).collect();
        let g_eta: f64 = g.iter().zip(&eta).map(|(a, b)| a * b).sum();
        gap = gap.min(g_eta - dot(&g, &max_weight_base(m, &v)));
    }
    let total: f64 = active.iter().map(|(_, w)| w).sum();
    let (bases, mass) = active.into_iter().map(|(b, w)| (b, w / total)).unzip();
    Ok(MklSolution {
        value: mkl_objective(&eta, &s),
        density: eta,
        iterations,
        duality_gap: gap,
        converged,
        pmf: BasePmf { bases, mass },
    })
}

/// Pairwise steps inside the final active set until its internal gap vanishes.
fn polish(active: &mut Vec<(SubsetMask, f64)>, eta: &mut Vec<f64>, s: &[f64]) {
    let n = eta.len();
    let mut d = vec![0.0; n];
    for _ in 0..10_000 {
        let g = mkl_gradient(eta, s);
        let vals: Vec<f64> = active.iter().map(|(b, _)| dot(&g, b)).collect();
        let best = (0..active.len()).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).expect("nonempty");
        let worst = (0..active.len()).max_by(|&a, &b| vals[a].total_cmp(&vals[b])).expect("nonempty");
        if vals[worst] - vals[best] <= 1e-15 * vals[best].abs().max(1.0) {
            break;
        }
        for e in 0..n {
            d[e] = f64::from(u8::from(active[best].0.contains(e))) - f64::from(u8::from(active[worst].0.contains(e)));
        }
        let gamma = line_search(eta, &d, s, active[worst].1);
        if gamma <= 0.0 {
            break;
        }
        active[best].1 += gamma;
        active[worst].1 -= gamma;
        for e in 0..n {
            eta[e] += gamma * d[e];
        }
        if active[worst].1 <= 1e-300 {
            active.remove(worst);
        }
    }
}

#[derive(Clone, Debug)]
pub struct LengthCertificate {
    /// `v(e) = σ(e)/η(e)`.
    pub v: Vec<f64>,
    pub best_base: SubsetMask,
    pub max_length: f64,
    pub sigma_total: f64,
    /// `max ℓ_v = σ(E)` within the tolerance. Necessary for optimality only.
    pub tight: bool,
}

pub fn length_certificate(m: &MatroidHandle, sigma: &WeightVector, eta: &[f64], tol: f64) -> Result<LengthCertificate> {
    sigma.check_len(m.len())?;
    if eta.len() != m.len() || eta.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::domain("density must be positive on every element"));
    }
    let s = sigma.to_f64();
    let v: Vec<f64> = s.iter().zip(eta).map(|(a, b)| a / b).collect();
    let best_base = max_weight_base(m, &v);
    let max_length = dot(&v, &best_base);
    let sigma_total: f64 = s.iter().sum();
    let tight = (max_length - sigma_total).abs() <= tol * sigma_total.max(1.0);
    Ok(LengthCertificate { v, best_base, max_length, sigma_total, tight })
}

#[derive(Clone, Debug)]
pub struct VmaxReport {
    pub vmax_set: SubsetMask,
    pub vmax: f64,
    /// `η(V_max)` and `r(V_max)`.
    pub mass: f64,
    pub rank: usize,
    pub core: SubsetMask,
    pub arboricity: f64,
    pub rank_tight: bool,
    pub ratio_matches: bool,
    pub core_matches: bool,
}

impl VmaxReport {
    pub fn holds(&self) -> bool {
        self.rank_tight && self.ratio_matches && self.core_matches
    }
}

pub fn vmax_core_check(m: &MatroidHandle, sigma: &WeightVector, eta: &[f64], tol: f64) -> Result<VmaxReport> {
    let cert = length_certificate(m, sigma, eta, tol)?;
    let vmax = cert.v.iter().cloned().fold(f64::MIN, f64::max);
    let vmax_set =
        SubsetMask::from_indices(m.len(), (0..m.len()).filter(|&e| cert.v[e] >= vmax * (1.0 - 1e3 * tol.sqrt())));
    let mass: f64 = vmax_set.iter().map(|e| eta[e]).sum();
    let rank = m.rank(&vmax_set);
    let sigma_v = rational::to_f64(&sigma.sum(&vmax_set));
    let (d, core) = fractional_arboricity(m, sigma)?;
    let arboricity = d.to_f64().unwrap_or(f64::NAN);
    let close = |a: f64, b: f64| (a - b).abs() <= 1e3 * tol.sqrt() * b.abs().max(1.0);
    Ok(VmaxReport {
        rank_tight: close(mass, rank as f64),
        ratio_matches: rank > 0 && close(vmax, sigma_v / rank as f64) && close(vmax, arboricity),
        core_matches: vmax_set == core,
        vmax_set,
        vmax,
        mass,
        rank,
        core,
        arboricity,
    })
}

#[derive(Clone, Debug)]
pub struct SerialReport {
    pub part_values: Vec<f64>,
    pub sum_value: f64,
    pub part_sum: f64,
    pub additive: bool,
    pub densities_match: bool,
    /// `None` when the product pmf is too large to build.
    pub product_pmf: Option<bool>,
}

impl SerialReport {
    pub fn holds(&self) -> bool {
        self.additive && self.densities_match && self.product_pmf != Some(false)
    }
}

const PRODUCT_LIMIT: usize = 200_000;

pub fn serial_rule_check(parts: &[(MatroidHandle, WeightVector)], opts: &MklOptions, tol: f64) -> Result<SerialReport> {
    if parts.is_empty() {
        return Err(Error::input("no parts"));
    }
    let handles: Vec<MatroidHandle> =
        parts.iter().enumerate().map(|(i, (m, _))| m.prefixed(&format!("p{i}."))).collect::<Result<_>>()?;
    let sum = MatroidHandle::direct_sum(&handles)?;
    let sigma = WeightVector::concat(&parts.iter().map(|(_, s)| s).collect::<Vec<_>>());
    let whole = mkl_solve(&sum, &sigma, opts)?;
    let sols: Vec<MklSolution> = parts.iter().map(|(m, s)| mkl_solve(m, s, opts)).collect::<Result<_>>()?;
    let part_values: Vec<f64> = sols.iter().map(|x| x.value).collect();
    let part_sum: f64 = part_values.iter().sum();
    let joined: Vec<f64> = sols.iter().flat_map(|x| x.density.iter().cloned()).collect();
    let densities_match = joined.iter().zip(&whole.density).all(|(a, b)| (a - b).abs() <= tol);
    let additive = (whole.value - part_sum).abs() <= tol * part_sum.abs().max(1.0);

    let size: usize = sols.iter().map(|x| x.pmf.bases.len()).product();
    let product_pmf = (size <= PRODUCT_LIMIT).then(|| {
        let n = sum.len();
        let mut acc: Vec<(Vec<usize>, f64)> = vec![(Vec::new(), 1.0)];
        let mut offset = 0;
        for x in &sols {
            let mut next = Vec::with_capacity(acc.len() * x.pmf.bases.len());
            for (elems, p) in &acc {
                for (b, q) in x.pmf.bases.iter().zip(&x.pmf.mass) {
                    let mut e = elems.clone();
                    e.extend(b.iter().map(|i| i + offset));
                    next.push((e, p * q));
                }
            }
            offset += x.density.len();
            acc = next;
        }
        let pmf = BasePmf {
            bases: acc.iter().map(|(e, _)| SubsetMask::from_indices(n, e.iter().cloned())).collect(),
            mass: acc.iter().map(|x| x.1).collect(),
        };
        pmf.bases.iter().all(|b| is_base(&sum, b))
            && (pmf.total() - 1.0).abs() <= 1e-9
            && pmf.usage(n).iter().zip(&joined).all(|(a, b)| (a - b).abs() <= 1e-9)
    });
    Ok(SerialReport { part_values, sum_value: whole.value, part_sum, additive, densities_match, product_pmf })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::universal::universal_density;
    use proptest::prelude::*;

    fn k3() -> MatroidHandle {
        MatroidHandle::graphic(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn k4() -> MatroidHandle {
        MatroidHandle::graphic(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn triangle_bridge() -> MatroidHandle {
        MatroidHandle::graphic(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn objective_examples() {
        assert_eq!(mkl_objective(&[1.0; 3], &[1.0, 2.0, 3.0]), 0.0);
        assert_eq!(mkl_objective(&[1.0, 0.0], &[1.0, 1.0]), f64::INFINITY);
        let v = mkl_objective(&[2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0, 1.0], &[1.0; 4]);
        assert!((v - 3.0 * 1.5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn solve_examples() {
        let opts = MklOptions::default();
        let tb = mkl_solve(&triangle_bridge(), &WeightVector::ones(4), &opts).unwrap();
        assert!(tb.converged);
        assert!(close(&tb.density, &[2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0, 1.0], 1e-7));
        assert!((tb.value - 1.216395).abs() < 1e-6);

        let k = mkl_solve(&k4(), &WeightVector::ones(6), &opts).unwrap();
        assert!(close(&k.density, &[0.5; 6], 1e-7));
        assert!((k.value - 6.0 * 2f64.ln()).abs() < 1e-8);

        let w = WeightVector::from_ints(&[1, 1, 2]).unwrap();
        let x = mkl_solve(&k3(), &w, &opts).unwrap();
        assert!(close(&x.density, &[0.5, 0.5, 1.0], 1e-7));
        assert!((x.value - 2.0 * 2f64.ln()).abs() < 1e-8);
        assert!(close(&x.pmf.usage(3), &x.density, 1e-10));
    }

    #[test]
    fn certificates() {
        let m = triangle_bridge();
        let ones = WeightVector::ones(4);
        let c = length_certificate(&m, &ones, &[2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0, 1.0], 1e-9).unwrap();
        assert!(c.tight);
        assert!((c.max_length - 4.0).abs() < 1e-12);
        let c = length_certificate(&m, &ones, &[0.75; 4], 1e-9).unwrap();
        assert!(c.tight);

        let sol = mkl_solve(&m, &ones, &MklOptions::default()).unwrap();
        let r = vmax_core_check(&m, &ones, &sol.density, 1e-10).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.vmax_set.to_vec(), vec![0, 1, 2]);
        assert!((r.vmax - 1.5).abs() < 1e-7);

        let w = WeightVector::from_ints(&[1, 1, 2]).unwrap();
        let sol = mkl_solve(&k3(), &w, &MklOptions::default()).unwrap();
        let r = vmax_core_check(&k3(), &w, &sol.density, 1e-10).unwrap();
        assert!(r.holds(), "{r:?}");
        assert!(r.vmax_set.is_full());
        assert!((r.vmax - 2.0).abs() < 1e-7);
    }

    #[test]
    fn serial_examples() {
        let opts = MklOptions::default();
        let ones3 = WeightVector::ones(3);
        let r = serial_rule_check(&[(k3(), ones3.clone()), (k3(), ones3.clone())], &opts, 1e-8).unwrap();
        assert!(r.holds(), "{r:?}");
        assert!((r.sum_value - 6.0 * 1.5f64.ln()).abs() < 1e-8);
        let u21 = MatroidHandle::uniform(2, 1).unwrap();
        let r =
            serial_rule_check(&[(u21, WeightVector::ones(2)), (triangle_bridge(), WeightVector::ones(4))], &opts, 1e-8)
                .unwrap();
        assert!(r.holds(), "{r:?}");
        let r = serial_rule_check(&[(k4(), WeightVector::ones(6))], &opts, 1e-8).unwrap();
        assert!(r.holds());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn matches_universal_density(seed in any::<u64>(), weighted in any::<bool>()) {
            let mut rng = gen::rng(seed);
            let m = gen::random_matroid(&mut rng, 10, 3000);
            let s = if weighted { gen::random_weights(&mut rng, m.len(), 5, 4) } else { WeightVector::ones(m.len()) };
            let sol = mkl_solve(&m, &s, &MklOptions::default()).unwrap();
            let exact = universal_density(&m, &s).unwrap().0;
            prop_assert!(sol.converged, "gap {} after {}", sol.duality_gap, sol.iterations);
            prop_assert!(exact.max_abs_diff(&sol.density) < 1e-7, "{:?} vs {:?}", exact.to_f64(), sol.density);
            prop_assert!(sol.value >= gibbs_bound(&m, &s) - 1e-9);
            let cert = length_certificate(&m, &s, &sol.density, 1e-6).unwrap();
            prop_assert!(cert.tight);
            prop_assert!(vmax_core_check(&m, &s, &sol.density, 1e-10).unwrap().holds());
        }

        #[test]
        fn gradient_matches_finite_differences(seed in any::<u64>()) {
            let mut rng = gen::rng(seed);
            let n = 6;
            let eta: Vec<f64> = (0..n).map(|_| 0.1 + 0.9 * rand::Rng::gen::<f64>(&mut rng)).collect();
            let s = gen::random_weights(&mut rng, n, 5, 3).to_f64();
            let g = mkl_gradient(&eta, &s);
            for e in 0..n {
                let h = 1e-6 * eta[e];
                let mut up = eta.clone();
                let mut dn = eta.clone();
                up[e] += h;
                dn[e] -= h;
                let fd = (mkl_objective(&up, &s) - mkl_objective(&dn, &s)) / (2.0 * h);
                prop_assert!((fd - g[e]).abs() <= 1e-6 * g[e].abs());
            }
        }
    }
}
