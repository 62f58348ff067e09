//! Multistart damped Newton inside a stoichiometric compatibility class.
//!
//! Seeds come from a shifted Halton sequence in log coordinates, moved into the class by
//! the Birch projection `x = y ∘ exp(Wᵀλ)` with `W x = t`. Each seed is refined by
//! Levenberg–Marquardt in `u = ln x` on the square system made of the non-pivot rows of
//! `f`, each written as a log-ratio of its positive and negative parts, and the
//! conservation equations.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{same_point, Method, SolveOptions, SteadyState, SteadyStateReport};
use crate::error::SteadyError;
use crate::massaction::{
    monomial_values, nondegenerate_unchecked, stoichiometric_basis_matrix, MassActionSystem,
};
use crate::network::ReactionNetwork;
use crate::rational::to_f64;
use crate::structural::conservation_basis;

const PRIMES: [u32; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
const LOG10_SEED_RANGE: (f64, f64) = (-4.0, 4.0);
const U_MIN: f64 = -40.0;
const U_MAX: f64 = 27.6;
const CONSERVATION_TOL: f64 = 1e-12;
const BALANCE_TOL: f64 = 1e-8;

/// Class-independent data for solving one network in any of its compatibility classes.
#[derive(Debug, Clone)]
pub struct ClassContext {
    n: usize,
    /// Conservation basis, row-major `k × n`.
    w: Vec<f64>,
    k: usize,
    /// Species whose rows of `f` are implied by the others via conservation.
    free_rows: Vec<usize>,
    basis_s: DMatrix<f64>,
}

impl ClassContext {
    pub fn new(net: &ReactionNetwork) -> Self {
        let n = net.n();
        let wq = conservation_basis(net);
        let k = wq.len();
        let w: Vec<f64> = wq.iter().flat_map(|r| r.iter().map(to_f64)).collect();
        let pivots = greedy_pivots(&w, k, n);
        let free_rows = (0..n).filter(|i| !pivots.contains(i)).collect();
        Self {
            n,
            w,
            k,
            free_rows,
            basis_s: stoichiometric_basis_matrix(net).to_f64(),
        }
    }

    pub fn totals(&self, x: &[f64]) -> Vec<f64> {
        (0..self.k)
            .map(|r| (0..self.n).map(|i| self.w[r * self.n + i] * x[i]).sum())
            .collect()
    }

    fn row_scales(&self, anchor: &[f64]) -> Vec<f64> {
        (0..self.k)
            .map(|r| {
                (0..self.n)
                    .map(|i| (self.w[r * self.n + i] * anchor[i]).abs())
                    .sum::<f64>()
                    .max(f64::MIN_POSITIVE)
            })
            .collect()
    }

    pub fn solve(
        &self,
        sys: &MassActionSystem,
        anchor: &[f64],
        opts: SolveOptions,
    ) -> Result<SteadyStateReport, SteadyError> {
        if anchor.len() != self.n || !anchor.iter().all(|&a| a > 0.0 && a.is_finite()) {
            return Err(SteadyError::BadAnchor);
        }
        let totals = self.totals(anchor);
        let scales = self.row_scales(anchor);
        let mut states: Vec<SteadyState> = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let shift: Vec<f64> = (0..self.n).map(|_| rng.random::<f64>()).collect();
        for s in 0..opts.budget {
            let seed_point = if s == 0 {
                anchor.to_vec()
            } else {
                let raw: Vec<f64> = (0..self.n)
                    .map(|d| {
                        let h = if d < PRIMES.len() {
                            (radical_inverse(s as u64, PRIMES[d]) + shift[d]).fract()
                        } else {
                            rng.random::<f64>()
                        };
                        let (lo, hi) = LOG10_SEED_RANGE;
                        10f64.powf(lo + (hi - lo) * h)
                    })
                    .collect();
                match birch_point(&self.w, self.k, &raw, &totals) {
                    Some(p) => p,
                    None => continue,
                }
            };
            let Some(x) = self.refine(sys, &seed_point, &totals, &scales) else {
                continue;
            };
            if states.iter().any(|st| same_point(&st.point, &x)) {
                continue;
            }
            states.push(SteadyState {
                residual: sys.residual(&x),
                nondegenerate: nondegenerate_unchecked(sys, &self.basis_s, &x),
                point: x,
            });
        }
        Ok(SteadyStateReport::new(
            anchor.to_vec(),
            totals,
            states,
            Method::NewtonMultistart,
            opts.seed,
            opts.budget,
        ))
    }

    /// Residual and its Jacobian with respect to `u = ln x`. A free row `f_i = P_i - M_i`
    /// (positive and negative parts) becomes `ln P_i - ln M_i`; a conservation row with
    /// nonnegative weights becomes `ln(w x) - ln t`, otherwise `(w x - t)/s`.
    fn scaled_system(
        &self,
        sys: &MassActionSystem,
        u: &[f64],
        totals: &[f64],
        scales: &[f64],
        want_jac: bool,
    ) -> (Vec<f64>, Vec<f64>) {
        let n = self.n;
        let x: Vec<f64> = u.iter().map(|v| v.exp()).collect();
        let monomials = sys.monomials();
        let j = monomials.len();
        let m: Vec<f64> = monomials
            .iter()
            .map(|e| {
                e.iter()
                    .zip(u)
                    .map(|(&k, &ui)| k as f64 * ui)
                    .sum::<f64>()
                    .exp()
            })
            .collect();
        let nf = sys.n_float();
        let mut fvec = Vec::with_capacity(n);
        let mut jac = if want_jac {
            vec![0.0; n * n]
        } else {
            Vec::new()
        };
        for (row, &i) in self.free_rows.iter().enumerate() {
            let (mut p, mut q) = (0.0, 0.0);
            for kk in 0..j {
                let a = nf[i * j + kk];
                if a > 0.0 {
                    p += a * m[kk];
                } else {
                    q -= a * m[kk];
                }
            }
            if p == 0.0 || q == 0.0 {
                fvec.push(if p == q { 0.0 } else { f64::INFINITY });
                continue;
            }
            fvec.push(p.ln() - q.ln());
            if want_jac {
                for l in 0..n {
                    let (mut dp, mut dq) = (0.0, 0.0);
                    for (kk, e) in monomials.iter().enumerate() {
                        if e[l] == 0 {
                            continue;
                        }
                        let a = nf[i * j + kk];
                        let t = a * m[kk] * e[l] as f64;
                        if a > 0.0 {
                            dp += t;
                        } else {
                            dq -= t;
                        }
                    }
                    jac[row * n + l] = dp / p - dq / q;
                }
            }
        }
        let base = self.free_rows.len();
        for r in 0..self.k {
            let w = &self.w[r * n..(r + 1) * n];
            let v: f64 = w.iter().zip(&x).map(|(a, b)| a * b).sum();
            let log_form = totals[r] > 0.0 && w.iter().all(|c| *c >= 0.0);
            if log_form {
                fvec.push(v.ln() - totals[r].ln());
            } else {
                fvec.push((v - totals[r]) / scales[r]);
            }
            if want_jac {
                for l in 0..n {
                    let d = w[l] * x[l];
                    jac[(base + r) * n + l] = if log_form { d / v } else { d / scales[r] };
                }
            }
        }
        (fvec, jac)
    }

    fn refine(
        &self,
        sys: &MassActionSystem,
        start: &[f64],
        totals: &[f64],
        scales: &[f64],
    ) -> Option<Vec<f64>> {
        let n = self.n;
        let mut u: Vec<f64> = start.iter().map(|v| v.ln()).collect();
        let (mut fvec, mut jac) = self.scaled_system(sys, &u, totals, scales, true);
        let mut cost: f64 = fvec.iter().map(|v| v * v).sum();
        if !cost.is_finite() {
            return None;
        }
        let mut mu = 1e-3;
        for _ in 0..120 {
            if fvec.iter().all(|v| v.abs() < 1e-14) {
                break;
            }
            let mut jtj = vec![0.0; n * n];
            let mut grad = vec![0.0; n];
            for r in 0..n {
                for a in 0..n {
                    let ja = jac[r * n + a];
                    if ja == 0.0 {
                        continue;
                    }
                    grad[a] += ja * fvec[r];
                    for b in 0..n {
                        jtj[a * n + b] += ja * jac[r * n + b];
                    }
                }
            }
            let mut accepted = false;
            let mut step_norm = 0.0;
            while mu < 1e12 {
                let mut lhs = jtj.clone();
                for a in 0..n {
                    lhs[a * n + a] += mu * jtj[a * n + a].max(1e-10);
                }
                let mut delta: Vec<f64> = grad.iter().map(|g| -g).collect();
                if !solve_dense(&mut lhs, &mut delta, n) {
                    mu *= 4.0;
                    continue;
                }
                let trial: Vec<f64> = u.iter().zip(&delta).map(|(a, d)| a + d).collect();
                if trial.iter().any(|&v| !(U_MIN..=U_MAX).contains(&v)) {
                    mu *= 4.0;
                    continue;
                }
                let (f_new, _) = self.scaled_system(sys, &trial, totals, scales, false);
                let cost_new: f64 = f_new.iter().map(|v| v * v).sum();
                if cost_new.is_finite() && cost_new < cost {
                    step_norm = delta.iter().fold(0.0f64, |a, d| a.max(d.abs()));
                    u = trial;
                    cost = cost_new;
                    mu = (mu / 3.0).max(1e-12);
                    accepted = true;
                    break;
                }
                mu *= 4.0;
            }
            if !accepted {
                break;
            }
            let (f2, j2) = self.scaled_system(sys, &u, totals, scales, true);
            fvec = f2;
            jac = j2;
            if step_norm < 1e-15 {
                break;
            }
        }
        let mut x: Vec<f64> = u.iter().map(|v| v.exp()).collect();
        self.polish(sys, &mut x, totals);
        self.accept(sys, &x, totals, scales).then_some(x)
    }

    /// Unscaled residual `[f_free(x); W x - t]`.
    fn raw_residual(&self, sys: &MassActionSystem, x: &[f64], totals: &[f64]) -> Vec<f64> {
        let f = sys.eval(x);
        let mut out: Vec<f64> = self.free_rows.iter().map(|&i| f[i]).collect();
        out.extend(self.totals(x).iter().zip(totals).map(|(a, t)| a - t));
        out
    }

    /// A few least-squares Newton steps in `x` on the unscaled system.
    fn polish(&self, sys: &MassActionSystem, x: &mut Vec<f64>, totals: &[f64]) {
        let n = self.n;
        let norm = |v: &[f64]| v.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        let mut res = self.raw_residual(sys, x, totals);
        for _ in 0..3 {
            if !x.iter().all(|v| *v > 0.0) {
                return;
            }
            let jf = crate::massaction::jacobian_unchecked(sys, x);
            let mut jm = DMatrix::zeros(n, n);
            for (row, &i) in self.free_rows.iter().enumerate() {
                for l in 0..n {
                    jm[(row, l)] = jf[(i, l)];
                }
            }
            let base = self.free_rows.len();
            for r in 0..self.k {
                for l in 0..n {
                    jm[(base + r, l)] = self.w[r * n + l];
                }
            }
            let rhs = DVector::from_iterator(n, res.iter().map(|v| -v));
            let Ok(delta) = jm.svd(true, true).solve(&rhs, 1e-14) else {
                return;
            };
            let trial: Vec<f64> = x.iter().zip(delta.iter()).map(|(a, d)| a + d).collect();
            if !trial.iter().all(|v| *v > 0.0 && v.is_finite()) {
                return;
            }
            let res_new = self.raw_residual(sys, &trial, totals);
            if norm(&res_new) < norm(&res) {
                *x = trial;
                res = res_new;
            } else {
                return;
            }
        }
    }

    fn accept(&self, sys: &MassActionSystem, x: &[f64], totals: &[f64], scales: &[f64]) -> bool {
        if !x.iter().all(|v| *v > 0.0 && v.is_finite()) || !sys.is_steady_state(x) {
            return false;
        }
        // Each rate balance must cancel relative to its terms, which rejects points that
        // only look stationary because they approach the boundary.
        let m = monomial_values(sys.monomials(), x);
        let nf = sys.n_float();
        let j = m.len();
        let balanced = (0..self.n).all(|i| {
            let (f, g) = (0..j).fold((0.0, 0.0), |(f, g), kk| {
                let a = nf[i * j + kk];
                (f + a * m[kk], g + a.abs() * m[kk])
            });
            f.abs() <= BALANCE_TOL * g
        });
        if !balanced {
            return false;
        }
        self.totals(x)
            .iter()
            .zip(totals)
            .zip(scales)
            .all(|((a, t), s)| (a - t).abs() <= CONSERVATION_TOL * s.max(t.abs()))
    }
}

/// Steady states of `sys` in the class of `anchor`.
pub fn solve_in_class(
    sys: &MassActionSystem,
    anchor: &[f64],
    opts: SolveOptions,
) -> Result<SteadyStateReport, SteadyError> {
    ClassContext::new(&sys.net).solve(sys, anchor, opts)
}

/// Column indices chosen by complete pivoting on the `k × n` conservation basis.
fn greedy_pivots(w: &[f64], k: usize, n: usize) -> Vec<usize> {
    let mut m = w.to_vec();
    let mut pivots = Vec::new();
    let mut rows: Vec<usize> = (0..k).collect();
    for _ in 0..k {
        let mut best = (0.0, usize::MAX, usize::MAX);
        for &r in &rows {
            for c in (0..n).filter(|c| !pivots.contains(c)) {
                let v = m[r * n + c].abs();
                if v > best.0 {
                    best = (v, r, c);
                }
            }
        }
        let (_, pr, pc) = best;
        if pr == usize::MAX {
            break;
        }
        rows.retain(|&r| r != pr);
        for &r in &rows {
            let f = m[r * n + pc] / m[pr * n + pc];
            for c in 0..n {
                m[r * n + c] -= f * m[pr * n + c];
            }
        }
        pivots.push(pc);
    }
    pivots
}

/// Van der Corput radical inverse of `i` in base `b`.
fn radical_inverse(mut i: u64, b: u32) -> f64 {
    let b = b as u64;
    let mut inv = 1.0 / b as f64;
    let mut out = 0.0;
    while i > 0 {
        out += (i % b) as f64 * inv;
        i /= b;
        inv /= b as f64;
    }
    out
}

/// Gaussian elimination with partial pivoting; `a` is row-major `n × n`, result in `b`.
pub(crate) fn solve_dense(a: &mut [f64], b: &mut [f64], n: usize) -> bool {
    for col in 0..n {
        let p = (col..n)
            .max_by(|&r, &s| a[r * n + col].abs().total_cmp(&a[s * n + col].abs()))
            .expect("non-empty range");
        if a[p * n + col].abs() < 1e-300 || !a[p * n + col].is_finite() {
            return false;
        }
        if p != col {
            for c in 0..n {
                a.swap(p * n + c, col * n + c);
            }
            b.swap(p, col);
        }
        let piv = a[col * n + col];
        for r in col + 1..n {
            let f = a[r * n + col] / piv;
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                a[r * n + c] -= f * a[col * n + c];
            }
            b[r] -= f * b[col];
        }
    }
    for col in (0..n).rev() {
        let mut v = b[col];
        for c in col + 1..n {
            v -= a[col * n + c] * b[c];
        }
        b[col] = v / a[col * n + col];
    }
    b.iter().all(|v| v.is_finite())
}

/// Point `y ∘ exp(Wᵀλ)` with `W x = t`, by Newton on the strictly convex dual.
pub fn birch_point(w: &[f64], k: usize, y: &[f64], totals: &[f64]) -> Option<Vec<f64>> {
    let n = y.len();
    if k == 0 {
        return Some(y.to_vec());
    }
    let scale: f64 = totals
        .iter()
        .fold(0.0f64, |a, t| a.max(t.abs()))
        .max(1e-300);
    let point = |lam: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| {
                let e: f64 = (0..k).map(|r| w[r * n + i] * lam[r]).sum();
                y[i] * e.exp()
            })
            .collect()
    };
    let phi = |lam: &[f64], x: &[f64]| -> f64 {
        x.iter().sum::<f64>() - (0..k).map(|r| totals[r] * lam[r]).sum::<f64>()
    };
    let gap = |x: &[f64]| -> f64 {
        (0..k)
            .map(|r| ((0..n).map(|i| w[r * n + i] * x[i]).sum::<f64>() - totals[r]).abs())
            .fold(0.0, f64::max)
    };
    let mut lam = vec![0.0; k];
    let mut x = point(&lam);
    for _ in 0..200 {
        let g: Vec<f64> = (0..k)
            .map(|r| (0..n).map(|i| w[r * n + i] * x[i]).sum::<f64>() - totals[r])
            .collect();
        if g.iter().all(|v| v.abs() <= 1e-14 * scale) {
            return Some(x);
        }
        let mut h = vec![0.0; k * k];
        for a in 0..k {
            for b in 0..k {
                h[a * k + b] = (0..n).map(|i| w[a * n + i] * w[b * n + i] * x[i]).sum();
            }
        }
        let mut delta: Vec<f64> = g.iter().map(|v| -v).collect();
        if !solve_dense(&mut h, &mut delta, k) {
            return None;
        }
        let max_exp = (0..n)
            .map(|i| (0..k).map(|r| w[r * n + i] * delta[r]).sum::<f64>().abs())
            .fold(0.0f64, f64::max);
        let mut t = if max_exp > 20.0 { 20.0 / max_exp } else { 1.0 };
        let f0 = phi(&lam, &x);
        let slope: f64 = g.iter().zip(&delta).map(|(a, b)| a * b).sum();
        loop {
            let trial: Vec<f64> = lam.iter().zip(&delta).map(|(l, d)| l + t * d).collect();
            let xt = point(&trial);
            let ft = phi(&trial, &xt);
            // Near the optimum `phi` is flat to rounding; fall back to gradient decrease.
            if ft.is_finite() && (ft <= f0 + 1e-4 * t * slope || gap(&xt) < gap(&x)) {
                lam = trial;
                x = xt;
                break;
            }
            t *= 0.5;
            if t < 1e-12 {
                let done = g.iter().all(|v| v.abs() <= 1e-10 * scale);
                return done.then_some(x);
            }
        }
    }
    let g_ok = (0..k).all(|r| {
        ((0..n).map(|i| w[r * n + i] * x[i]).sum::<f64>() - totals[r]).abs() <= 1e-10 * scale
    });
    g_ok.then_some(x)
}

/// A positive point with the given conservation-law values (RREF basis order).
pub fn anchor_from_totals(net: &ReactionNetwork, totals: &[f64]) -> Result<Vec<f64>, SteadyError> {
    let wq = conservation_basis(net);
    if wq.len() != totals.len() {
        return Err(SteadyError::BadTotals(format!(
            "network has {} conservation laws, got {} totals",
            wq.len(),
            totals.len()
        )));
    }
    let w: Vec<f64> = wq.iter().flat_map(|r| r.iter().map(to_f64)).collect();
    birch_point(&w, wq.len(), &vec![1.0; net.n()], totals)
        .ok_or_else(|| SteadyError::BadTotals("no positive point has these totals".to_string()))
}
