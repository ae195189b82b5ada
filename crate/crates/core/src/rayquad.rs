//! Numerical solver for the truncated Borel-plane system along complex rays.
//!
//! With the quadratic convolution term dropped (it only feeds subleading
//! asymptotics away from the real axis), the system closes on two unknowns:
//! `g(xi) = f(xi, -1/3)` obeys the specialized renormalization-group equation
//!
//! ```text
//! -(1+3xi) g(xi) = gamma_hat(xi) + int_0^xi gamma_hat(xi-eta) g(eta) deta
//!                  + 3 int_0^xi gamma_hat'(xi-eta) eta g(eta) deta
//! ```
//!
//! and the anomalous dimension advances by `gamma_hat' = 2 g`, with initial
//! data `gamma_hat(0) = 1`, `g(0) = -1`. The derivative inside the kernel is
//! supplied as `2g`, so no numerical differentiation ever happens. The march
//! is a causal Volterra scheme: composite Simpson weights over past nodes
//! (with a 3/8 block closing odd node counts), a trapezoid-closure predictor
//! for the current-node unknowns and a Simpson-closure corrector iterated to
//! fixed-point tolerance.
//!
//! A Chen-iterated-integral evaluation of the same equation provides an
//! independent oracle near the origin, and `zeta_odd_f64` hosts the numeric
//! zeta values that exact modules deliberately avoid.

use num_complex::Complex64;
use thiserror::Error;

use crate::borel::borel;
use crate::physical::ode_reference;
use crate::scalars::Rational;

/// Fixed-point tolerance of the corrector pass.
pub const CORRECTOR_TOL: f64 = 1e-13;
/// Corrector iteration cap per node.
pub const CORRECTOR_MAX_ITERS: usize = 50;
/// Default pole guard distance along rays.
pub const DEFAULT_RAY_GUARD: f64 = 1e-3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RayError {
    #[error("step count must be even and >= 2, got {0}")]
    OddStepCount(usize),
    #[error("node {node} lies within {guard:.1e} of the kernel zero at xi = -1/3")]
    KernelPole { node: usize, guard: f64 },
    #[error("real ray passes within {guard:.1e} of the singularity at {location} (node {node})")]
    SingularityOnRay {
        node: usize,
        location: String,
        guard: f64,
    },
    #[error("corrector did not reach {tol:.1e} within {iters} iterations at node {node}")]
    CorrectorStalled { node: usize, tol: f64, iters: usize },
    #[error("non-finite sample at node {node}; the march has diverged")]
    NonFinite { node: usize },
    #[error("Taylor bootstrap reaches |xi| = {reach:.3}, outside the series disk (limit {limit:.3})")]
    BootstrapTooFar { reach: f64, limit: f64 },
    #[error("|xi| = {0:.3} is outside the Chen oracle's series disk")]
    ChenOutOfRange(f64),
    #[error("Chen sum not converged at xi = {xi} within depth {depth}")]
    ChenNotConverged { xi: Complex64, depth: usize },
    #[error("refinement study needs at least three step counts, each double the previous")]
    BadStepsList,
}

// ---------------------------------------------------------------------------
// Numeric zeta values
// ---------------------------------------------------------------------------

/// `zeta(n)` for integer `n >= 2` by direct summation with an Euler-Maclaurin
/// tail; accurate to full double precision. Exact modules never call this:
/// zeta values stay symbolic there.
pub fn zeta_odd_f64(n: u32) -> f64 {
    assert!(n >= 2, "zeta pole at 1");
    let m = 50usize;
    let nf = n as f64;
    let mut s = 0.0;
    for k in 1..m {
        s += (k as f64).powi(-(n as i32));
    }
    let mf = m as f64;
    // tail: int_m^inf + f(m)/2 + B2/2! f'(m) + B4/4! f'''(m) + B6/6! f^(5)(m)
    s += mf.powf(1.0 - nf) / (nf - 1.0);
    s += 0.5 * mf.powf(-nf);
    s += nf / 12.0 * mf.powf(-nf - 1.0);
    s -= nf * (nf + 1.0) * (nf + 2.0) / 720.0 * mf.powf(-nf - 3.0);
    s += nf * (nf + 1.0) * (nf + 2.0) * (nf + 3.0) * (nf + 4.0) / 30240.0 * mf.powf(-nf - 5.0);
    s
}

// ---------------------------------------------------------------------------
// Ray geometry and solution container
// ---------------------------------------------------------------------------

/// An integration ray from the origin, with an even step count (composite
/// Simpson) and a guard distance from singular points.
#[derive(Clone, PartialEq, Debug)]
pub struct Ray {
    endpoint: Complex64,
    steps: usize,
    guard: f64,
}

impl Ray {
    pub fn new(endpoint: Complex64, steps: usize) -> Result<Self, RayError> {
        Self::with_guard(endpoint, steps, DEFAULT_RAY_GUARD)
    }

    pub fn with_guard(endpoint: Complex64, steps: usize, guard: f64) -> Result<Self, RayError> {
        if steps < 2 || !steps.is_multiple_of(2) {
            return Err(RayError::OddStepCount(steps));
        }
        let ray = Ray {
            endpoint,
            steps,
            guard,
        };
        ray.validate_nodes()?;
        Ok(ray)
    }

    pub fn endpoint(&self) -> Complex64 {
        self.endpoint
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn guard(&self) -> f64 {
        self.guard
    }

    pub fn step(&self) -> Complex64 {
        self.endpoint / self.steps as f64
    }

    pub fn node(&self, j: usize) -> Complex64 {
        self.step() * j as f64
    }

    /// Same ray with a different resolution.
    pub fn with_steps(&self, steps: usize) -> Result<Self, RayError> {
        Self::with_guard(self.endpoint, steps, self.guard)
    }

    fn validate_nodes(&self) -> Result<(), RayError> {
        let third = Complex64::new(-1.0 / 3.0, 0.0);
        for j in 0..=self.steps {
            let xi = self.node(j);
            if (xi - third).norm() < self.guard {
                return Err(RayError::KernelPole {
                    node: j,
                    guard: self.guard,
                });
            }
        }
        // the anomalous dimension is singular at +-k/3 on the real line;
        // a real ray must clear them all
        if self.endpoint.im == 0.0 {
            let reach = self.endpoint.re.abs();
            let kmax = (3.0 * reach).ceil() as i64 + 1;
            for j in 0..=self.steps {
                let xi = self.node(j);
                for k in 1..=kmax {
                    for sign in [-1.0, 1.0] {
                        let loc = sign * k as f64 / 3.0;
                        if (xi.re - loc).abs() < self.guard {
                            return Err(RayError::SingularityOnRay {
                                node: j,
                                location: format!(
                                    "{}{}/3",
                                    if sign < 0.0 { "-" } else { "+" },
                                    k
                                ),
                                guard: self.guard,
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// One sample along the ray.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct RaySample {
    pub xi: Complex64,
    pub gamma_hat: Complex64,
    pub g: Complex64,
}

/// Scheme metadata stamped on every solution.
#[derive(Clone, PartialEq, Debug)]
pub struct SchemeInfo {
    pub steps: usize,
    pub guard: f64,
    pub corrector_tol: f64,
    /// The quadratic convolution term of the full system is dropped.
    pub quadratic_term_dropped: bool,
    /// Nodes initialized from the exact series, if any.
    pub taylor_boot: Option<usize>,
}

/// Sampled solution of the truncated system along a ray.
#[derive(Clone, PartialEq, Debug)]
pub struct RaySolution {
    pub samples: Vec<RaySample>,
    pub step: Complex64,
    pub scheme: SchemeInfo,
}

impl RaySolution {
    pub fn max_abs_gamma(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.gamma_hat.norm())
            .fold(0.0, f64::max)
    }

    /// Largest `|gamma_hat|` over the final quarter of the ray divided by the
    /// largest over the first three quarters; values near (or below) one mean
    /// the march has stopped growing.
    pub fn tail_growth_ratio(&self) -> f64 {
        let n = self.samples.len();
        let split = 3 * n / 4;
        let head = self.samples[..split]
            .iter()
            .map(|s| s.gamma_hat.norm())
            .fold(0.0, f64::max);
        let tail = self.samples[split..]
            .iter()
            .map(|s| s.gamma_hat.norm())
            .fold(0.0, f64::max);
        tail / head
    }

    /// CSV matching the plotted quantities: metadata comments, a header, one
    /// row per sample.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# steps={} guard={:e} corrector_tol={:e} quadratic_term_dropped={} taylor_boot={}\n",
            self.scheme.steps,
            self.scheme.guard,
            self.scheme.corrector_tol,
            self.scheme.quadratic_term_dropped,
            self.scheme
                .taylor_boot
                .map_or("none".to_string(), |k| k.to_string()),
        ));
        out.push_str("index,arclength,re_xi,im_xi,re_gamma,im_gamma,re_g,im_g\n");
        let h = self.step.norm();
        for (j, s) in self.samples.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                j,
                h * j as f64,
                s.xi.re,
                s.xi.im,
                s.gamma_hat.re,
                s.gamma_hat.im,
                s.g.re,
                s.g.im
            ));
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Quadrature weights
// ---------------------------------------------------------------------------

/// Composite closed weights for `int_0^{x_n}` on a uniform grid: Simpson for
/// even `n`, Simpson plus a trailing 3/8 block for odd `n >= 5`, trapezoid
/// for `n = 1` and pure 3/8 for `n = 3`. The step factor is *not* included.
fn quad_weight(n: usize, j: usize) -> f64 {
    debug_assert!(j <= n);
    match n {
        0 => 0.0,
        1 => 0.5,
        2 => {
            if j == 1 {
                4.0 / 3.0
            } else {
                1.0 / 3.0
            }
        }
        3 => {
            if j == 0 || j == 3 {
                3.0 / 8.0
            } else {
                9.0 / 8.0
            }
        }
        _ => {
            if n.is_multiple_of(2) {
                if j == 0 || j == n {
                    1.0 / 3.0
                } else if j % 2 == 1 {
                    4.0 / 3.0
                } else {
                    2.0 / 3.0
                }
            } else {
                // Simpson over [0, n-3], 3/8 over [n-3, n]
                let m = n - 3;
                let simpson = if j > m {
                    0.0
                } else if j == 0 || j == m {
                    1.0 / 3.0
                } else if j % 2 == 1 {
                    4.0 / 3.0
                } else {
                    2.0 / 3.0
                };
                let block = match j.checked_sub(m) {
                    Some(0) | Some(3) => 3.0 / 8.0,
                    Some(1) | Some(2) => 9.0 / 8.0,
                    _ => 0.0,
                };
                simpson + block
            }
        }
    }
}

// ---------------------------------------------------------------------------
// The march
// ---------------------------------------------------------------------------

/// Options for [`solve_ray_opts`].
#[derive(Clone, Default, Debug)]
pub struct RayOptions {
    /// Initialize nodes `1..=k` from the exact Borel series instead of
    /// marching them (reduces startup error; requires `k*|h|` inside the
    /// series disk).
    pub taylor_boot: Option<usize>,
}

/// March the truncated system along `ray` with default options.
pub fn solve_ray(ray: &Ray) -> Result<RaySolution, RayError> {
    solve_ray_opts(ray, &RayOptions::default())
}

pub fn solve_ray_opts(ray: &Ray, opts: &RayOptions) -> Result<RaySolution, RayError> {
    let n_steps = ray.steps();
    let h = ray.step();
    let mut gamma = vec![Complex64::new(0.0, 0.0); n_steps + 1];
    let mut g = vec![Complex64::new(0.0, 0.0); n_steps + 1];
    gamma[0] = Complex64::new(1.0, 0.0);
    g[0] = Complex64::new(-1.0, 0.0);

    let mut first_marched = 1;
    if let Some(k) = opts.taylor_boot {
        let reach = (k as f64) * h.norm();
        let limit = 0.30;
        if reach > limit {
            return Err(RayError::BootstrapTooFar { reach, limit });
        }
        let (bcoef, dcoef) = boot_series(60);
        for j in 1..=k.min(n_steps) {
            let xi = ray.node(j);
            gamma[j] = horner(&bcoef, xi);
            g[j] = 0.5 * horner(&dcoef, xi);
        }
        first_marched = k.min(n_steps) + 1;
    }

    for n in first_marched..=n_steps {
        let xi_n = ray.node(n);
        // partial sums over settled nodes; the unknowns enter only through
        // the j = 0 / j = n end terms
        let mut i1_mid = Complex64::new(0.0, 0.0);
        let mut i2_mid = Complex64::new(0.0, 0.0);
        for j in 1..n {
            let w = quad_weight(n, j);
            if w == 0.0 {
                continue;
            }
            i1_mid += w * gamma[n - j] * g[j];
            i2_mid += w * g[n - j] * ray.node(j) * g[j];
        }
        let mut q_mid = Complex64::new(0.0, 0.0);
        for (j, gj) in g.iter().enumerate().take(n) {
            let w = quad_weight(n, j);
            if w != 0.0 {
                q_mid += w * gj;
            }
        }
        let w0 = quad_weight(n, 0);
        let wn = quad_weight(n, n);

        // trapezoid-closure predictor: extrapolated g, incremental gamma
        let mut g_cur = if n >= 2 {
            2.0 * g[n - 1] - g[n - 2]
        } else {
            g[0]
        };
        let mut gamma_cur = gamma[n - 1] + h * (g[n - 1] + g_cur);

        // Simpson-closure corrector, iterated to fixed point
        let mut converged = false;
        for _ in 0..CORRECTOR_MAX_ITERS {
            let gamma_next = gamma[0] + 2.0 * h * (q_mid + wn * g_cur);
            let i1 = h * (i1_mid + w0 * gamma_next * g[0] + wn * gamma[0] * g_cur);
            let i2 = h * (i2_mid + wn * g[0] * xi_n * g_cur);
            let g_next = -(gamma_next + i1 + 6.0 * i2) / (1.0 + 3.0 * xi_n);
            let delta = (gamma_next - gamma_cur).norm() + (g_next - g_cur).norm();
            let scale = 1.0 + gamma_next.norm() + g_next.norm();
            gamma_cur = gamma_next;
            g_cur = g_next;
            if delta <= CORRECTOR_TOL * scale {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(RayError::CorrectorStalled {
                node: n,
                tol: CORRECTOR_TOL,
                iters: CORRECTOR_MAX_ITERS,
            });
        }
        if !gamma_cur.is_finite() || !g_cur.is_finite() {
            return Err(RayError::NonFinite { node: n });
        }
        gamma[n] = gamma_cur;
        g[n] = g_cur;
    }

    let samples = (0..=n_steps)
        .map(|j| RaySample {
            xi: ray.node(j),
            gamma_hat: gamma[j],
            g: g[j],
        })
        .collect();
    Ok(RaySolution {
        samples,
        step: h,
        scheme: SchemeInfo {
            steps: n_steps,
            guard: ray.guard(),
            corrector_tol: CORRECTOR_TOL,
            quadratic_term_dropped: true,
            taylor_boot: opts.taylor_boot,
        },
    })
}

/// Borel coefficients of the reference solution and of its derivative, as
/// dense float vectors ready for Horner evaluation.
fn boot_series(order: usize) -> (Vec<f64>, Vec<f64>) {
    let gamma = ode_reference(order + 1).expect("order >= 1");
    let b = borel(&gamma).expect("gamma = O(a)");
    let coeffs: Vec<f64> = b.coeffs().iter().map(Rational::to_f64).collect();
    let dcoeffs: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, c)| c * n as f64)
        .collect();
    (coeffs, dcoeffs)
}

fn horner(coeffs: &[f64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

// ---------------------------------------------------------------------------
// Chen-iterated-integral oracle
// ---------------------------------------------------------------------------

/// Evaluate `g(xi)` through the iterated-integral solution of the specialized
/// equation: `g = sum_n g_n` with `g_0 = -gamma_hat/(3 xi + 1)` and
///
/// ```text
/// g_{n+1}(xi) = -1/(1+3xi) [ int_0^xi gamma_hat(xi-u) g_n(u) du
///                            + 3 int_0^xi gamma_hat'(xi-u) u g_n(u) du ].
/// ```
///
/// Each level is evaluated on Chebyshev collocation points of the segment
/// with Gauss-Legendre quadrature nested through barycentric interpolation of
/// the previous level; `gamma_hat` comes from the exact Borel series. The sum
/// is truncated once a level contributes less than `tol` (checked a
/// posteriori), or fails with `ChenNotConverged`.
pub fn chen_eval(xi: Complex64, depth: usize, tol: f64) -> Result<Complex64, RayError> {
    let r = xi.norm();
    if r == 0.0 {
        return Ok(Complex64::new(-1.0, 0.0));
    }
    if r > 0.30 {
        return Err(RayError::ChenOutOfRange(r));
    }
    let (bcoef, dcoef) = boot_series(80);
    let gamma_at = |z: Complex64| horner(&bcoef, z);
    let dgamma_at = |z: Complex64| horner(&dcoef, z);

    const M: usize = 40; // Chebyshev-Lobatto panels on [0, 1]
    const GL: usize = 24;
    let (gl_nodes, gl_weights) = gauss_legendre(GL);
    let t: Vec<f64> = (0..=M)
        .map(|i| 0.5 * (1.0 - (std::f64::consts::PI * i as f64 / M as f64).cos()))
        .collect();
    let bw: Vec<f64> = (0..=M)
        .map(|i| {
            let w = if i == 0 || i == M { 0.5 } else { 1.0 };
            if i % 2 == 0 {
                w
            } else {
                -w
            }
        })
        .collect();

    let z_at = |tt: f64| xi * tt;
    let interp = |values: &[Complex64], tt: f64| -> Complex64 {
        // barycentric on Chebyshev-Lobatto points
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = 0.0;
        for i in 0..=M {
            let d = tt - t[i];
            if d.abs() < 1e-15 {
                return values[i];
            }
            let w = bw[i] / d;
            num += w * values[i];
            den += w;
        }
        num / den
    };

    let mut level: Vec<Complex64> = t
        .iter()
        .map(|&tt| {
            let z = z_at(tt);
            -gamma_at(z) / (1.0 + 3.0 * z)
        })
        .collect();
    let mut total_end = level[M];
    let mut small_streak = 0usize;
    for _ in 1..=depth {
        let prev = level.clone();
        for (i, &ti) in t.iter().enumerate() {
            if ti == 0.0 {
                level[i] = Complex64::new(0.0, 0.0);
                continue;
            }
            let zi = z_at(ti);
            // int_0^{z_i} F(u) du = xi * int_0^{t_i} F(u(t)) dt
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &xk) in gl_nodes.iter().enumerate() {
                // map [-1, 1] -> [0, t_i]
                let tt = 0.5 * ti * (xk + 1.0);
                let u = z_at(tt);
                let gn = interp(&prev, tt);
                let f = gamma_at(zi - u) * gn + 3.0 * dgamma_at(zi - u) * u * gn;
                acc += gl_weights[k] * f;
            }
            acc *= 0.5 * ti; // Jacobian of the map onto [-1, 1]
            acc *= xi;
            level[i] = -acc / (1.0 + 3.0 * zi);
        }
        total_end += level[M];
        let inc = level[M].norm();
        if inc <= tol * (1.0 + total_end.norm()) {
            small_streak += 1;
            if small_streak >= 2 {
                return Ok(total_end);
            }
        } else {
            small_streak = 0;
        }
    }
    Err(RayError::ChenNotConverged { xi, depth })
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration on the
/// Legendre recurrence.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

// ---------------------------------------------------------------------------
// Refinement studies
// ---------------------------------------------------------------------------

/// One refinement pair: solutions at `coarse` and `fine = 2 * coarse` steps
/// compared on the shared nodes.
#[derive(Clone, PartialEq, Debug)]
pub struct RefinementRow {
    pub coarse: usize,
    pub fine: usize,
    pub sup_diff: f64,
}

/// Sup-norm differences between consecutive resolutions and the empirical
/// convergence orders `log2(d_i / d_{i+1})`.
#[derive(Clone, PartialEq, Debug)]
pub struct RefinementTable {
    pub rows: Vec<RefinementRow>,
    pub empirical_orders: Vec<f64>,
}

/// Run [`solve_ray`] at each resolution (each double the previous, at least
/// three) and tabulate sup-norm differences of `gamma_hat` on shared nodes.
pub fn refinement_study(ray: &Ray, steps_list: &[usize]) -> Result<RefinementTable, RayError> {
    validate_steps_list(steps_list)?;
    let solutions: Vec<RaySolution> = steps_list
        .iter()
        .map(|&s| solve_ray(&ray.with_steps(s)?))
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    for w in solutions.windows(2) {
        let (coarse, fine) = (&w[0], &w[1]);
        let ratio = (fine.samples.len() - 1) / (coarse.samples.len() - 1);
        let mut sup = 0.0f64;
        for (j, s) in coarse.samples.iter().enumerate() {
            let d = (s.gamma_hat - fine.samples[j * ratio].gamma_hat).norm();
            sup = sup.max(d);
        }
        rows.push(RefinementRow {
            coarse: coarse.samples.len() - 1,
            fine: fine.samples.len() - 1,
            sup_diff: sup,
        });
    }
    let empirical_orders = rows
        .windows(2)
        .map(|w| (w[0].sup_diff / w[1].sup_diff).log2())
        .collect();
    Ok(RefinementTable {
        rows,
        empirical_orders,
    })
}

/// Manufactured-solution study: the linear Volterra problem
/// `u(xi) = 1 + int_0^xi u(eta) deta` (exact solution `e^xi`) marched with
/// the same weights and predictor-corrector closure. Returns the sup errors
/// against the closed form and the empirical orders between resolutions.
pub fn linear_kernel_study(
    endpoint: Complex64,
    steps_list: &[usize],
) -> Result<(Vec<f64>, Vec<f64>), RayError> {
    validate_steps_list(steps_list)?;
    let mut errors = Vec::new();
    for &steps in steps_list {
        if steps < 2 || steps % 2 != 0 {
            return Err(RayError::OddStepCount(steps));
        }
        let h = endpoint / steps as f64;
        let mut u = vec![Complex64::new(0.0, 0.0); steps + 1];
        u[0] = Complex64::new(1.0, 0.0);
        for n in 1..=steps {
            let mut mid = Complex64::new(0.0, 0.0);
            for (j, uj) in u.iter().enumerate().take(n) {
                mid += quad_weight(n, j) * uj;
            }
            let wn = quad_weight(n, n);
            let mut cur = if n >= 2 { 2.0 * u[n - 1] - u[n - 2] } else { u[0] };
            let mut converged = false;
            for _ in 0..CORRECTOR_MAX_ITERS {
                let next = u[0] + h * (mid + wn * cur);
                let delta = (next - cur).norm();
                cur = next;
                if delta <= CORRECTOR_TOL * (1.0 + cur.norm()) {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(RayError::CorrectorStalled {
                    node: n,
                    tol: CORRECTOR_TOL,
                    iters: CORRECTOR_MAX_ITERS,
                });
            }
            u[n] = cur;
        }
        let mut sup = 0.0f64;
        for (j, uj) in u.iter().enumerate() {
            let exact = (h * j as f64).exp();
            sup = sup.max((uj - exact).norm());
        }
        errors.push(sup);
    }
    let orders = errors
        .windows(2)
        .map(|w| (w[0] / w[1]).log2())
        .collect();
    Ok((errors, orders))
}

fn validate_steps_list(steps_list: &[usize]) -> Result<(), RayError> {
    if steps_list.len() < 3 {
        return Err(RayError::BadStepsList);
    }
    for w in steps_list.windows(2) {
        if w[1] != 2 * w[0] {
            return Err(RayError::BadStepsList);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_reference_values() {
        assert!((zeta_odd_f64(3) - 1.202_056_903_159_594_3).abs() < 1e-14);
        assert!((zeta_odd_f64(5) - 1.036_927_755_143_37).abs() < 1e-14);
        assert!((zeta_odd_f64(7) - 1.008_349_277_381_922_8).abs() < 1e-14);
        // even index works too (used nowhere exact, handy for cross-checks)
        assert!((zeta_odd_f64(2) - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-13);
    }

    #[test]
    fn ray_validation() {
        assert!(matches!(
            Ray::new(Complex64::new(1.0, 1.0), 101),
            Err(RayError::OddStepCount(101))
        ));
        // real ray through -1/3 refused
        assert!(matches!(
            Ray::new(Complex64::new(-1.0, 0.0), 30),
            Err(RayError::KernelPole { .. }) | Err(RayError::SingularityOnRay { .. })
        ));
        // real positive ray hitting +1/3
        assert!(Ray::new(Complex64::new(1.0, 0.0), 30).is_err());
        // real positive ray that stays clear of k/3 nodes... 0.3 endpoint with
        // few nodes is fine
        assert!(Ray::new(Complex64::new(0.25, 0.0), 10).is_ok());
        // complex rays clear of -1/3 are fine
        assert!(Ray::new(Complex64::new(40.0, 35.0), 100).is_ok());
    }

    #[test]
    fn origin_data_exact() {
        let ray = Ray::new(Complex64::new(0.5, 0.5), 64).unwrap();
        let sol = solve_ray(&ray).unwrap();
        assert_eq!(sol.samples[0].gamma_hat, Complex64::new(1.0, 0.0));
        assert_eq!(sol.samples[0].g, Complex64::new(-1.0, 0.0));
        // gamma_hat'(0) = 2 g(0) = -2 by construction, independent of step
        let ray2 = Ray::new(Complex64::new(0.5, 0.5), 2048).unwrap();
        let sol2 = solve_ray(&ray2).unwrap();
        assert_eq!(sol2.samples[0].g * 2.0, Complex64::new(-2.0, 0.0));
    }

    #[test]
    fn march_matches_exact_series_near_origin() {
        // march to 0.02 with h = 1e-3 and compare against the order-30 series
        let ray = Ray::new(Complex64::new(0.02, 0.0), 20).unwrap();
        let sol = solve_ray(&ray).unwrap();
        let (bcoef, _) = boot_series(30);
        for s in &sol.samples {
            let exact = horner(&bcoef, s.xi);
            assert!(
                (s.gamma_hat - exact).norm() <= 1e-7 * exact.norm(),
                "mismatch at {}: {} vs {}",
                s.xi,
                s.gamma_hat,
                exact
            );
        }
    }

    #[test]
    fn conjugate_ray_conjugates_solution() {
        let ray = Ray::new(Complex64::new(2.0, 1.5), 128).unwrap();
        let conj = Ray::new(Complex64::new(2.0, -1.5), 128).unwrap();
        let a = solve_ray(&ray).unwrap();
        let b = solve_ray(&conj).unwrap();
        for (sa, sb) in a.samples.iter().zip(&b.samples) {
            assert!((sa.gamma_hat.conj() - sb.gamma_hat).norm() < 1e-12);
            assert!((sa.g.conj() - sb.g).norm() < 1e-12);
        }
    }

    #[test]
    fn march_is_deterministic() {
        let ray = Ray::new(Complex64::new(3.0, 2.0), 256).unwrap();
        let a = solve_ray(&ray).unwrap();
        let b = solve_ray(&ray).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn taylor_boot_agrees_with_plain_march() {
        let ray = Ray::new(Complex64::new(0.1, 0.1), 100).unwrap();
        let plain = solve_ray(&ray).unwrap();
        let booted = solve_ray_opts(
            &ray,
            &RayOptions {
                taylor_boot: Some(10),
            },
        )
        .unwrap();
        for (a, b) in plain.samples.iter().zip(&booted.samples) {
            // the plain march carries only its O(h^3) startup error
            assert!((a.gamma_hat - b.gamma_hat).norm() < 1e-6);
        }
        // bootstrap outside the disk is refused
        let far = Ray::new(Complex64::new(30.0, 20.0), 100).unwrap();
        assert!(matches!(
            solve_ray_opts(
                &far,
                &RayOptions {
                    taylor_boot: Some(10)
                }
            ),
            Err(RayError::BootstrapTooFar { .. })
        ));
    }

    #[test]
    fn chen_matches_march() {
        // |xi| <= 0.2, both routes converged on their own criteria
        for xi in [
            Complex64::new(0.1, 0.1),
            Complex64::new(0.0, 0.18),
            Complex64::new(0.15, 0.0),
            Complex64::new(-0.1, 0.12),
        ] {
            let chen = chen_eval(xi, 40, 1e-9).unwrap();
            let ray = Ray::new(xi, 400).unwrap();
            let sol = solve_ray(&ray).unwrap();
            let g_end = sol.samples.last().unwrap().g;
            assert!(
                (chen - g_end).norm() < 1e-6,
                "chen {} vs march {} at {}",
                chen,
                g_end,
                xi
            );
        }
    }

    #[test]
    fn chen_at_origin_and_depth_zero_shape() {
        assert_eq!(
            chen_eval(Complex64::new(0.0, 0.0), 0, 1e-9).unwrap(),
            Complex64::new(-1.0, 0.0)
        );
        // the depth cap triggers the non-convergence error
        assert!(matches!(
            chen_eval(Complex64::new(0.2, 0.0), 1, 1e-14),
            Err(RayError::ChenNotConverged { .. })
        ));
        assert!(matches!(
            chen_eval(Complex64::new(0.5, 0.0), 10, 1e-9),
            Err(RayError::ChenOutOfRange(_))
        ));
    }

    #[test]
    fn linear_kernel_fourth_order() {
        let (errors, orders) =
            linear_kernel_study(Complex64::new(1.0, 0.7), &[64, 128, 256]).unwrap();
        assert!(errors[0] > errors[1] && errors[1] > errors[2]);
        for o in orders {
            assert!(o >= 2.0, "empirical order {o} below 2");
        }
    }

    #[test]
    fn refinement_on_short_ray() {
        let ray = Ray::new(Complex64::new(2.0, 2.0), 64).unwrap();
        let table = refinement_study(&ray, &[64, 128, 256]).unwrap();
        assert_eq!(table.rows.len(), 2);
        assert!(table.rows[0].sup_diff > table.rows[1].sup_diff);
        assert!(validate_steps_list(&[100, 200, 300]).is_err());
        assert!(validate_steps_list(&[100, 200]).is_err());
    }

    #[test]
    fn csv_shape() {
        let ray = Ray::new(Complex64::new(1.0, 1.0), 60).unwrap();
        let sol = solve_ray(&ray).unwrap();
        let csv = sol.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        let data_rows = lines.iter().filter(|l| !l.starts_with('#')).count() - 1;
        assert_eq!(data_rows, 61);
        assert!(lines
            .iter()
            .any(|l| l.starts_with("index,arclength,re_xi,im_xi,re_gamma")));
        assert!(lines[0].contains("quadratic_term_dropped=true"));
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (nodes, weights) = gauss_legendre(8);
        // integral of x^6 over [-1,1] = 2/7
        let v: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(x, w)| w * x.powi(6))
            .sum();
        assert!((v - 2.0 / 7.0).abs() < 1e-13);
    }
}
