//! Explicit state tuples realizing a requested invariant.
//!
//! Two constructions are provided. [`synth_circular`] is exact: it multiplies
//! (entrywise) the circulant Gram matrix of the qubit family
//! `sinφ|0⟩ + ξ_n^k cosφ|1⟩` with a uniform-overlap Gram matrix that scales the
//! invariant by `t`, then factorizes the result. [`synth_qubit`] stays in
//! dimension 2 and searches the phase-perturbed family
//! `sinφ|0⟩ + e^{iγ_k} cosφ|1⟩` with a damped Gauss–Newton iteration.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gram::{factorize_gram, gram_from_tuple, hadamard, GramMatrix};
use crate::range::{membership, CanonicalParams, RegionSpec};
use crate::state::{bargmann_pure, BargmannValue, PureTuple, StateVector};
use crate::tolerance::Tolerances;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "circular-gram")]
    CircularGram,
    #[serde(rename = "qubit-optimizer")]
    QubitOptimizer,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::CircularGram => "circular-gram",
            Method::QubitOptimizer => "qubit-optimizer",
        }
    }

    /// Residual the method promises.
    pub fn guarantee(&self) -> f64 {
        match self {
            Method::CircularGram => Tolerances::DEFAULT.synth_circular,
            Method::QubitOptimizer => Tolerances::DEFAULT.synth_qubit,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SynthesisResult {
    pub tuple: PureTuple,
    pub achieved: BargmannValue,
    pub residual: f64,
    pub method: Method,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub max_iterations: usize,
    pub restarts: usize,
    /// Iteration stops once a step moves the parameters by less than this.
    pub step_tolerance: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            max_iterations: 200,
            restarts: 20,
            step_tolerance: 1e-14,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be >= 1".into()));
        }
        if self.restarts == 0 {
            return Err(Error::Config("restarts must be >= 1".into()));
        }
        if !(self.step_tolerance >= 0.0) {
            return Err(Error::Config(format!("step tolerance {}", self.step_tolerance)));
        }
        Ok(())
    }
}

/// `|bargmann_pure(tuple) − z|`.
pub fn verify_realization(tuple: &PureTuple, z: C64) -> f64 {
    (bargmann_pure(tuple).value() - z).norm()
}

fn xi(n: usize) -> C64 {
    C64::from_polar(1.0, TAU / n as f64)
}

fn qubit(phi: f64, phase: C64) -> StateVector {
    // unit norm by construction
    StateVector::normalized(DVector::from_vec(vec![C64::new(phi.sin(), 0.0), phase * phi.cos()]))
        .expect("sin² + cos² = 1")
}

/// `|ψ_k⟩ = sinφ|0⟩ + ξ_n^k cosφ|1⟩` for `k = 1..n`.
pub fn obg_tuple(n: usize, phi: f64) -> Result<PureTuple> {
    if n < 3 {
        return Err(Error::OutOfDomain {
            name: "n",
            value: n as f64,
            domain: "n >= 3",
        });
    }
    if !(0.0..=FRAC_PI_2).contains(&phi) {
        return Err(Error::OutOfDomain {
            name: "phi",
            value: phi,
            domain: "[0, pi/2]",
        });
    }
    let w = xi(n);
    PureTuple::new((1..=n).map(|k| qubit(phi, w.powu(k as u32))).collect())
}

/// Unit diagonal, `s` everywhere else. Eigenvalues are `1 − s` and `1 + (n − 1)s`.
pub fn uniform_overlap_gram(n: usize, s: f64) -> Result<GramMatrix> {
    if n < 2 {
        return Err(Error::OutOfDomain {
            name: "n",
            value: n as f64,
            domain: "n >= 2",
        });
    }
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::OutOfDomain {
            name: "s",
            value: s,
            domain: "[0, 1]",
        });
    }
    let entries = DMatrix::from_fn(n, n, |j, k| {
        if j == k {
            C64::new(1.0, 0.0)
        } else {
            C64::new(s, 0.0)
        }
    });
    GramMatrix::new(entries)
}

fn canonical_params(z: C64, n: usize) -> Result<CanonicalParams> {
    let verdict = membership(z, RegionSpec { n, d: 2 }, Tolerances::DEFAULT.membership)?;
    verdict.params.ok_or(Error::OutsideRegion {
        re: z.re,
        im: z.im,
        modulus: z.norm(),
        radius: verdict.boundary_radius,
    })
}

/// Circulant Gram matrix whose superdiagonal product is `t·[p + (1 − p)ξ_n]^n`.
pub fn circular_gram(n: usize, params: CanonicalParams) -> Result<GramMatrix> {
    let phi = params.p.clamp(0.0, 1.0).sqrt().asin();
    let obg = gram_from_tuple(&obg_tuple(n, phi)?);
    let scale = uniform_overlap_gram(n, params.t.powf(1.0 / n as f64))?;
    hadamard(&obg, &scale)
}

/// Exact realization through a circulant Gram matrix.
pub fn synth_circular(z: C64, n: usize) -> Result<SynthesisResult> {
    if n < 3 {
        return Err(Error::OutOfDomain {
            name: "n",
            value: n as f64,
            domain: "n >= 3",
        });
    }
    let params = canonical_params(z, n)?;
    let h = circular_gram(n, params)?;
    let tuple = factorize_gram(&h)?;
    finish(tuple, z, Method::CircularGram)
}

fn finish(tuple: PureTuple, z: C64, method: Method) -> Result<SynthesisResult> {
    let achieved = bargmann_pure(&tuple);
    let residual = (achieved.value() - z).norm();
    if !(residual <= method.guarantee()) {
        return Err(Error::ResidualTooLarge {
            residual,
            bound: method.guarantee(),
        });
    }
    Ok(SynthesisResult {
        tuple,
        achieved,
        residual,
        method,
    })
}

/// Invariant of the qubit family and its Jacobian with respect to
/// `(φ, γ_1, …, γ_n)`.
struct QubitFamily {
    n: usize,
}

impl QubitFamily {
    fn factors(&self, x: &[f64]) -> Vec<C64> {
        let (a, b) = (x[0].sin().powi(2), x[0].cos().powi(2));
        let gamma = &x[1..];
        (0..self.n)
            .map(|k| a + b * C64::from_polar(1.0, gamma[(k + 1) % self.n] - gamma[k]))
            .collect()
    }

    fn value(&self, x: &[f64]) -> C64 {
        self.factors(x).into_iter().product()
    }

    /// Returns the invariant and `∂P/∂x_i` for every parameter.
    fn value_and_gradient(&self, x: &[f64]) -> (C64, Vec<C64>) {
        let n = self.n;
        let f = self.factors(x);
        let b = x[0].cos().powi(2);
        let sin2 = (2.0 * x[0]).sin();
        let gamma = &x[1..];

        // products of every factor except the k-th
        let mut prefix = vec![C64::new(1.0, 0.0); n + 1];
        for k in 0..n {
            prefix[k + 1] = prefix[k] * f[k];
        }
        let mut suffix = vec![C64::new(1.0, 0.0); n + 1];
        for k in (0..n).rev() {
            suffix[k] = suffix[k + 1] * f[k];
        }
        let others: Vec<C64> = (0..n).map(|k| prefix[k] * suffix[k + 1]).collect();

        let mut grad = vec![C64::new(0.0, 0.0); n + 1];
        for k in 0..n {
            let e = C64::from_polar(1.0, gamma[(k + 1) % n] - gamma[k]);
            grad[0] += others[k] * sin2 * (C64::new(1.0, 0.0) - e);
            // f_k depends on γ_{k+1} − γ_k
            let d_delta = others[k] * C64::new(0.0, b) * e;
            grad[1 + (k + 1) % n] += d_delta;
            grad[1 + k] -= d_delta;
        }
        (prefix[n], grad)
    }

    fn tuple(&self, x: &[f64]) -> PureTuple {
        PureTuple::new(
            x[1..]
                .iter()
                .map(|&g| qubit(x[0], C64::from_polar(1.0, g)))
                .collect(),
        )
        .expect("equal dimensions")
    }
}

/// Levenberg–Marquardt on the two real residual components; returns the final
/// parameters and residual modulus.
fn solve_from(
    family: &QubitFamily,
    z: C64,
    mut x: Vec<f64>,
    cfg: &OptimizerConfig,
    target: f64,
) -> (Vec<f64>, f64) {
    let mut residual = family.value(&x) - z;
    let mut cost = residual.norm_sqr();
    let mut mu = 1e-3;
    for _ in 0..cfg.max_iterations {
        if cost.sqrt() <= target {
            break;
        }
        let (_, grad) = family.value_and_gradient(&x);
        // J is 2 × m with rows (Re, Im); solve (JJᵀ + μI) y = r, step = −Jᵀy
        let (mut a11, mut a12, mut a22) = (0.0, 0.0, 0.0);
        for g in &grad {
            a11 += g.re * g.re;
            a12 += g.re * g.im;
            a22 += g.im * g.im;
        }
        let mut accepted = false;
        while mu < 1e12 {
            let (m11, m22) = (a11 + mu, a22 + mu);
            let det = m11 * m22 - a12 * a12;
            let y1 = (m22 * residual.re - a12 * residual.im) / det;
            let y2 = (m11 * residual.im - a12 * residual.re) / det;
            let step: Vec<f64> = grad.iter().map(|g| -(g.re * y1 + g.im * y2)).collect();
            let trial: Vec<f64> = x.iter().zip(&step).map(|(a, s)| a + s).collect();
            let trial_residual = family.value(&trial) - z;
            let trial_cost = trial_residual.norm_sqr();
            if trial_cost < cost {
                let step_norm = step.iter().map(|s| s * s).sum::<f64>().sqrt();
                x = trial;
                residual = trial_residual;
                cost = trial_cost;
                mu = (mu / 3.0).max(1e-15);
                accepted = step_norm >= cfg.step_tolerance;
                break;
            }
            mu *= 4.0;
        }
        if !accepted {
            break;
        }
    }
    (x, cost.sqrt())
}

/// Realization by `n` qubit states, found numerically.
///
/// The first attempt starts from the boundary configuration on the ray of
/// `Arg(z)`; the remaining `cfg.restarts` attempts start from random points of
/// the family.
pub fn synth_qubit(z: C64, n: usize, cfg: &OptimizerConfig) -> Result<SynthesisResult> {
    cfg.validate()?;
    if n < 3 {
        return Err(Error::OutOfDomain {
            name: "n",
            value: n as f64,
            domain: "n >= 3",
        });
    }
    let params = canonical_params(z, n)?;
    let family = QubitFamily { n };
    // aim well below the guarantee so the reported residual has headroom
    let target = 1e-13;

    if params.t == 0.0 {
        // φ = π/4 and one phase jump of π make the first factor vanish
        let mut x = vec![FRAC_PI_4, 0.0];
        x.extend(std::iter::repeat_n(PI, n - 1));
        return finish(family.tuple(&x), z, Method::QubitOptimizer);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let phi0 = params.p.sqrt().asin();
    let mut start: Vec<f64> = std::iter::once(phi0)
        .chain((1..=n).map(|k| TAU * k as f64 / n as f64))
        .collect();
    let mut best: Option<(Vec<f64>, f64)> = None;
    for attempt in 0..=cfg.restarts {
        if attempt > 0 {
            start = std::iter::once(rng.gen_range(0.0..FRAC_PI_2))
                .chain((0..n).map(|_| rng.gen_range(0.0..TAU)))
                .collect();
        }
        let (x, res) = solve_from(&family, z, start.clone(), cfg, target);
        if best.as_ref().is_none_or(|(_, b)| res < *b) {
            best = Some((x, res));
        }
        if res <= target {
            break;
        }
    }
    let (x, res) = best.expect("at least one attempt");
    if !(res < Method::QubitOptimizer.guarantee()) {
        return Err(Error::NoConvergence {
            restarts: cfg.restarts,
            best_residual: res,
        });
    }
    finish(family.tuple(&x), z, Method::QubitOptimizer)
}
