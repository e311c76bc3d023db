//! Seeded verification harness.
//!
//! Every check draws its randomness from a per-trial generator derived from
//! `(seed, check stream, trial index)`, so trials can run in any order or in
//! parallel and still produce the same report. The JSON report deliberately
//! omits wall-clock time; identical configurations give byte-identical reports.

use std::f64::consts::TAU;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gram::{circulant_deviation, convex_combine, gram_from_tuple, hadamard};
use crate::range::{
    boundary_n4, boundary_point_parametric, boundary_radius, membership, region_n3_inequality,
    Classification, RegionSpec,
};
use crate::state::{bargmann_mixed, bargmann_pure, principal_arg, random_mixed_tuple, random_pure_tuple, PureTuple};
use crate::symmetrize::{symmetrize, symmetrized_invariant};
use crate::synthesis::{synth_circular, synth_qubit, OptimizerConfig};
use crate::tolerance::Tolerances;
use crate::C64;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: usize,
    /// Inclusive.
    pub n_range: (usize, usize),
    /// Inclusive.
    pub d_range: (usize, usize),
    pub tolerances: Tolerances,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 42,
            samples: 10_000,
            n_range: (3, 5),
            d_range: (2, 4),
            tolerances: Tolerances::DEFAULT,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        let (n0, n1) = self.n_range;
        let (d0, d1) = self.d_range;
        if n0 > n1 || d0 > d1 {
            return Err(Error::Config("empty n or d range".into()));
        }
        if n0 < 3 {
            return Err(Error::Config(format!("n range must start at 3 or above (got {n0})")));
        }
        if d0 < 2 {
            return Err(Error::Config(format!("d range must start at 2 or above (got {d0})")));
        }
        let t = &self.tolerances;
        let all = [
            t.norm, t.hermitian, t.trace, t.psd, t.unitary, t.circulant, t.rank, t.membership,
            t.synth_circular, t.synth_qubit, t.closed_form, t.parametric, t.symmetrize, t.amgm_slack,
            t.grid_band,
        ];
        if let Some(bad) = all.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidTolerance(*bad));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub trials: u64,
    pub failures: u64,
    /// Largest observed value of the check's deviation measure.
    pub worst_deviation: f64,
    /// Threshold the deviation was compared against.
    pub tolerance: f64,
}

impl CheckRecord {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub seed: u64,
    pub samples: usize,
    pub n_range: [usize; 2],
    pub d_range: [usize; 2],
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
    #[serde(skip)]
    pub runtime: Duration,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    /// One line per check plus a verdict line.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "[{}] {:<24} trials={:<8} failures={:<6} worst={:.3e} tol={:.1e}\n",
                if c.passed() { "PASS" } else { "FAIL" },
                c.name,
                c.trials,
                c.failures,
                c.worst_deviation,
                c.tolerance
            ));
        }
        out.push_str(&format!(
            "overall: {} ({:.2}s)\n",
            if self.pass { "PASS" } else { "FAIL" },
            self.runtime.as_secs_f64()
        ));
        out
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Generator for one trial of one check.
pub fn trial_rng(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    let key = splitmix64(splitmix64(seed ^ splitmix64(stream)) ^ index);
    ChaCha8Rng::seed_from_u64(key)
}

/// Outcome of one trial: `(failed, deviation)`.
type Outcome = (bool, f64);

fn run_trials<F>(name: &str, count: usize, tolerance: f64, trial: F) -> CheckRecord
where
    F: Fn(u64) -> Outcome + Sync + Send,
{
    let outcomes: Vec<Outcome> = (0..count as u64).into_par_iter().map(trial).collect();
    summarize(name, &outcomes, tolerance)
}

fn summarize(name: &str, outcomes: &[Outcome], tolerance: f64) -> CheckRecord {
    let mut failures = 0;
    let mut worst = f64::NEG_INFINITY;
    for &(failed, dev) in outcomes {
        if failed || dev.is_nan() {
            failures += 1;
        }
        if dev > worst {
            worst = dev;
        }
    }
    CheckRecord {
        name: name.to_string(),
        trials: outcomes.len() as u64,
        failures,
        worst_deviation: if worst.is_finite() { worst } else { 0.0 },
        tolerance,
    }
}

// stream identifiers, one per check
const S_PURE: u64 = 1;
const S_MIXED: u64 = 2;
const S_SYM: u64 = 5;
const S_GRAM: u64 = 6;
const S_POINTS: u64 = 7;
const S_CIRC: u64 = 8;
const S_QUBIT: u64 = 9;

/// The checks, parameterized by sample counts so callers can scale them.
#[derive(Debug, Clone)]
pub struct Harness {
    pub seed: u64,
    pub tolerances: Tolerances,
    /// `(n, d)` combinations cycled through by random-tuple checks.
    pub grid: Vec<(usize, usize)>,
}

impl Harness {
    pub fn new(seed: u64, n_range: (usize, usize), d_range: (usize, usize), tolerances: Tolerances) -> Self {
        let grid = (n_range.0..=n_range.1)
            .flat_map(|n| (d_range.0..=d_range.1).map(move |d| (n, d)))
            .collect();
        Harness {
            seed,
            tolerances,
            grid,
        }
    }

    fn cell(&self, index: u64) -> (usize, usize) {
        self.grid[index as usize % self.grid.len()]
    }

    fn ns(&self) -> Vec<usize> {
        let mut ns: Vec<usize> = self.grid.iter().map(|c| c.0).collect();
        ns.dedup();
        ns
    }

    fn rng(&self, stream: u64, index: u64) -> ChaCha8Rng {
        trial_rng(self.seed, stream, index)
    }

    /// `t·[p + (1 − p)ξ_n]^n` for uniform `t, p`.
    fn random_region_point<R: Rng>(n: usize, rng: &mut R) -> C64 {
        let t: f64 = rng.gen();
        let p: f64 = rng.gen();
        t * boundary_point_parametric(n, p).expect("n >= 3, p in [0, 1]")
    }

    fn containment(&self, z: C64, n: usize, d: usize) -> Outcome {
        match membership(z, RegionSpec { n, d }, self.tolerances.membership) {
            Ok(v) => (
                v.classification == Classification::Outside,
                z.norm() - v.boundary_radius,
            ),
            Err(_) => (true, f64::NAN),
        }
    }

    /// Invariants of Haar-random pure tuples never fall outside the range.
    /// Deviation: `|z| − r(Arg z)`.
    pub fn containment_pure(&self, count: usize) -> CheckRecord {
        run_trials("containment_pure", count, self.tolerances.membership, |i| {
            let (n, d) = self.cell(i);
            let mut rng = self.rng(S_PURE, i);
            let t = random_pure_tuple(n, d, &mut rng).expect("valid sizes");
            self.containment(bargmann_pure(&t).value(), n, d)
        })
    }

    /// Same for Ginibre-random mixed tuples.
    pub fn containment_mixed(&self, count: usize) -> CheckRecord {
        run_trials("containment_mixed", count, self.tolerances.membership, |i| {
            let (n, d) = self.cell(i);
            let mut rng = self.rng(S_MIXED, i);
            let t = random_mixed_tuple(n, d, &mut rng).expect("valid sizes");
            self.containment(bargmann_mixed(&t).value(), n, d)
        })
    }

    /// The n = 3 inequality against polar membership on a `side × side` grid
    /// over the square `[−1.05, 1.05]²`, restricted to the disk `|z| ≤ 1.05`.
    /// Points within the band of the boundary are not compared. Deviation:
    /// distance to the boundary of a disagreeing point.
    pub fn n3_region_grid(&self, side: usize) -> CheckRecord {
        let extent = 1.05;
        let band = self.tolerances.grid_band;
        let tol = self.tolerances.membership;
        let outcomes: Vec<Outcome> = (0..side * side)
            .into_par_iter()
            .filter_map(|idx| {
                let (a, b) = (idx / side, idx % side);
                let coord = |k: usize| -extent + 2.0 * extent * k as f64 / (side - 1) as f64;
                let z = C64::new(coord(a), coord(b));
                if z.norm() > extent {
                    return None;
                }
                let rho = boundary_radius(3, principal_arg(z)).expect("n = 3");
                let distance = (z.norm() - rho).abs();
                if distance <= band {
                    return None;
                }
                let polar = membership(z, RegionSpec { n: 3, d: 2 }, tol)
                    .map(|v| v.classification.is_member())
                    .unwrap_or(false);
                let agree = polar == region_n3_inequality(z);
                Some((!agree, if agree { 0.0 } else { distance }))
            })
            .collect();
        summarize("n3_region_grid", &outcomes, band)
    }

    /// The n = 4 closed-form boundary against the polar curve at `count`
    /// angles. Deviation: distance between the two points.
    pub fn n4_boundary(&self, count: usize) -> CheckRecord {
        let tol = self.tolerances.closed_form;
        run_trials("n4_boundary", count, tol, |i| {
            let theta = TAU * i as f64 / count as f64;
            let polar = C64::from_polar(boundary_radius(4, theta).expect("n = 4"), theta);
            let dev = (boundary_n4(theta) - polar).norm();
            (!(dev <= tol), dev)
        })
    }

    /// Parametric boundary points lie on the polar curve, for every n in
    /// `ns` and `count` values of `p` spaced over `[0, 1]`. Deviation:
    /// `||point| − r(Arg point)|`.
    pub fn parametric_polar(&self, ns: &[usize], count: usize) -> CheckRecord {
        let tol = self.tolerances.parametric;
        let total = ns.len() * count;
        run_trials("parametric_polar", total, tol, |i| {
            let n = ns[i as usize / count];
            let k = i as usize % count;
            let p = if count > 1 { k as f64 / (count - 1) as f64 } else { 0.5 };
            let point = boundary_point_parametric(n, p).expect("valid p");
            let rho = boundary_radius(n, principal_arg(point)).expect("n >= 3");
            let dev = (point.norm() - rho).abs();
            (!(dev <= tol), dev)
        })
    }

    /// Symmetrization of random pure tuples with invariant modulus above
    /// `1e-6`. Produces four records: argument preserved, modulus not
    /// decreased, output Gram circulant, output invariant equal to
    /// `(mean r_j)^n e^{iθ}`.
    pub fn symmetrization(&self, count: usize) -> Vec<CheckRecord> {
        let tol = self.tolerances;
        let rows: Vec<[Outcome; 4]> = (0..count as u64)
            .into_par_iter()
            .map(|i| {
                let (n, d) = self.cell(i);
                let mut rng = self.rng(S_SYM, i);
                let tuple = loop {
                    let t = random_pure_tuple(n, d, &mut rng).expect("valid sizes");
                    if bargmann_pure(&t).modulus() > 1e-6 {
                        break t;
                    }
                };
                symmetrization_trial(&tuple, &tol)
            })
            .collect();
        let names = [
            ("symmetrize_argument", tol.symmetrize),
            ("symmetrize_modulus", tol.amgm_slack),
            ("symmetrize_circulant", tol.circulant),
            ("symmetrize_invariant", tol.symmetrize),
        ];
        names
            .iter()
            .enumerate()
            .map(|(k, (name, t))| {
                let column: Vec<Outcome> = rows.iter().map(|r| r[k]).collect();
                summarize(name, &column, *t)
            })
            .collect()
    }

    fn random_gram_pair(&self, i: u64) -> (crate::gram::GramMatrix, crate::gram::GramMatrix, f64) {
        let (n, d) = self.cell(i);
        let mut rng = self.rng(S_GRAM, i);
        let d2 = self.grid[rng.gen_range(0..self.grid.len())].1;
        let a = gram_from_tuple(&random_pure_tuple(n, d, &mut rng).expect("valid sizes"));
        let b = gram_from_tuple(&random_pure_tuple(n, d2, &mut rng).expect("valid sizes"));
        (a, b, rng.gen())
    }

    /// Hadamard products of random Gram pairs stay PSD. Deviation: `−λ_min`.
    pub fn hadamard_psd(&self, count: usize) -> CheckRecord {
        let tol = self.tolerances.psd;
        run_trials("hadamard_psd", count, tol, |i| {
            let (a, b, _) = self.random_gram_pair(i);
            let min = hadamard(&a, &b).expect("equal sizes").min_eigenvalue();
            (min < -tol, -min)
        })
    }

    /// Convex combinations of random Gram pairs stay PSD. Deviation: `−λ_min`.
    pub fn convex_psd(&self, count: usize) -> CheckRecord {
        let tol = self.tolerances.psd;
        run_trials("convex_psd", count, tol, |i| {
            let (a, b, w) = self.random_gram_pair(i);
            let min = convex_combine(&[(w, a), (1.0 - w, b)])
                .expect("valid weights")
                .min_eigenvalue();
            (min < -tol, -min)
        })
    }

    fn point_pair(&self, i: u64) -> (usize, C64, C64) {
        let ns = self.ns();
        let mut rng = self.rng(S_POINTS, i);
        let n = ns[i as usize % ns.len()];
        let a = Self::random_region_point(n, &mut rng);
        let b = Self::random_region_point(n, &mut rng);
        (n, a, b)
    }

    /// Products of two points of the range stay in the range.
    pub fn product_inside(&self, count: usize) -> CheckRecord {
        run_trials("product_inside", count, self.tolerances.membership, |i| {
            let (n, a, b) = self.point_pair(i);
            self.containment(a * b, n, 2)
        })
    }

    /// Midpoints of two points of the range stay in the range.
    pub fn midpoint_inside(&self, count: usize) -> CheckRecord {
        run_trials("midpoint_inside", count, self.tolerances.membership, |i| {
            let (n, a, b) = self.point_pair(i);
            self.containment(0.5 * (a + b), n, 2)
        })
    }

    fn synthesis_target(&self, stream: u64, i: u64) -> (usize, C64, ChaCha8Rng) {
        let ns = self.ns();
        let mut rng = self.rng(stream, i);
        let n = ns[rng.gen_range(0..ns.len())];
        let z = Self::random_region_point(n, &mut rng);
        (n, z, rng)
    }

    /// Circulant-Gram synthesis at random targets. Deviation: residual.
    pub fn synth_circular_roundtrip(&self, count: usize) -> CheckRecord {
        let tol = self.tolerances;
        run_trials("synth_circular", count, tol.synth_circular, |i| {
            let (n, z, _) = self.synthesis_target(S_CIRC, i);
            match synth_circular(z, n) {
                Ok(r) => {
                    let circ = circulant_deviation(&gram_from_tuple(&r.tuple));
                    (!(r.residual <= tol.synth_circular) || circ > tol.circulant, r.residual)
                }
                Err(_) => (true, f64::NAN),
            }
        })
    }

    /// Qubit synthesis at random targets with at most 20 restarts.
    /// Deviation: residual.
    pub fn synth_qubit_roundtrip(&self, count: usize) -> CheckRecord {
        let tol = self.tolerances.synth_qubit;
        run_trials("synth_qubit", count, tol, |i| {
            let (n, z, mut rng) = self.synthesis_target(S_QUBIT, i);
            let cfg = OptimizerConfig {
                restarts: 20,
                seed: rng.gen(),
                ..OptimizerConfig::default()
            };
            match synth_qubit(z, n, &cfg) {
                Ok(r) => (!(r.residual < tol) || r.tuple.dim() != 2, r.residual),
                Err(_) => (true, f64::NAN),
            }
        })
    }

    /// The n = 1, d = 1 and n = 2 shapes. Deviation: unused (0).
    pub fn degenerate_ranges(&self) -> CheckRecord {
        let tol = self.tolerances.membership;
        let member = |z: C64, n: usize, d: usize| {
            membership(z, RegionSpec { n, d }, tol)
                .map(|v| v.classification.is_member())
                .unwrap_or(false)
        };
        let c = |re: f64, im: f64| C64::new(re, im);
        let cases: Vec<(C64, usize, usize, bool)> = vec![
            (c(1.0, 0.0), 1, 3, true),
            (c(0.5, 0.0), 1, 3, false),
            (c(1.0, 0.0), 4, 1, true),
            (c(-0.1, 0.0), 4, 1, false),
            (c(0.0, 0.0), 2, 2, true),
            (c(0.5, 0.0), 2, 3, true),
            (c(1.0, 0.0), 2, 4, true),
            (c(-0.01, 0.0), 2, 2, false),
            (c(1.01, 0.0), 2, 2, false),
            (c(0.5, 0.01), 2, 2, false),
        ];
        let outcomes: Vec<Outcome> = cases
            .iter()
            .map(|&(z, n, d, expected)| (member(z, n, d) != expected, 0.0))
            .collect();
        summarize("degenerate_ranges", &outcomes, tol)
    }
}

fn arg_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn symmetrization_trial(tuple: &PureTuple, tol: &Tolerances) -> [Outcome; 4] {
    let fail = [(true, f64::NAN); 4];
    let before = bargmann_pure(tuple);
    let Ok(out) = symmetrize(tuple) else { return fail };
    let Ok(expected) = symmetrized_invariant(tuple) else { return fail };
    let after = bargmann_pure(&out);
    let arg_dev = arg_distance(after.arg(), before.arg());
    let drop = before.modulus() - after.modulus();
    let circ = circulant_deviation(&gram_from_tuple(&out));
    let value_dev = (after.value() - expected).norm();
    [
        (!(arg_dev <= tol.symmetrize), arg_dev),
        (!(drop <= tol.amgm_slack), drop),
        (!(circ <= tol.circulant), circ),
        (!(value_dev <= tol.symmetrize), value_dev),
    ]
}

/// Runs the full suite for `cfg`.
pub fn run_verification(cfg: &RunConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let start = Instant::now();
    let h = Harness::new(cfg.seed, cfg.n_range, cfg.d_range, cfg.tolerances);
    let s = cfg.samples;
    let tenth = (s / 10).max(1);

    let mut checks = vec![
        h.containment_pure(s),
        h.containment_mixed(tenth),
        h.n3_region_grid(400),
        h.n4_boundary(1000),
        h.parametric_polar(&[3, 4, 5, 6, 7, 8], 1000),
    ];
    checks.extend(h.symmetrization(s));
    checks.push(h.hadamard_psd(s));
    checks.push(h.convex_psd(s));
    checks.push(h.product_inside(s));
    checks.push(h.midpoint_inside(s));
    checks.push(h.synth_circular_roundtrip(tenth));
    checks.push(h.synth_qubit_roundtrip(tenth));
    checks.push(h.degenerate_ranges());

    let pass = checks.iter().all(CheckRecord::passed);
    Ok(VerificationReport {
        schema: SCHEMA_VERSION,
        seed: cfg.seed,
        samples: cfg.samples,
        n_range: [cfg.n_range.0, cfg.n_range.1],
        d_range: [cfg.d_range.0, cfg.d_range.1],
        checks,
        pass,
        runtime: start.elapsed(),
    })
}
