//! Geometry of the set of attainable Bargmann invariants.
//!
//! For `n ≥ 3` and `d ≥ 2` the range is the star-shaped region
//! `{ t·[p + (1 − p)ξ_n]^n : t, p ∈ [0, 1] }` with `ξ_n = e^{2πi/n}`. Its
//! boundary has the polar description
//!
//! ```text
//! r(θ) = cosⁿ(π/n) · secⁿ((π − θ)/n),   θ ∈ [0, 2π)
//! ```
//!
//! Degenerate shapes: `n = 1` or `d = 1` gives the single point `1`, and `n = 2`
//! gives the real interval `[0, 1]`.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::state::principal_arg;
use crate::tolerance::Tolerances;
use crate::C64;

/// `(n, d)` pair selecting which range is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegionSpec {
    pub n: usize,
    pub d: usize,
}

impl RegionSpec {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::Config(format!("region needs n, d >= 1 (got n={n}, d={d})")));
        }
        Ok(RegionSpec { n, d })
    }

    pub fn shape(&self) -> Shape {
        match (self.n, self.d) {
            (0, _) | (_, 0) => Shape::Undefined,
            (1, _) | (_, 1) => Shape::Point,
            (2, _) => Shape::UnitInterval,
            _ => Shape::Star,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Undefined,
    /// `{1}`
    Point,
    /// `[0, 1]`
    UnitInterval,
    /// The star-shaped region bounded by the polar curve.
    Star,
}

/// `(t, p)` with `t·[p + (1 − p)ξ_n]^n` equal to the represented value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalParams {
    pub t: f64,
    pub p: f64,
}

impl CanonicalParams {
    pub fn value(&self, n: usize) -> C64 {
        self.t * chord_point(n, self.p).powu(n as u32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySample {
    pub theta: f64,
    pub radius: f64,
    pub point: C64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Inside,
    Boundary,
    Outside,
    NotApplicable,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Inside => "inside",
            Classification::Boundary => "boundary",
            Classification::Outside => "outside",
            Classification::NotApplicable => "not-applicable",
        }
    }

    /// Inside or on the boundary.
    pub fn is_member(&self) -> bool {
        matches!(self, Classification::Inside | Classification::Boundary)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembershipVerdict {
    pub classification: Classification,
    pub boundary_radius: f64,
    pub params: Option<CanonicalParams>,
}

fn xi(n: usize) -> C64 {
    C64::from_polar(1.0, TAU / n as f64)
}

/// `p + (1 − p)ξ_n`, a point on the chord from `ξ_n` to `1`.
fn chord_point(n: usize, p: f64) -> C64 {
    C64::new(p, 0.0) + (1.0 - p) * xi(n)
}

fn require_star(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::OutOfDomain {
            name: "n",
            value: n as f64,
            domain: "n >= 3",
        });
    }
    Ok(())
}

/// Polar boundary radius `cosⁿ(π/n)·secⁿ((π − θ)/n)`; `θ` is reduced mod 2π.
pub fn boundary_radius(n: usize, theta: f64) -> Result<f64> {
    require_star(n)?;
    Ok(radius_unchecked(n, theta))
}

fn radius_unchecked(n: usize, theta: f64) -> f64 {
    let nf = n as f64;
    let theta = theta.rem_euclid(TAU);
    ((PI / nf).cos() / ((PI - theta) / nf).cos()).powi(n as i32)
}

/// `[p + (1 − p)ξ_n]^n`.
pub fn boundary_point_parametric(n: usize, p: f64) -> Result<C64> {
    require_star(n)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfDomain {
            name: "p",
            value: p,
            domain: "[0, 1]",
        });
    }
    Ok(chord_point(n, p).powu(n as u32))
}

/// The `p ∈ [0, 1]` whose parametric boundary point has argument `θ`.
///
/// `p ↦ arg(p + (1 − p)ξ_n)` decreases strictly from `2π/n` to `0`, so the
/// preimage of `θ/n` is found by bisection. `θ = 0` maps to `p = 1`.
pub fn arg_to_p(n: usize, theta: f64) -> Result<f64> {
    require_star(n)?;
    let theta = theta.rem_euclid(TAU);
    if theta == 0.0 {
        return Ok(1.0);
    }
    let target = theta / n as f64;
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo >= 1e-14 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if chord_point(n, mid).arg() > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Classifies `z` against the range selected by `spec`.
pub fn membership(z: C64, spec: RegionSpec, tol: f64) -> Result<MembershipVerdict> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidTolerance(tol));
    }
    let one = CanonicalParams { t: 1.0, p: 1.0 };
    let verdict = match spec.shape() {
        Shape::Undefined => MembershipVerdict {
            classification: Classification::NotApplicable,
            boundary_radius: 0.0,
            params: None,
        },
        Shape::Point => {
            let member = (z - C64::new(1.0, 0.0)).norm() <= tol;
            MembershipVerdict {
                // a single point is all boundary
                classification: if member {
                    Classification::Boundary
                } else {
                    Classification::Outside
                },
                boundary_radius: 1.0,
                params: member.then_some(one),
            }
        }
        Shape::UnitInterval => {
            let member = z.im.abs() <= tol && z.re >= -tol && z.re <= 1.0 + tol;
            let classification = if !member {
                Classification::Outside
            } else if z.re.abs() <= tol || (z.re - 1.0).abs() <= tol {
                Classification::Boundary
            } else {
                Classification::Inside
            };
            MembershipVerdict {
                classification,
                boundary_radius: 1.0,
                params: member.then_some(CanonicalParams {
                    t: z.re.clamp(0.0, 1.0),
                    p: 1.0,
                }),
            }
        }
        Shape::Star => {
            let n = spec.n;
            let r = z.norm();
            if r == 0.0 {
                return Ok(MembershipVerdict {
                    classification: Classification::Inside,
                    boundary_radius: 1.0,
                    params: Some(CanonicalParams { t: 0.0, p: 1.0 }),
                });
            }
            let theta = principal_arg(z);
            let rho = radius_unchecked(n, theta);
            let classification = if r < rho - tol {
                Classification::Inside
            } else if (r - rho).abs() <= tol {
                Classification::Boundary
            } else {
                Classification::Outside
            };
            let params = if classification.is_member() {
                Some(CanonicalParams {
                    t: (r / rho).clamp(0.0, 1.0),
                    p: arg_to_p(n, theta)?,
                })
            } else {
                None
            };
            MembershipVerdict {
                classification,
                boundary_radius: rho,
                params,
            }
        }
    };
    Ok(verdict)
}

/// [`membership`] with the default tolerance.
pub fn membership_default(z: C64, spec: RegionSpec) -> Result<MembershipVerdict> {
    membership(z, spec, Tolerances::DEFAULT.membership)
}

/// The n = 3 region as the inequality `1 − 3r^{2/3} + 2r·cosθ ≥ 0`, restricted
/// to the unit disk.
///
/// The cubic in `r^{1/3}` turns non-negative again beyond `r = 1` along
/// directions near the positive axis, so without the `r ≤ 1` cap the set would
/// include spurious points outside the disk.
pub fn region_n3_inequality(z: C64) -> bool {
    let r = z.norm();
    let lhs = 1.0 - 3.0 * r.powf(2.0 / 3.0) + 2.0 * z.re;
    r <= 1.0 + 1e-12 && lhs >= -1e-12
}

/// The n = 4 boundary `e^{iθ}/(sin(θ/4) + cos(θ/4))⁴`.
pub fn boundary_n4(theta: f64) -> C64 {
    let q = theta / 4.0;
    C64::from_polar(1.0, theta) / (q.sin() + q.cos()).powi(4)
}

/// `count` samples of the polar boundary at `θ_k = 2πk/count`.
pub fn sample_boundary(n: usize, count: usize) -> Result<Vec<BoundarySample>> {
    require_star(n)?;
    if count < 2 {
        return Err(Error::OutOfDomain {
            name: "count",
            value: count as f64,
            domain: "count >= 2",
        });
    }
    Ok((0..count)
        .map(|k| {
            let theta = TAU * k as f64 / count as f64;
            let radius = radius_unchecked(n, theta);
            BoundarySample {
                theta,
                radius,
                point: C64::from_polar(radius, theta),
            }
        })
        .collect())
}
