//! Pure and mixed states, tuples of states, and their Bargmann invariants.
//!
//! Tuples are indexed cyclically: position `n` refers back to position `0`,
//! which is how consecutive overlaps close up into an invariant.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_deviation, inner, min_eigenvalue};
use crate::tolerance::Tolerances;
use crate::C64;

/// A normalized vector in `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: DVector<C64>,
}

impl StateVector {
    /// Wraps `amplitudes`, rejecting anything whose norm differs from 1 by more
    /// than the default norm tolerance.
    pub fn new(amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::ZeroDimension);
        }
        let norm = amplitudes.norm();
        if !((norm - 1.0).abs() <= Tolerances::DEFAULT.norm) {
            return Err(Error::NotNormalized(norm));
        }
        Ok(StateVector { amplitudes })
    }

    /// Scales `amplitudes` to unit norm.
    pub fn normalized(amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::ZeroDimension);
        }
        let norm = amplitudes.norm();
        if !(norm > 1e-300) || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        Ok(StateVector {
            amplitudes: amplitudes.unscale(norm),
        })
    }

    pub fn from_slice(amplitudes: &[C64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(amplitudes))
    }

    /// Computational basis vector `|index⟩` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: index + 1,
            });
        }
        let mut v = DVector::zeros(dim);
        v[index] = C64::new(1.0, 0.0);
        Ok(StateVector { amplitudes: v })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn overlap(&self, other: &StateVector) -> C64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    /// Multiplies by the global phase `e^{iα}`.
    pub fn with_phase(&self, alpha: f64) -> StateVector {
        StateVector {
            amplitudes: self.amplitudes.map(|a| a * C64::from_polar(1.0, alpha)),
        }
    }

    /// The rank-one projector `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix {
            entries: &self.amplitudes * self.amplitudes.adjoint(),
        }
    }
}

/// A positive semidefinite, unit-trace operator on `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<C64>,
}

impl DensityMatrix {
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        let tol = Tolerances::DEFAULT;
        if entries.nrows() != entries.ncols() {
            return Err(Error::NotSquare {
                rows: entries.nrows(),
                cols: entries.ncols(),
            });
        }
        if entries.nrows() == 0 {
            return Err(Error::ZeroDimension);
        }
        let asym = hermitian_deviation(&entries);
        if !(asym <= tol.hermitian) {
            return Err(Error::NotHermitian(asym));
        }
        let trace = entries.trace();
        if !((trace.re - 1.0).abs() <= tol.trace && trace.im.abs() <= tol.trace) {
            return Err(Error::InvalidTrace(trace.re));
        }
        let min = min_eigenvalue(&entries);
        if min < -tol.psd {
            return Err(Error::NotPositive(min));
        }
        Ok(DensityMatrix { entries })
    }

    /// The maximally mixed state `I/d`.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(DensityMatrix {
            entries: DMatrix::identity(dim, dim).unscale(dim as f64),
        })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }
}

/// A Bargmann invariant in polar form.
///
/// The argument lies in `[0, 2π)`. A zero value stores argument `0`; callers
/// must branch on [`modulus`](Self::modulus) before trusting the argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BargmannValue {
    value: C64,
    modulus: f64,
    arg: f64,
}

impl BargmannValue {
    pub fn new(value: C64) -> Self {
        let modulus = value.norm();
        let arg = if modulus == 0.0 {
            0.0
        } else {
            principal_arg(value)
        };
        BargmannValue {
            value,
            modulus,
            arg,
        }
    }

    pub fn value(&self) -> C64 {
        self.value
    }

    pub fn modulus(&self) -> f64 {
        self.modulus
    }

    /// Principal argument in `[0, 2π)`.
    pub fn arg(&self) -> f64 {
        self.arg
    }
}

/// Argument of `z` shifted into `[0, 2π)`; `0` for `z = 0`.
pub fn principal_arg(z: C64) -> f64 {
    if z.re == 0.0 && z.im == 0.0 {
        return 0.0;
    }
    let a = z.im.atan2(z.re);
    if a >= 0.0 {
        a
    } else {
        let shifted = a + TAU;
        // a tiny negative angle rounds up to exactly 2π
        if shifted >= TAU {
            0.0
        } else {
            shifted
        }
    }
}

fn check_dims(dims: impl Iterator<Item = usize>) -> Result<usize> {
    let mut expected = None;
    for dim in dims {
        match expected {
            None => expected = Some(dim),
            Some(e) if e != dim => {
                return Err(Error::DimensionMismatch {
                    expected: e,
                    found: dim,
                })
            }
            _ => {}
        }
    }
    expected.ok_or(Error::EmptyTuple)
}

/// An ordered tuple of pure states of one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct PureTuple {
    states: Vec<StateVector>,
}

impl PureTuple {
    pub fn new(states: Vec<StateVector>) -> Result<Self> {
        check_dims(states.iter().map(StateVector::dim))?;
        Ok(PureTuple { states })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    /// State at `index` taken modulo the tuple length.
    pub fn cyclic(&self, index: usize) -> &StateVector {
        &self.states[index % self.states.len()]
    }

    /// `⟨ψ_j|ψ_{j+1}⟩` for every position, wrapping at the end.
    pub fn consecutive_overlaps(&self) -> Vec<C64> {
        (0..self.len())
            .map(|j| self.states[j].overlap(self.cyclic(j + 1)))
            .collect()
    }

    /// The tuple started at position `shift`.
    pub fn rotated(&self, shift: usize) -> PureTuple {
        let n = self.len();
        PureTuple {
            states: (0..n).map(|j| self.cyclic(j + shift).clone()).collect(),
        }
    }

    /// Rank-one projectors of every state.
    pub fn to_mixed(&self) -> MixedTuple {
        MixedTuple {
            states: self.states.iter().map(StateVector::projector).collect(),
        }
    }

    pub fn into_states(self) -> Vec<StateVector> {
        self.states
    }
}

/// An ordered tuple of density matrices of one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedTuple {
    states: Vec<DensityMatrix>,
}

impl MixedTuple {
    pub fn new(states: Vec<DensityMatrix>) -> Result<Self> {
        check_dims(states.iter().map(DensityMatrix::dim))?;
        Ok(MixedTuple { states })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn cyclic(&self, index: usize) -> &DensityMatrix {
        &self.states[index % self.states.len()]
    }
}

/// Either kind of tuple.
#[derive(Debug, Clone, PartialEq)]
pub enum Tuple {
    Pure(PureTuple),
    Mixed(MixedTuple),
}

impl Tuple {
    pub fn len(&self) -> usize {
        match self {
            Tuple::Pure(t) => t.len(),
            Tuple::Mixed(t) => t.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        match self {
            Tuple::Pure(t) => t.dim(),
            Tuple::Mixed(t) => t.dim(),
        }
    }

    pub fn invariant(&self) -> BargmannValue {
        match self {
            Tuple::Pure(t) => bargmann_pure(t),
            Tuple::Mixed(t) => bargmann_mixed(t),
        }
    }
}

/// `⟨ψ_1|ψ_2⟩⟨ψ_2|ψ_3⟩⋯⟨ψ_n|ψ_1⟩`.
pub fn bargmann_pure(tuple: &PureTuple) -> BargmannValue {
    BargmannValue::new(tuple.consecutive_overlaps().into_iter().product())
}

/// `Tr(ρ_1 ρ_2 ⋯ ρ_n)`.
pub fn bargmann_mixed(tuple: &MixedTuple) -> BargmannValue {
    let mut states = tuple.states.iter();
    let first = states.next().expect("tuples are non-empty").entries.clone();
    let product = states.fold(first, |acc, rho| acc * &rho.entries);
    BargmannValue::new(product.trace())
}

fn check_unitary(u: &DMatrix<C64>, dim: usize) -> Result<()> {
    if u.nrows() != u.ncols() {
        return Err(Error::NotSquare {
            rows: u.nrows(),
            cols: u.ncols(),
        });
    }
    if u.nrows() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: u.nrows(),
        });
    }
    let deviation = (u.adjoint() * u - DMatrix::<C64>::identity(dim, dim))
        .iter()
        .fold(0.0_f64, |m, z| m.max(z.norm()));
    if !(deviation <= Tolerances::DEFAULT.unitary) {
        return Err(Error::NotUnitary(deviation));
    }
    Ok(())
}

impl PureTuple {
    /// Every state replaced by `U|ψ⟩`.
    pub fn conjugate(&self, u: &DMatrix<C64>) -> Result<PureTuple> {
        check_unitary(u, self.dim())?;
        let states = self
            .states
            .iter()
            .map(|s| StateVector {
                amplitudes: u * &s.amplitudes,
            })
            .collect();
        Ok(PureTuple { states })
    }
}

impl MixedTuple {
    /// Every state replaced by `UρU†`.
    pub fn conjugate(&self, u: &DMatrix<C64>) -> Result<MixedTuple> {
        check_unitary(u, self.dim())?;
        let ud = u.adjoint();
        let states = self
            .states
            .iter()
            .map(|rho| DensityMatrix {
                entries: u * &rho.entries * &ud,
            })
            .collect();
        Ok(MixedTuple { states })
    }
}

/// Applies the unitary action to either kind of tuple.
pub fn conjugate_tuple(tuple: &Tuple, u: &DMatrix<C64>) -> Result<Tuple> {
    match tuple {
        Tuple::Pure(t) => t.conjugate(u).map(Tuple::Pure),
        Tuple::Mixed(t) => t.conjugate(u).map(Tuple::Mixed),
    }
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state: a normalized vector of i.i.d. complex Gaussians.
pub fn haar_random_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<StateVector> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    loop {
        let v = DVector::from_fn(dim, |_, _| complex_gaussian(rng));
        if v.norm() > 1e-150 {
            return StateVector::normalized(v);
        }
    }
}

/// Ginibre-random density matrix `GG†/Tr(GG†)`.
pub fn ginibre_random_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<DensityMatrix> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    let g = DMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    let mut rho = &g * g.adjoint();
    let trace = rho.trace().re;
    rho.unscale_mut(trace);
    // GG† is Hermitian up to rounding in the products; make it exact
    let rho = (&rho + rho.adjoint()).scale(0.5);
    Ok(DensityMatrix { entries: rho })
}

pub fn random_pure_tuple<R: Rng + ?Sized>(n: usize, dim: usize, rng: &mut R) -> Result<PureTuple> {
    if n == 0 {
        return Err(Error::EmptyTuple);
    }
    let states = (0..n)
        .map(|_| haar_random_state(dim, rng))
        .collect::<Result<Vec<_>>>()?;
    Ok(PureTuple { states })
}

pub fn random_mixed_tuple<R: Rng + ?Sized>(n: usize, dim: usize, rng: &mut R) -> Result<MixedTuple> {
    if n == 0 {
        return Err(Error::EmptyTuple);
    }
    let states = (0..n)
        .map(|_| ginibre_random_density(dim, rng))
        .collect::<Result<Vec<_>>>()?;
    Ok(MixedTuple { states })
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix, with the
/// phases of `R`'s diagonal folded back into `Q`.
pub fn haar_random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<DMatrix<C64>> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    let g = DMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    Ok(q)
}
