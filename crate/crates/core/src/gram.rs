//! Gram matrices of state tuples.
//!
//! A Gram matrix `H` is positive semidefinite with unit diagonal; conversely
//! every such matrix is the Gram matrix of some tuple of unit vectors, which
//! [`factorize_gram`] constructs. The product of the cyclic superdiagonal
//! `H_{12} H_{23} ⋯ H_{n1}` is the Bargmann invariant of any tuple with Gram
//! matrix `H`, so questions about invariants reduce to questions about this set
//! of matrices.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_deviation, hermitian_eigen};
use crate::state::{BargmannValue, PureTuple, StateVector};
use crate::tolerance::Tolerances;
use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    entries: DMatrix<C64>,
    circulant: bool,
}

impl GramMatrix {
    /// Validates `entries` as a member of the Gram set: Hermitian, unit
    /// diagonal, no eigenvalue below `-1e-10`.
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        let tol = Tolerances::DEFAULT;
        validate(&entries, &tol)?;
        let circulant = circulant_spread(&entries) <= tol.circulant;
        Ok(GramMatrix { entries, circulant })
    }

    /// Skips validation; callers guarantee the invariants by construction.
    fn trusted(entries: DMatrix<C64>, circulant_hint: bool) -> Self {
        let circulant = circulant_hint || circulant_spread(&entries) <= Tolerances::DEFAULT.circulant;
        GramMatrix { entries, circulant }
    }

    pub fn identity(n: usize) -> Self {
        GramMatrix {
            entries: DMatrix::identity(n, n),
            circulant: true,
        }
    }

    pub fn all_ones(n: usize) -> Self {
        GramMatrix {
            entries: DMatrix::from_element(n, n, C64::new(1.0, 0.0)),
            circulant: true,
        }
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn get(&self, j: usize, k: usize) -> C64 {
        self.entries[(j, k)]
    }

    /// Circulant classification cached at construction (tolerance `1e-10`).
    pub fn circulant_flag(&self) -> bool {
        self.circulant
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> DVector<f64> {
        hermitian_eigen(&self.entries).0
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Cyclic superdiagonal `(H_{j,j+1})_j`.
    pub fn superdiagonal(&self) -> Vec<C64> {
        let n = self.n();
        (0..n).map(|j| self.entries[(j, (j + 1) % n)]).collect()
    }
}

fn validate(entries: &DMatrix<C64>, tol: &Tolerances) -> Result<()> {
    if entries.nrows() != entries.ncols() {
        return Err(Error::NotSquare {
            rows: entries.nrows(),
            cols: entries.ncols(),
        });
    }
    if entries.nrows() == 0 {
        return Err(Error::ZeroDimension);
    }
    let asym = hermitian_deviation(entries);
    if !(asym <= tol.hermitian) {
        return Err(Error::NotHermitian(asym));
    }
    for j in 0..entries.nrows() {
        let d = entries[(j, j)];
        if !((d.re - 1.0).abs() <= tol.trace && d.im.abs() <= tol.trace) {
            return Err(Error::NonUnitDiagonal { index: j, value: d.re });
        }
    }
    let min = hermitian_eigen(entries).0[0];
    if min < -tol.psd {
        return Err(Error::NotPositive(min));
    }
    Ok(())
}

/// Largest `|H_{j,j+l} − H_{k,k+l}|` over all `j, k, l` (indices mod n).
fn circulant_spread(h: &DMatrix<C64>) -> f64 {
    let n = h.nrows();
    let mut worst = 0.0_f64;
    for l in 0..n {
        for j in 0..n {
            let a = h[(j, (j + l) % n)];
            for k in (j + 1)..n {
                worst = worst.max((a - h[(k, (k + l) % n)]).norm());
            }
        }
    }
    worst
}

/// `H_{jk} = ⟨ψ_j|ψ_k⟩`.
pub fn gram_from_tuple(tuple: &PureTuple) -> GramMatrix {
    let n = tuple.len();
    let states = tuple.states();
    let mut h = DMatrix::zeros(n, n);
    for j in 0..n {
        h[(j, j)] = C64::new(1.0, 0.0);
        for k in (j + 1)..n {
            let z = states[j].overlap(&states[k]);
            h[(j, k)] = z;
            h[(k, j)] = z.conj();
        }
    }
    GramMatrix::trusted(h, false)
}

/// Recovers unit vectors whose Gram matrix is `h`.
///
/// The vectors live in dimension equal to the numerical rank of `h`: with
/// `H = V Λ V†`, eigenvalues in `[-1e-10, 1e-10]` are dropped and state `j` is
/// column `j` of `√Λ V†` restricted to the kept eigenvalues, rescaled to unit
/// norm.
pub fn factorize_gram(h: &GramMatrix) -> Result<PureTuple> {
    factorize_with(h, &Tolerances::DEFAULT)
}

pub fn factorize_with(h: &GramMatrix, tol: &Tolerances) -> Result<PureTuple> {
    let n = h.n();
    let (values, vectors) = if h.circulant {
        fourier_eigen(h)
    } else {
        hermitian_eigen(&h.entries)
    };
    if values[0] < -tol.psd {
        return Err(Error::NotPositive(values[0]));
    }
    let kept: Vec<usize> = (0..n).filter(|&a| values[a] > tol.rank).collect();
    if kept.is_empty() {
        return Err(Error::NotPositive(values[n - 1]));
    }
    let rank = kept.len();
    let mut states = Vec::with_capacity(n);
    for j in 0..n {
        let column = DVector::from_iterator(
            rank,
            kept.iter()
                .map(|&a| vectors[(j, a)].conj() * values[a].sqrt()),
        );
        let norm = column.norm();
        if !(norm >= 1e-12) {
            return Err(Error::DegenerateFactor { index: j, norm });
        }
        states.push(StateVector::normalized(column)?);
    }
    PureTuple::new(states)
}

/// Eigenpairs of a circulant Hermitian matrix in the Fourier basis
/// `v_m[j] = ω^{jm}/√n`, `λ_m = Σ_l c_l ω^{lm}` with `c_l` the mean of the l-th
/// cyclic diagonal. Ascending order.
///
/// Truncating modes in this basis keeps the factor Gram matrix exactly
/// circulant, which a generic eigensolver does not.
fn fourier_eigen(h: &GramMatrix) -> (DVector<f64>, DMatrix<C64>) {
    let n = h.n();
    let nf = n as f64;
    let omega = |k: usize| C64::from_polar(1.0, std::f64::consts::TAU * (k % n) as f64 / nf);
    let diag: Vec<C64> = (0..n)
        .map(|l| (0..n).map(|j| h.entries[(j, (j + l) % n)]).sum::<C64>() / nf)
        .collect();
    let lambda: Vec<f64> = (0..n)
        .map(|m| (0..n).map(|l| diag[l] * omega(l * m)).sum::<C64>().re)
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| lambda[a].total_cmp(&lambda[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&m| lambda[m]));
    let scale = nf.sqrt().recip();
    let vectors = DMatrix::from_fn(n, n, |j, c| omega(j * order[c]) * scale);
    (values, vectors)
}

/// Entrywise (Schur) product.
pub fn hadamard(a: &GramMatrix, b: &GramMatrix) -> Result<GramMatrix> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    let entries = a.entries.component_mul(&b.entries);
    Ok(GramMatrix::trusted(entries, a.circulant && b.circulant))
}

/// `Σ w_i H_i` for non-negative weights summing to one.
pub fn convex_combine(terms: &[(f64, GramMatrix)]) -> Result<GramMatrix> {
    let (_, first) = terms
        .first()
        .ok_or_else(|| Error::InvalidWeights("no terms".into()))?;
    let n = first.n();
    let mut total = 0.0;
    for (w, h) in terms {
        if !(*w >= 0.0) {
            return Err(Error::InvalidWeights(format!("negative weight {w}")));
        }
        if h.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: h.n(),
            });
        }
        total += w;
    }
    if !((total - 1.0).abs() <= 1e-12) {
        return Err(Error::InvalidWeights(format!("weights sum to {total}")));
    }
    let mut entries = DMatrix::zeros(n, n);
    for (w, h) in terms {
        entries += h.entries.scale(*w);
    }
    let all_circulant = terms.iter().all(|(_, h)| h.circulant);
    Ok(GramMatrix::trusted(entries, all_circulant))
}

/// Whether `H_{j,j+l} = H_{k,k+l}` within `tol` for all `j, k, l`.
pub fn is_circulant(h: &GramMatrix, tol: f64) -> bool {
    circulant_deviation(h) <= tol
}

/// Largest `|H_{j,j+l} − H_{k,k+l}|`; zero exactly for circulant matrices.
pub fn circulant_deviation(h: &GramMatrix) -> f64 {
    circulant_spread(&h.entries)
}

/// Mean of the Gram matrices of all cyclic rotations of the tuple:
/// `out_{kl} = (1/n) Σ_j H_{k+j, l+j}`.
pub fn cyclic_average(h: &GramMatrix) -> GramMatrix {
    let n = h.n();
    let mut out = DMatrix::zeros(n, n);
    for l in 0..n {
        // mean along the l-th cyclic diagonal, written back to every position
        let mean = (0..n).map(|j| h.entries[(j, (j + l) % n)]).sum::<C64>() / n as f64;
        for j in 0..n {
            out[(j, (j + l) % n)] = mean;
        }
    }
    for j in 0..n {
        out[(j, j)] = C64::new(1.0, 0.0);
    }
    GramMatrix {
        entries: out,
        circulant: true,
    }
}

/// `H_{12} H_{23} ⋯ H_{n1}`.
pub fn superdiag_product(h: &GramMatrix) -> BargmannValue {
    BargmannValue::new(h.superdiagonal().into_iter().product())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{bargmann_pure, random_pure_tuple};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, TAU};

    fn max_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
        (a - b).iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    fn obg3() -> PureTuple {
        let xi = C64::from_polar(1.0, TAU / 3.0);
        let states = (1..=3)
            .map(|k| {
                StateVector::from_slice(&[
                    C64::new(FRAC_PI_4.sin(), 0.0),
                    xi.powi(k) * FRAC_PI_4.cos(),
                ])
                .unwrap()
            })
            .collect();
        PureTuple::new(states).unwrap()
    }

    #[test]
    fn gram_of_special_tuples() {
        let psi = StateVector::basis(3, 1).unwrap();
        let g = gram_from_tuple(&PureTuple::new(vec![psi; 4]).unwrap());
        assert_eq!(g.entries(), GramMatrix::all_ones(4).entries());

        let basis = (0..3).map(|i| StateVector::basis(3, i).unwrap()).collect();
        let g = gram_from_tuple(&PureTuple::new(basis).unwrap());
        assert_eq!(g.entries(), GramMatrix::identity(3).entries());

        let g = gram_from_tuple(&obg3());
        assert!(g.circulant_flag());
        for z in g.superdiagonal() {
            assert!((z.norm() - 0.5).abs() < 1e-14);
            assert!((z.arg() - FRAC_PI_3).abs() < 1e-14);
        }
        assert!((superdiag_product(&g).value() - C64::new(-0.125, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn gram_rank_matches_span() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let t = random_pure_tuple(5, 2, &mut rng).unwrap();
        let ev = gram_from_tuple(&t).eigenvalues();
        assert_eq!(ev.iter().filter(|&&v| v > 1e-10).count(), 2);
    }

    #[test]
    fn factorize_identity_and_ones() {
        let t = factorize_gram(&GramMatrix::identity(3)).unwrap();
        assert_eq!(t.dim(), 3);
        let g = gram_from_tuple(&t);
        assert!(max_diff(g.entries(), GramMatrix::identity(3).entries()) < 1e-12);

        let t = factorize_gram(&GramMatrix::all_ones(4)).unwrap();
        assert_eq!(t.dim(), 1);
        for s in t.states() {
            assert!((s.overlap(t.cyclic(0)) - C64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn factorize_roundtrip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for n in 1..7 {
            for d in 1..5 {
                let g = gram_from_tuple(&random_pure_tuple(n, d, &mut rng).unwrap());
                let back = gram_from_tuple(&factorize_gram(&g).unwrap());
                assert!(max_diff(g.entries(), back.entries()) < 1e-9);
                assert!(factorize_gram(&g).unwrap().dim() <= d.min(n));
            }
        }
    }

    #[test]
    fn rejects_non_psd() {
        let c = |x: f64| C64::new(x, 0.0);
        let m = DMatrix::from_row_slice(
            3,
            3,
            &[c(1.0), c(-0.9), c(-0.9), c(-0.9), c(1.0), c(-0.9), c(-0.9), c(-0.9), c(1.0)],
        );
        match GramMatrix::new(m) {
            Err(Error::NotPositive(ev)) => assert!((ev - (1.0 - 1.8)).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
        let m = DMatrix::from_row_slice(2, 2, &[c(2.0), c(0.0), c(0.0), c(1.0)]);
        assert!(matches!(GramMatrix::new(m), Err(Error::NonUnitDiagonal { index: 0, .. })));
    }

    #[test]
    fn hadamard_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let h = gram_from_tuple(&random_pure_tuple(4, 3, &mut rng).unwrap());
        let ones = hadamard(&h, &GramMatrix::all_ones(4)).unwrap();
        assert_eq!(ones.entries(), h.entries());
        let id = hadamard(&h, &GramMatrix::identity(4)).unwrap();
        assert_eq!(id.entries(), GramMatrix::identity(4).entries());
        assert!(hadamard(&h, &GramMatrix::identity(3)).is_err());

        let h2 = gram_from_tuple(&random_pure_tuple(4, 2, &mut rng).unwrap());
        let p = hadamard(&h, &h2).unwrap();
        assert!(p.min_eigenvalue() >= -1e-10);
        let lhs = superdiag_product(&p).value();
        let rhs = superdiag_product(&h).value() * superdiag_product(&h2).value();
        assert!((lhs - rhs).norm() < 1e-12);

        let c = hadamard(&gram_from_tuple(&obg3()), &GramMatrix::identity(3)).unwrap();
        assert!(c.circulant_flag());
    }

    #[test]
    fn convex_combination_rules() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let h = gram_from_tuple(&random_pure_tuple(3, 3, &mut rng).unwrap());
        let same = convex_combine(&[(1.0, h.clone())]).unwrap();
        assert_eq!(same.entries(), h.entries());

        let mix = convex_combine(&[(0.5, h.clone()), (0.5, GramMatrix::all_ones(3))]).unwrap();
        for j in 0..3 {
            assert!((mix.get(j, j) - C64::new(1.0, 0.0)).norm() < 1e-15);
        }
        assert!(mix.min_eigenvalue() >= -1e-10);

        assert!(matches!(
            convex_combine(&[(0.7, h.clone()), (0.7, h.clone())]),
            Err(Error::InvalidWeights(_))
        ));
        assert!(matches!(
            convex_combine(&[(-0.5, h.clone()), (1.5, h.clone())]),
            Err(Error::InvalidWeights(_))
        ));
        assert!(matches!(
            convex_combine(&[(0.5, h), (0.5, GramMatrix::identity(2))]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn circulant_detection() {
        assert!(is_circulant(&GramMatrix::identity(5), 1e-10));
        assert!(is_circulant(&gram_from_tuple(&obg3()), 1e-10));
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let g = gram_from_tuple(&random_pure_tuple(3, 3, &mut rng).unwrap());
        assert!(!is_circulant(&g, 1e-10));
        assert!(!g.circulant_flag());
    }

    #[test]
    fn cyclic_average_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let circ = gram_from_tuple(&obg3());
        assert!(max_diff(cyclic_average(&circ).entries(), circ.entries()) < 1e-12);

        for n in 2..6 {
            let t = random_pure_tuple(n, 3, &mut rng).unwrap();
            let h = gram_from_tuple(&t);
            let avg = cyclic_average(&h);
            assert!(is_circulant(&avg, 1e-12));
            assert!(avg.min_eigenvalue() >= -1e-10);
            let mean = h.superdiagonal().into_iter().sum::<C64>() / n as f64;
            for z in avg.superdiagonal() {
                assert!((z - mean).norm() < 1e-12);
            }
            // oracle: literal mean of the Gram matrices of every rotation
            let mut direct = DMatrix::<C64>::zeros(n, n);
            for j in 0..n {
                direct += gram_from_tuple(&t.rotated(j)).entries();
            }
            direct.unscale_mut(n as f64);
            assert!(max_diff(&direct, avg.entries()) < 1e-12);
            assert!(max_diff(cyclic_average(&avg).entries(), avg.entries()) < 1e-12);
        }
    }

    #[test]
    fn superdiag_matches_invariant() {
        assert_eq!(superdiag_product(&GramMatrix::identity(3)).modulus(), 0.0);
        assert_eq!(superdiag_product(&GramMatrix::all_ones(3)).value(), C64::new(1.0, 0.0));
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n in 1..6 {
            let t = random_pure_tuple(n, 2, &mut rng).unwrap();
            let a = superdiag_product(&gram_from_tuple(&t)).value();
            assert!((a - bargmann_pure(&t).value()).norm() < 1e-12);
        }
    }
}
