//! Peripheral spectrum of a channel: the eigenvalues on the unit circle,
//! their spectral projections and the associated fixed and recurrent spaces.

use num_complex::Complex64;

use crate::channel::Superoperator;
use crate::error::{Error, Result};
use crate::numerics::{
    eig_where, eigenvalues, hermitian_basis, hermitian_part, kron, matrix_unit, spectral_order,
    unvectorize, ComplexMatrix, ONE,
};

/// Default distance from the unit circle below which an eigenvalue counts
/// as peripheral.
pub const DEFAULT_PERIPHERAL_TOL: f64 = 1e-8;

/// How close a peripheral eigenvalue must be to `1` to be treated as `1`.
const UNIT_TOL: f64 = 1e-6;

const BASIS_RANK_TOL: f64 = 1e-8;

/// One peripheral eigenvalue `λ` with its spectral projection `P_λ`.
#[derive(Debug, Clone)]
pub struct PeripheralCluster {
    pub value: Complex64,
    pub multiplicity: usize,
    pub projection: ComplexMatrix,
    /// Right eigenoperators `X` with `E(X) = λX`.
    pub right: Vec<ComplexMatrix>,
    /// Left eigenoperators, biorthonormal to `right` under `tr(L† X)`.
    pub left: Vec<ComplexMatrix>,
}

#[derive(Debug, Clone)]
pub struct PeripheralDecomposition {
    dim: usize,
    tol: f64,
    spectrum: Vec<Complex64>,
    clusters: Vec<PeripheralCluster>,
    peripheral_part: Superoperator,
    peripheral_projection: Superoperator,
    fixed_basis: Vec<ComplexMatrix>,
    recurrent_basis: Vec<ComplexMatrix>,
}

/// Computes the peripheral decomposition of `s`.
///
/// `tol` is the distance from the unit circle accepted for a peripheral
/// eigenvalue and must lie in `(0, 1e-4]`.
pub fn analyze_peripheral(s: &Superoperator, tol: f64) -> Result<PeripheralDecomposition> {
    if !(tol > 0.0 && tol <= 1e-4) {
        return Err(Error::InvalidParameter(format!(
            "peripheral tolerance {tol} outside (0, 1e-4]"
        )));
    }
    let d = s.dim();
    let m = s.matrix();
    crate::numerics::ensure_finite(m)?;
    let system = eig_where(m, |z| z.norm() >= 1.0 - tol)?;
    let mut clusters = Vec::with_capacity(system.clusters.len());
    for cl in &system.clusters {
        if cl.defective {
            return Err(Error::IllConditioned {
                value: format!("{:.6}{:+.6}i", cl.center.re, cl.center.im),
                condition: cl.overlap_condition,
            });
        }
        let value = cl.center.unscale(cl.center.norm());
        let projection = cl.projection().expect("non-defective cluster");
        let right = cl
            .right
            .column_iter()
            .map(|v| unvectorize(&v.into_owned(), d))
            .collect();
        let left = cl
            .left
            .column_iter()
            .map(|v| unvectorize(&v.into_owned(), d))
            .collect();
        clusters.push(PeripheralCluster {
            value,
            multiplicity: cl.multiplicity(),
            projection,
            right,
            left,
        });
    }
    if !clusters.iter().any(|c| (c.value - ONE).norm() <= UNIT_TOL) {
        return Err(Error::UnmatchedSpectrum(
            "no eigenvalue 1 on the peripheral spectrum; the map is not trace preserving".into(),
        ));
    }
    let mut spectrum = eigenvalues(m)?;
    spectrum.sort_by(|a, b| spectral_order(*a, *b));
    build(d, tol, spectrum, clusters)
}

fn build(
    dim: usize,
    tol: f64,
    spectrum: Vec<Complex64>,
    mut clusters: Vec<PeripheralCluster>,
) -> Result<PeripheralDecomposition> {
    clusters.sort_by(|a, b| spectral_order(a.value, b.value));
    let n = dim * dim;
    let mut part = ComplexMatrix::zeros(n, n);
    let mut proj = ComplexMatrix::zeros(n, n);
    for c in &clusters {
        part += &c.projection * c.value;
        proj += &c.projection;
    }
    let fixed_ops: Vec<ComplexMatrix> = clusters
        .iter()
        .filter(|c| is_one(c.value))
        .flat_map(|c| c.right.iter().cloned())
        .collect();
    let all_ops: Vec<ComplexMatrix> = clusters.iter().flat_map(|c| c.right.iter().cloned()).collect();
    let fixed_basis = hermitian_basis(&fixed_ops, BASIS_RANK_TOL)?;
    let recurrent_basis = hermitian_basis(&all_ops, BASIS_RANK_TOL)?;
    if fixed_basis.len() != fixed_ops.len() || recurrent_basis.len() != all_ops.len() {
        return Err(Error::IllConditioned {
            value: "peripheral eigenoperators".into(),
            condition: f64::INFINITY,
        });
    }
    Ok(PeripheralDecomposition {
        dim,
        tol,
        spectrum,
        clusters,
        peripheral_part: Superoperator::from_matrix(dim, part)?,
        peripheral_projection: Superoperator::from_matrix(dim, proj)?,
        fixed_basis,
        recurrent_basis,
    })
}

fn is_one(z: Complex64) -> bool {
    (z - ONE).norm() <= UNIT_TOL
}

impl PeripheralDecomposition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    /// All eigenvalues of the superoperator, ordered by decreasing modulus
    /// and then by phase.
    pub fn spectrum(&self) -> &[Complex64] {
        &self.spectrum
    }

    pub fn clusters(&self) -> &[PeripheralCluster] {
        &self.clusters
    }

    /// Peripheral eigenvalues, repeated according to multiplicity.
    pub fn peripheral_values(&self) -> Vec<Complex64> {
        self.clusters
            .iter()
            .flat_map(|c| std::iter::repeat_n(c.value, c.multiplicity))
            .collect()
    }

    /// `E_φ = Σ_ℓ λ_ℓ P_ℓ`.
    pub fn peripheral_part(&self) -> &Superoperator {
        &self.peripheral_part
    }

    /// `P_φ = Σ_ℓ P_ℓ`.
    pub fn peripheral_projection(&self) -> &Superoperator {
        &self.peripheral_projection
    }

    /// Hermitian orthonormal basis of the fixed-point space.
    pub fn fixed_basis(&self) -> &[ComplexMatrix] {
        &self.fixed_basis
    }

    /// Hermitian orthonormal basis of the span of all peripheral eigenoperators.
    pub fn recurrent_basis(&self) -> &[ComplexMatrix] {
        &self.recurrent_basis
    }

    pub fn dim_fixed(&self) -> usize {
        self.fixed_basis.len()
    }

    pub fn dim_recurrent(&self) -> usize {
        self.recurrent_basis.len()
    }

    pub fn is_ergodic(&self) -> bool {
        self.dim_fixed() == 1
    }

    pub fn is_mixing(&self) -> bool {
        self.is_ergodic() && self.clusters.len() == 1
    }

    /// `Σ_ℓ λ_ℓ^n P_ℓ`, equal to `E_φ^n`.
    pub fn peripheral_power(&self, n: u64) -> Superoperator {
        self.weighted_sum(|z| pow_unimodular(z, n as f64))
    }

    /// `Σ_ℓ λ_ℓ^{-1} P_ℓ`, the inverse of `E_φ` on the peripheral space.
    pub fn peripheral_inverse(&self) -> Superoperator {
        self.weighted_sum(|z| z.inv())
    }

    fn weighted_sum(&self, f: impl Fn(Complex64) -> Complex64) -> Superoperator {
        let n = self.dim * self.dim;
        let mut m = ComplexMatrix::zeros(n, n);
        for c in &self.clusters {
            m += &c.projection * f(c.value);
        }
        Superoperator::from_matrix(self.dim, m).expect("dimensions are consistent")
    }

    /// Rank-one factors `(R_ℓ, L_ℓ)` with `P_ℓ(A) = tr(L_ℓ† A) R_ℓ` and
    /// `‖R_ℓ‖₁ = 1`; `None` unless every peripheral eigenvalue is simple.
    pub fn rank_one_factors(&self) -> Result<Option<Vec<(Complex64, ComplexMatrix, ComplexMatrix)>>> {
        if self.clusters.iter().any(|c| c.multiplicity != 1) {
            return Ok(None);
        }
        let mut out = Vec::with_capacity(self.clusters.len());
        for c in &self.clusters {
            let r = &c.right[0];
            let scale = crate::numerics::trace_norm(r)?;
            out.push((c.value, r.unscale(scale), c.left[0].scale(scale)));
        }
        Ok(Some(out))
    }

    /// The decomposition of `I_{d1} ⊗ E`, built from this one without a new
    /// eigensolve.
    pub fn extend_with_identity(&self, d1: usize) -> Result<PeripheralDecomposition> {
        if d1 < 1 {
            return Err(Error::InvalidParameter("identity factor must have dimension ≥ 1".into()));
        }
        let units: Vec<ComplexMatrix> = (0..d1)
            .flat_map(|a| (0..d1).map(move |b| matrix_unit(d1, a, b)))
            .collect();
        let lift = |ops: &[ComplexMatrix]| -> Vec<ComplexMatrix> {
            units.iter().flat_map(|u| ops.iter().map(move |x| kron(u, x))).collect()
        };
        let mut clusters = Vec::with_capacity(self.clusters.len());
        for c in &self.clusters {
            let proj = Superoperator::from_matrix(self.dim, c.projection.clone())?;
            clusters.push(PeripheralCluster {
                value: c.value,
                multiplicity: c.multiplicity * d1 * d1,
                projection: proj.extend_with_identity(d1)?.into_matrix(),
                right: lift(&c.right),
                left: lift(&c.left),
            });
        }
        let spectrum = self
            .spectrum
            .iter()
            .flat_map(|&z| std::iter::repeat_n(z, d1 * d1))
            .collect();
        build(self.dim * d1, self.tol, spectrum, clusters)
    }
}

/// `z^n` for `|z| = 1`, evaluated through the phase to keep the modulus exact.
fn pow_unimodular(z: Complex64, n: f64) -> Complex64 {
    Complex64::from_polar(z.norm().powf(n), z.arg() * n)
}

/// The unique fixed state of an ergodic channel, normalized to unit trace.
pub fn fixed_point_state(dec: &PeripheralDecomposition) -> Result<ComplexMatrix> {
    if dec.dim_fixed() != 1 {
        return Err(Error::DegenerateFixedSpace(dec.dim_fixed()));
    }
    let x = &dec.fixed_basis[0];
    let tr = x.trace();
    if tr.norm() < 1e-12 {
        return Err(Error::IllConditioned {
            value: "fixed point trace".into(),
            condition: f64::INFINITY,
        });
    }
    Ok(hermitian_part(&x.unscale(tr.re)))
}

/// `|λ|` of the largest non-peripheral eigenvalue; zero when the whole
/// spectrum is peripheral or zero.
pub fn spectral_gap_radius(dec: &PeripheralDecomposition) -> f64 {
    dec.spectrum
        .iter()
        .map(|z| z.norm())
        .filter(|&r| r < 1.0 - dec.tol)
        .fold(0.0, f64::max)
}

/// `vec(A)` pairing used by the rank-one factors: `P(A) = R·tr(L† A)`.
pub fn apply_rank_one(r: &ComplexMatrix, l: &ComplexMatrix, a: &ComplexMatrix) -> ComplexMatrix {
    r * (l.adjoint() * a).trace()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::KrausChannel;
    use crate::numerics::{c, identity, vectorize};

    fn superop(kraus: Vec<ComplexMatrix>) -> Superoperator {
        KrausChannel::new(kraus).unwrap().superoperator().clone()
    }

    fn updown() -> Superoperator {
        superop(vec![matrix_unit(2, 0, 1), matrix_unit(2, 1, 0)])
    }

    fn triangle() -> Superoperator {
        superop(vec![matrix_unit(3, 0, 1), matrix_unit(3, 1, 2), matrix_unit(3, 2, 0)])
    }

    fn amplitude_damping(g: f64) -> Superoperator {
        let k0 = ComplexMatrix::from_row_slice(2, 2, &[ONE, c(0.0, 0.0), c(0.0, 0.0), c((1.0 - g).sqrt(), 0.0)]);
        let k1 = matrix_unit(2, 0, 1).scale(g.sqrt());
        superop(vec![k0, k1])
    }

    #[test]
    fn identity_channel_is_all_fixed() {
        let dec = analyze_peripheral(&Superoperator::identity(2), 1e-8).unwrap();
        assert_eq!(dec.dim_fixed(), 4);
        assert_eq!(dec.dim_recurrent(), 4);
        assert!((dec.peripheral_projection().matrix() - identity(4)).norm() < 1e-12);
        assert!(matches!(fixed_point_state(&dec), Err(Error::DegenerateFixedSpace(4))));
    }

    #[test]
    fn updown_peripheral_spectrum() {
        let dec = analyze_peripheral(&updown(), 1e-8).unwrap();
        let vals = dec.peripheral_values();
        assert_eq!(vals.len(), 2);
        assert!((vals[0] - ONE).norm() < 1e-12);
        assert!((vals[1] + ONE).norm() < 1e-12);
        let rho = fixed_point_state(&dec).unwrap();
        assert!((rho - identity(2).scale(0.5)).norm() < 1e-12);
        // E↕ has no decaying modes besides the coherences, which vanish in one step
        assert_eq!(spectral_gap_radius(&dec), 0.0);
    }

    #[test]
    fn triangle_has_cube_roots() {
        let dec = analyze_peripheral(&triangle(), 1e-8).unwrap();
        assert_eq!(dec.clusters().len(), 3);
        let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        for target in [ONE, w, w.conj()] {
            assert!(dec.peripheral_values().iter().any(|z| (z - target).norm() < 1e-10));
        }
    }

    #[test]
    fn projections_are_orthogonal_idempotents() {
        for s in [updown(), triangle(), amplitude_damping(0.3)] {
            let dec = analyze_peripheral(&s, 1e-8).unwrap();
            let cl = dec.clusters();
            for (i, a) in cl.iter().enumerate() {
                for (j, b) in cl.iter().enumerate() {
                    let prod = &a.projection * &b.projection;
                    let expected = if i == j { a.projection.clone() } else { prod.scale(0.0) };
                    assert!((prod - expected).norm() < 1e-10);
                }
            }
            let ep = dec.peripheral_part().matrix();
            let pp = dec.peripheral_projection().matrix();
            assert!((ep - s.matrix() * pp).norm() < 1e-10);
            assert!((ep - pp * s.matrix()).norm() < 1e-10);
        }
    }

    #[test]
    fn amplitude_damping_relaxes_to_ground_state() {
        let dec = analyze_peripheral(&amplitude_damping(0.3), 1e-8).unwrap();
        assert!(dec.is_mixing());
        let rho = fixed_point_state(&dec).unwrap();
        assert!((rho - matrix_unit(2, 0, 0)).norm() < 1e-12);
        assert!((spectral_gap_radius(&dec) - 0.7f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn powers_and_inverse() {
        let dec = analyze_peripheral(&triangle(), 1e-8).unwrap();
        let ep = dec.peripheral_part();
        for n in [1u64, 2, 5, 1000] {
            let direct = ep.power(n);
            assert!((dec.peripheral_power(n).matrix() - direct.matrix()).norm() < 1e-9);
        }
        let inv = dec.peripheral_inverse();
        let prod = inv.compose(ep).unwrap();
        assert!((prod.matrix() - dec.peripheral_projection().matrix()).norm() < 1e-10);
    }

    #[test]
    fn rank_one_factors_reproduce_projections() {
        let dec = analyze_peripheral(&updown(), 1e-8).unwrap();
        let factors = dec.rank_one_factors().unwrap().unwrap();
        for ((_, r, l), cl) in factors.iter().zip(dec.clusters()) {
            let outer = vectorize(r) * vectorize(l).adjoint();
            assert!((outer - &cl.projection).norm() < 1e-10);
            assert!((crate::numerics::trace_norm(r).unwrap() - 1.0).abs() < 1e-12);
            let a = ComplexMatrix::from_row_slice(2, 2, &[c(0.2, 0.0), c(0.3, -0.1), c(0.3, 0.1), c(0.8, 0.0)]);
            let via_matrix = Superoperator::from_matrix(2, cl.projection.clone()).unwrap().apply(&a).unwrap();
            assert!((apply_rank_one(r, l, &a) - via_matrix).norm() < 1e-10);
        }
        let id = analyze_peripheral(&Superoperator::identity(2), 1e-8).unwrap();
        assert!(id.rank_one_factors().unwrap().is_none());
    }

    #[test]
    fn extension_matches_direct_analysis() {
        let s = updown();
        let dec = analyze_peripheral(&s, 1e-8).unwrap();
        let ext = dec.extend_with_identity(2).unwrap();
        let direct = analyze_peripheral(&s.extend_with_identity(2).unwrap(), 1e-8).unwrap();
        assert_eq!(ext.dim_fixed(), direct.dim_fixed());
        assert_eq!(ext.dim_recurrent(), direct.dim_recurrent());
        assert!((ext.peripheral_projection().matrix() - direct.peripheral_projection().matrix()).norm() < 1e-9);
        assert!((ext.peripheral_part().matrix() - direct.peripheral_part().matrix()).norm() < 1e-9);
    }

    #[test]
    fn rejects_bad_tolerance_and_non_tp_maps() {
        assert!(matches!(analyze_peripheral(&updown(), 0.0), Err(Error::InvalidParameter(_))));
        assert!(matches!(analyze_peripheral(&updown(), 1e-3), Err(Error::InvalidParameter(_))));
        let half = Superoperator::identity(2).scale(c(0.5, 0.0));
        assert!(matches!(analyze_peripheral(&half, 1e-8), Err(Error::UnmatchedSpectrum(_))));
    }

    #[test]
    fn generic_unitary_conjugation_is_fully_recurrent() {
        for seed in [86, 0, 1, 2] {
            for d in [2, 3, 4] {
                let u = crate::hamiltonian::random_hamiltonian(d, seed).unwrap().propagator(2.7).unwrap();
                let dec = analyze_peripheral(&Superoperator::conjugation(&u).unwrap(), 1e-8).unwrap();
                assert_eq!((dec.dim_fixed(), dec.dim_recurrent()), (d, d * d), "seed {seed}, d = {d}");
            }
        }
    }
}
