//! Kicked evolutions, the Zeno Hamiltonian and the decoupling and
//! suppression decisions built on it.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::channel::Superoperator;
use crate::error::{Error, Result};
use crate::hamiltonian::{adjoint_rep, schmidt, Hamiltonian};
use crate::numerics::{c, expm, identity, kron, matmul, matrix_power, ComplexMatrix};
use crate::spectral::{analyze_peripheral, fixed_point_state, PeripheralDecomposition, DEFAULT_PERIPHERAL_TOL};

/// Default tolerance for the decoupling and suppression decisions.
pub const DEFAULT_DECISION_TOL: f64 = 1e-8;

/// `H_Z = Σ_ℓ P_ℓ [H, ·] P_ℓ` over the peripheral projections of `dec`.
pub fn zeno_hamiltonian(dec: &PeripheralDecomposition, h: &Hamiltonian) -> Result<Superoperator> {
    if dec.dim() != h.dim() {
        return Err(Error::DimensionMismatch(format!(
            "kick acts on dimension {}, Hamiltonian on {}",
            dec.dim(),
            h.dim()
        )));
    }
    let ad = adjoint_rep(h);
    let n = dec.dim() * dec.dim();
    let mut hz = ComplexMatrix::zeros(n, n);
    for cl in dec.clusters() {
        hz += &cl.projection * ad.matrix() * &cl.projection;
    }
    Superoperator::from_matrix(dec.dim(), hz)
}

/// `(S_kick e^{-i(t/n)[H,·]})ⁿ`.
pub fn zeno_evolution(kick: &Superoperator, h: &Hamiltonian, t: f64, n: u64) -> Result<Superoperator> {
    if n == 0 {
        return Err(Error::InvalidParameter("number of kicks must be at least 1".into()));
    }
    if kick.dim() != h.dim() {
        return Err(Error::DimensionMismatch(format!(
            "kick acts on dimension {}, Hamiltonian on {}",
            kick.dim(),
            h.dim()
        )));
    }
    let u = h.propagator(t / n as f64)?;
    let step = matmul(kick.matrix(), &u.kronecker(&u.conjugate()));
    Superoperator::from_matrix(kick.dim(), matrix_power(&step, n)?)
}

/// Kicked evolution with `I_{d1} ⊗ S2` as the kick, where `d1 = dim(H)/dim(S2)`.
pub fn dd_evolution(bath: &Superoperator, h: &Hamiltonian, t: f64, n: u64) -> Result<Superoperator> {
    let d1 = system_dim(bath, h)?;
    zeno_evolution(&bath.extend_with_identity(d1)?, h, t, n)
}

fn system_dim(bath: &Superoperator, h: &Hamiltonian) -> Result<usize> {
    let d2 = bath.dim();
    if d2 == 0 || !h.dim().is_multiple_of(d2) {
        return Err(Error::DimensionMismatch(format!(
            "Hamiltonian dimension {} is not a multiple of the bath dimension {d2}",
            h.dim()
        )));
    }
    Ok(h.dim() / d2)
}

/// `E_φⁿ e^{-it H_Z}`.
pub fn target_evolution(dec: &PeripheralDecomposition, hz: &Superoperator, t: f64, n: u64) -> Result<Superoperator> {
    if hz.dim() != dec.dim() {
        return Err(Error::DimensionMismatch("Zeno Hamiltonian and kick differ in dimension".into()));
    }
    let flow = expm(&(hz.matrix() * c(0.0, -t)))?;
    Superoperator::from_matrix(dec.dim(), dec.peripheral_power(n).matrix() * flow)
}

/// The Zeno Hamiltonian of a kick together with its peripheral decomposition.
#[derive(Debug, Clone)]
pub struct ZenoAnalysis {
    decomposition: PeripheralDecomposition,
    zeno_hamiltonian: Superoperator,
    tol: f64,
}

impl ZenoAnalysis {
    pub fn new(kick: &Superoperator, h: &Hamiltonian, tol: f64) -> Result<Self> {
        Self::from_decomposition(analyze_peripheral(kick, DEFAULT_PERIPHERAL_TOL)?, h, tol)
    }

    /// Analysis of the kick `I_{d1} ⊗ bath` with `d1 = dim(H)/dim(bath)`.
    pub fn for_bath(bath: &Superoperator, h: &Hamiltonian, tol: f64) -> Result<Self> {
        let d1 = system_dim(bath, h)?;
        let dec = analyze_peripheral(bath, DEFAULT_PERIPHERAL_TOL)?.extend_with_identity(d1)?;
        Self::from_decomposition(dec, h, tol)
    }

    pub fn from_decomposition(decomposition: PeripheralDecomposition, h: &Hamiltonian, tol: f64) -> Result<Self> {
        let zeno_hamiltonian = zeno_hamiltonian(&decomposition, h)?;
        Ok(Self {
            decomposition,
            zeno_hamiltonian,
            tol,
        })
    }

    pub fn decomposition(&self) -> &PeripheralDecomposition {
        &self.decomposition
    }

    pub fn zeno_hamiltonian(&self) -> &Superoperator {
        &self.zeno_hamiltonian
    }

    /// `‖H_Z‖_F`.
    pub fn zeno_norm(&self) -> f64 {
        self.zeno_hamiltonian.matrix().norm()
    }

    pub fn suppression(&self) -> bool {
        self.zeno_norm() <= self.tol
    }

    pub fn target(&self, t: f64, n: u64) -> Result<Superoperator> {
        target_evolution(&self.decomposition, &self.zeno_hamiltonian, t, n)
    }
}

/// Whether `‖H_Z‖_F ≤ tol` for the kick `s`.
pub fn suppression_check(s: &Superoperator, h: &Hamiltonian, tol: f64) -> Result<bool> {
    Ok(ZenoAnalysis::new(s, h, tol)?.suppression())
}

/// Outcome of the bath decoupling test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DdVerdict {
    pub works: bool,
    /// `c_i = tr(h₂⁽ⁱ⁾ ρ*)`, present only for ergodic baths.
    pub coefficients: Option<Vec<f64>>,
    /// `‖H_Z − [H_sys, ·]⊗P_φ‖_F` at the best available `c_i`.
    pub residual: f64,
    pub ergodic: bool,
    pub tol: f64,
}

impl DdVerdict {
    pub fn coefficients(&self) -> Result<&[f64]> {
        self.coefficients.as_deref().ok_or_else(|| {
            Error::InvalidParameter("coefficients are only defined for ergodic bath channels".into())
        })
    }
}

/// Decides whether kicking the bath with `bath` decouples it from the system
/// under `H`. For ergodic baths the effective system Hamiltonian uses
/// `c_i = tr(h₂⁽ⁱ⁾ρ*)`; otherwise the best real `c_i` in the least-squares
/// sense are used and no coefficients are reported.
pub fn dd_check(bath: &Superoperator, h: &Hamiltonian, tol: f64) -> Result<DdVerdict> {
    let d1 = system_dim(bath, h)?;
    let d2 = bath.dim();
    let bath_dec = analyze_peripheral(bath, DEFAULT_PERIPHERAL_TOL)?;
    let dec = bath_dec.extend_with_identity(d1)?;
    let hz = zeno_hamiltonian(&dec, h)?;
    let proj = dec.peripheral_projection().matrix();
    let sd = schmidt(h, d1, d2)?;
    let i2 = identity(d2);
    let lifted = |a: &ComplexMatrix| -> Result<ComplexMatrix> {
        Ok(adjoint_rep(&Hamiltonian::new(kron(a, &i2))?).matrix() * proj)
    };
    let base = lifted(&sd.h1)?;
    let ergodic = bath_dec.is_ergodic();
    if ergodic {
        let rho = fixed_point_state(&bath_dec)?;
        let coefficients: Vec<f64> = sd.terms.iter().map(|(_, b)| (b * &rho).trace().re).collect();
        let mut g = base;
        for ((a, _), ci) in sd.terms.iter().zip(&coefficients) {
            g += lifted(a)? * c(*ci, 0.0);
        }
        let residual = (hz.matrix() - g).norm();
        return Ok(DdVerdict {
            works: residual <= tol,
            coefficients: Some(coefficients),
            residual,
            ergodic,
            tol,
        });
    }
    let target = hz.matrix() - base;
    let columns: Vec<ComplexMatrix> = sd.terms.iter().map(|(a, _)| lifted(a)).collect::<Result<_>>()?;
    let k = columns.len();
    let mut residual = target.norm();
    if k > 0 {
        let gram = DMatrix::<f64>::from_fn(k, k, |i, j| columns[i].dotc(&columns[j]).re);
        let rhs = DVector::<f64>::from_fn(k, |i, _| columns[i].dotc(&target).re);
        let eps = 1e-12 * gram.norm().max(1.0);
        let pinv = gram
            .pseudo_inverse(eps)
            .map_err(|e| Error::NoConvergence(e.to_string()))?;
        let coef = pinv * rhs;
        let mut fit = target.clone();
        for (col, ci) in columns.iter().zip(coef.iter()) {
            fit -= col * c(*ci, 0.0);
        }
        residual = fit.norm();
    }
    Ok(DdVerdict {
        works: residual <= tol,
        coefficients: None,
        residual,
        ergodic,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::KrausChannel;
    use crate::hamiltonian::random_hamiltonian;
    use crate::numerics::matrix_unit;

    fn superop(kraus: Vec<ComplexMatrix>) -> Superoperator {
        KrausChannel::new(kraus).unwrap().superoperator().clone()
    }

    fn updown() -> Superoperator {
        superop(vec![matrix_unit(2, 0, 1), matrix_unit(2, 1, 0)])
    }

    fn dephase() -> Superoperator {
        superop(vec![matrix_unit(2, 0, 0), matrix_unit(2, 1, 1)])
    }

    #[test]
    fn trivial_evolutions() {
        let h = random_hamiltonian(2, 1).unwrap();
        let s = updown();
        assert!((zeno_evolution(&s, &h, 0.0, 1).unwrap().matrix() - s.matrix()).norm() < 1e-14);
        let free = zeno_evolution(&Superoperator::identity(2), &h, 0.7, 5).unwrap();
        let direct = expm(&(adjoint_rep(&h).matrix() * c(0.0, -0.7))).unwrap();
        assert!((free.matrix() - direct).norm() < 1e-12);
        assert!(zeno_evolution(&s, &h, 1.0, 0).is_err());
    }

    #[test]
    fn kicked_step_matches_superoperator_exponential() {
        let h = random_hamiltonian(4, 3).unwrap();
        let s = updown().extend_with_identity(2).unwrap();
        let (t, n) = (1.3, 7u64);
        let fast = zeno_evolution(&s, &h, t, n).unwrap();
        let gen = expm(&(adjoint_rep(&h).matrix() * c(0.0, -t / n as f64))).unwrap();
        let step = s.matrix() * gen;
        let mut slow = identity(16);
        for _ in 0..n {
            slow = &step * slow;
        }
        assert!((fast.matrix() - slow).norm() < 1e-11);
    }

    #[test]
    fn dephasing_suppresses_qubit_hamiltonians() {
        for seed in 0..5 {
            let h = random_hamiltonian(2, seed).unwrap();
            assert!(suppression_check(&dephase(), &h, 1e-8).unwrap());
        }
        let id = Hamiltonian::new(identity(2)).unwrap();
        assert!(suppression_check(&Superoperator::identity(2), &id, 1e-8).unwrap());
        assert!(!suppression_check(&Superoperator::identity(2), &random_hamiltonian(2, 0).unwrap(), 1e-8).unwrap());
    }

    #[test]
    fn dephasing_target_is_the_kick() {
        let h = random_hamiltonian(2, 9).unwrap();
        let za = ZenoAnalysis::new(&dephase(), &h, 1e-8).unwrap();
        for n in [1, 2, 10] {
            assert!((za.target(1.0, n).unwrap().matrix() - dephase().matrix()).norm() < 1e-10);
        }
    }

    #[test]
    fn updown_decouples() {
        let h = Hamiltonian::from_pauli("XZ + ZI").unwrap();
        let v = dd_check(&updown(), &h, 1e-8).unwrap();
        assert!(v.works && v.ergodic);
        assert_eq!(v.coefficients().unwrap().len(), 1);
        assert!(v.coefficients().unwrap()[0].abs() < 1e-12);
    }

    #[test]
    fn dephasing_bath_fails_for_zz() {
        let h = Hamiltonian::from_pauli("ZZ").unwrap();
        let v = dd_check(&dephase(), &h, 1e-8).unwrap();
        assert!(!v.works && !v.ergodic);
        assert!(v.residual > 0.1);
        assert!(v.coefficients().is_err());
        // the best system-only correction is orthogonal, so the residual is the projected generator
        let ext = dephase().extend_with_identity(2).unwrap();
        let dec = analyze_peripheral(&ext, 1e-8).unwrap();
        let raw = (adjoint_rep(&h).matrix() * dec.peripheral_projection().matrix()).norm();
        assert!((v.residual - raw).abs() < 1e-9);
        // a Hamiltonian whose bath part is off-diagonal is removed by the kicks
        let zx = Hamiltonian::from_pauli("ZX").unwrap();
        assert!(dd_check(&dephase(), &zx, 1e-8).unwrap().works);
    }

    #[test]
    fn bath_dimension_must_divide() {
        let h = random_hamiltonian(3, 0).unwrap();
        assert!(matches!(dd_check(&updown(), &h, 1e-8), Err(Error::DimensionMismatch(_))));
    }
}
