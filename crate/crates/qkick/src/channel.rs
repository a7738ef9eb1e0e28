//! Quantum channels: Kraus lists, superoperator matrices and Choi states.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{
    self, ensure_square, hermitian_eigenvalues, identity, matrix_power, unvectorize, vectorize,
    ComplexMatrix, ComplexVector, ONE, ZERO,
};

/// Absolute tolerance on the CPTP residuals.
pub const CPTP_TOL: f64 = 1e-10;

/// A channel `ρ ↦ Σ_k E_k ρ E_k†` on a `dim`-dimensional space.
#[derive(Debug)]
pub struct KrausChannel {
    dim: usize,
    kraus: Vec<ComplexMatrix>,
    name: Option<String>,
    superop: OnceLock<Superoperator>,
}

impl Clone for KrausChannel {
    fn clone(&self) -> Self {
        Self {
            dim: self.dim,
            kraus: self.kraus.clone(),
            name: self.name.clone(),
            superop: self.superop.clone(),
        }
    }
}

impl KrausChannel {
    /// Builds a channel from a Kraus list, checking shapes only. Use
    /// [`KrausChannel::validate`] or [`KrausChannel::new_cptp`] for the
    /// CPTP conditions.
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty Kraus list".into()))?;
        let dim = ensure_square(first)?;
        if dim == 0 {
            return Err(Error::InvalidParameter("zero-dimensional Kraus operator".into()));
        }
        for (k, op) in kraus.iter().enumerate() {
            if op.shape() != (dim, dim) {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator {k} is {}x{}, expected {dim}x{dim}",
                    op.nrows(),
                    op.ncols()
                )));
            }
        }
        Ok(Self {
            dim,
            kraus,
            name: None,
            superop: OnceLock::new(),
        })
    }

    /// Like [`KrausChannel::new`] but rejects maps that fail validation.
    pub fn new_cptp(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let ch = Self::new(kraus)?;
        let report = ch.validate()?;
        if !report.passed {
            return Err(Error::NotCptp {
                trace_residual: report.trace_residual,
                min_choi_eigenvalue: report.min_choi_eigenvalue,
            });
        }
        Ok(ch)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// `Σ_k E_k ⊗ conj(E_k)`, computed once.
    pub fn superoperator(&self) -> &Superoperator {
        self.superop.get_or_init(|| Superoperator::from_kraus_unchecked(self.dim, &self.kraus))
    }

    pub fn validate(&self) -> Result<ValidationReport> {
        let effect: ComplexMatrix = self.kraus.iter().map(|k| k.adjoint() * k).sum();
        let trace_residual = (effect - identity(self.dim)).norm();
        let min_choi_eigenvalue = self.superoperator().choi().min_eigenvalue()?;
        Ok(ValidationReport {
            trace_residual,
            min_choi_eigenvalue,
            passed: trace_residual <= CPTP_TOL && min_choi_eigenvalue >= -CPTP_TOL,
        })
    }

    /// Kraus list of `p·self + (1−p)·other`.
    pub fn mix(&self, p: f64, other: &KrausChannel) -> Result<KrausChannel> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("mixing weight {p} outside [0, 1]")));
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "cannot mix channels of dimension {} and {}",
                self.dim, other.dim
            )));
        }
        let (a, b) = (p.sqrt(), (1.0 - p).sqrt());
        let kraus = self
            .kraus
            .iter()
            .map(|k| k.scale(a))
            .chain(other.kraus.iter().map(|k| k.scale(b)))
            .collect();
        KrausChannel::new(kraus)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidationReport {
    /// `‖Σ E_k† E_k − I‖_F`
    pub trace_residual: f64,
    pub min_choi_eigenvalue: f64,
    pub passed: bool,
}

/// The `d²×d²` matrix of a linear map on `d×d` operators, in the
/// row-vectorization convention of [`crate::numerics::vectorize`].
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    dim: usize,
    matrix: ComplexMatrix,
}

impl Superoperator {
    pub fn from_matrix(dim: usize, matrix: ComplexMatrix) -> Result<Self> {
        let n = ensure_square(&matrix)?;
        if n != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "superoperator on dimension {dim} must be {0}x{0}, got {n}x{n}",
                dim * dim
            )));
        }
        Ok(Self { dim, matrix })
    }

    pub fn from_kraus(kraus: &[ComplexMatrix]) -> Result<Self> {
        Ok(KrausChannel::new(kraus.to_vec())?.superoperator().clone())
    }

    fn from_kraus_unchecked(dim: usize, kraus: &[ComplexMatrix]) -> Self {
        let mut matrix = ComplexMatrix::zeros(dim * dim, dim * dim);
        for k in kraus {
            matrix += k.kronecker(&k.conjugate());
        }
        Self { dim, matrix }
    }

    /// Superoperator of an arbitrary linear map, assembled column by column
    /// from its action on matrix units.
    pub fn from_map(dim: usize, map: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Result<Self> {
        let n = dim * dim;
        let mut matrix = ComplexMatrix::zeros(n, n);
        for i in 0..dim {
            for j in 0..dim {
                let out = map(&numerics::matrix_unit(dim, i, j));
                if out.shape() != (dim, dim) {
                    return Err(Error::DimensionMismatch("map changes the operator dimension".into()));
                }
                matrix.set_column(dim * i + j, &vectorize(&out));
            }
        }
        Ok(Self { dim, matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            matrix: identity(dim * dim),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            matrix: ComplexMatrix::zeros(dim * dim, dim * dim),
        }
    }

    /// `ρ ↦ U ρ U†`.
    pub fn conjugation(u: &ComplexMatrix) -> Result<Self> {
        let dim = ensure_square(u)?;
        Ok(Self {
            dim,
            matrix: u.kronecker(&u.conjugate()),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    fn check_same_dim(&self, other: &Superoperator) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "superoperators on dimensions {} and {}",
                self.dim, other.dim
            )));
        }
        Ok(())
    }

    pub fn apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        if a.shape() != (self.dim, self.dim) {
            return Err(Error::DimensionMismatch(format!(
                "operator is {}x{}, superoperator acts on {}x{}",
                a.nrows(),
                a.ncols(),
                self.dim,
                self.dim
            )));
        }
        Ok(unvectorize(&(&self.matrix * vectorize(a)), self.dim))
    }

    /// `self ∘ other`, i.e. `other` acts first.
    pub fn compose(&self, other: &Superoperator) -> Result<Superoperator> {
        self.check_same_dim(other)?;
        Ok(Self {
            dim: self.dim,
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn power(&self, n: u64) -> Superoperator {
        Self {
            dim: self.dim,
            matrix: matrix_power(&self.matrix, n).expect("superoperator matrices are square"),
        }
    }

    pub fn add(&self, other: &Superoperator) -> Result<Superoperator> {
        self.check_same_dim(other)?;
        Ok(Self {
            dim: self.dim,
            matrix: &self.matrix + &other.matrix,
        })
    }

    pub fn scale(&self, z: Complex64) -> Superoperator {
        Self {
            dim: self.dim,
            matrix: &self.matrix * z,
        }
    }

    /// `p·self + (1−p)·other`.
    pub fn mix(&self, p: f64, other: &Superoperator) -> Result<Superoperator> {
        self.check_same_dim(other)?;
        Ok(Self {
            dim: self.dim,
            matrix: self.matrix.scale(p) + other.matrix.scale(1.0 - p),
        })
    }

    /// `I₁ ⊗ self` acting on `B(C^d1 ⊗ C^d)`.
    pub fn extend_with_identity(&self, d1: usize) -> Result<Superoperator> {
        if d1 < 1 {
            return Err(Error::InvalidParameter("identity factor must have dimension ≥ 1".into()));
        }
        let d2 = self.dim;
        let big = d1 * d2;
        let mut matrix = ComplexMatrix::zeros(big * big, big * big);
        let idx = |a: usize, i: usize, b: usize, j: usize| big * (a * d2 + i) + (b * d2 + j);
        for a in 0..d1 {
            for b in 0..d1 {
                for i in 0..d2 {
                    for j in 0..d2 {
                        for k in 0..d2 {
                            for l in 0..d2 {
                                let v = self.matrix[(d2 * i + j, d2 * k + l)];
                                if v != ZERO {
                                    matrix[(idx(a, i, b, j), idx(a, k, b, l))] = v;
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(Self { dim: big, matrix })
    }

    /// `Λ = (E ⊗ I)(|Ω⟩⟨Ω|)` with `|Ω⟩ = d^{-1/2} Σ_j |jj⟩`; the output leg
    /// comes first in the tensor ordering.
    pub fn choi(&self) -> ChoiState {
        let d = self.dim;
        let scale = 1.0 / d as f64;
        let matrix = ComplexMatrix::from_fn(d * d, d * d, |r, c| {
            let (a, i) = (r / d, r % d);
            let (b, j) = (c / d, c % d);
            self.matrix[(d * a + b, d * i + j)] * scale
        });
        ChoiState { d, matrix }
    }

    /// `‖vec(I)† S − vec(I)†‖₂`: zero exactly when the map preserves traces.
    pub fn trace_preservation_residual(&self) -> f64 {
        let v = vectorize(&identity(self.dim));
        let left: ComplexVector = self.matrix.adjoint() * &v;
        (left - v).norm()
    }

    /// Checks trace preservation and complete positivity at `tol`.
    pub fn is_cptp(&self, tol: f64) -> Result<bool> {
        Ok(self.trace_preservation_residual() <= tol && self.choi().min_eigenvalue()? >= -tol)
    }
}

/// A normalized Choi–Jamiołkowski state.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiState {
    d: usize,
    matrix: ComplexMatrix,
}

impl ChoiState {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// `tr Λ²`, computed as `‖Λ‖_F²`.
    pub fn purity(&self) -> f64 {
        self.matrix.norm_squared()
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(hermitian_eigenvalues(&self.matrix)?
            .into_iter()
            .fold(f64::INFINITY, f64::min))
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> Result<usize> {
        Ok(hermitian_eigenvalues(&self.matrix)?
            .into_iter()
            .filter(|&x| x > tol)
            .count())
    }
}

/// The maximally entangled vector `d^{-1/2} Σ_j |jj⟩`.
pub fn max_entangled(d: usize) -> ComplexVector {
    let mut v = ComplexVector::zeros(d * d);
    let amp = ONE / (d as f64).sqrt();
    for j in 0..d {
        v[j * d + j] = amp;
    }
    v
}
