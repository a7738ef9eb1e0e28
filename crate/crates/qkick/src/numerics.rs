//! Dense complex linear algebra used throughout the crate.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`. The general eigenvalue
//! problem and all singular value decompositions are delegated to `faer`.
//!
//! Operators are vectorized row-wise: `vec(|i⟩⟨j|)` is basis vector `d·i + j`,
//! so the superoperator of `X ↦ A X B` is `A ⊗ Bᵀ`.

use faer::{Mat, Side};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// Eigenvalues closer than this (absolute) are treated as one cluster.
pub const CLUSTER_TOL: f64 = 1e-8;
/// Overlap condition number above which a cluster is reported defective.
pub const DEFECT_CONDITION: f64 = 1e8;
/// Relative singular-value threshold for null vectors of `M - λI`.
const NULL_TOL: f64 = 1e-7;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn ensure_square(m: &ComplexMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NonSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

pub fn ensure_finite(m: &ComplexMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NoConvergence("matrix has non-finite entries".into()))
    }
}

fn to_faer(m: &ComplexMatrix) -> Mat<Complex64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, Complex64>) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

pub fn identity(d: usize) -> ComplexMatrix {
    ComplexMatrix::identity(d, d)
}

/// `|i⟩⟨j|` on a `d`-dimensional space.
pub fn matrix_unit(d: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d, d);
    m[(i, j)] = ONE;
    m
}

/// Row-major vectorization.
pub fn vectorize(a: &ComplexMatrix) -> ComplexVector {
    let (r, cols) = a.shape();
    ComplexVector::from_fn(r * cols, |k, _| a[(k / cols, k % cols)])
}

/// Inverse of [`vectorize`] for a `d×d` operator.
pub fn unvectorize(v: &ComplexVector, d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |i, j| v[d * i + j])
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b - b * a
}

/// Hilbert–Schmidt inner product `tr(a† b)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn hermitian_part(a: &ComplexMatrix) -> ComplexMatrix {
    (a + a.adjoint()).scale(0.5)
}

/// `max |a - a†|` over entries.
pub fn hermitian_residual(a: &ComplexMatrix) -> f64 {
    let adj = a.adjoint();
    a.iter()
        .zip(adj.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Checks `max|M − M†| ≤ tol · max(1, ‖M‖_F)`.
pub fn check_hermitian(a: &ComplexMatrix, tol: f64) -> Result<()> {
    ensure_square(a)?;
    let r = hermitian_residual(a);
    if r <= tol * a.norm().max(1.0) {
        Ok(())
    } else {
        Err(Error::NonHermitian(r))
    }
}

/// Which tensor factor a partial trace keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Partial trace of an operator on `C^d1 ⊗ C^d2`.
pub fn partial_trace(m: &ComplexMatrix, d1: usize, d2: usize, keep: Subsystem) -> Result<ComplexMatrix> {
    let n = ensure_square(m)?;
    if n != d1 * d2 {
        return Err(Error::DimensionMismatch(format!(
            "partial trace of a {n}x{n} matrix over {d1}x{d2}"
        )));
    }
    Ok(match keep {
        Subsystem::First => ComplexMatrix::from_fn(d1, d1, |a, b| {
            (0..d2).map(|k| m[(a * d2 + k, b * d2 + k)]).sum()
        }),
        Subsystem::Second => ComplexMatrix::from_fn(d2, d2, |i, j| {
            (0..d1).map(|k| m[(k * d2 + i, k * d2 + j)]).sum()
        }),
    })
}

/// Matrix exponential (scaling and squaring with a Padé core).
pub fn expm(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    ensure_square(m)?;
    ensure_finite(m)?;
    Ok(m.exp())
}

const FAER_MATMUL_MIN: usize = 16;

/// Matrix product; large operands go through `faer`'s blocked kernels.
pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    assert_eq!(a.ncols(), b.nrows(), "matmul shape mismatch");
    if a.nrows().min(a.ncols()).min(b.ncols()) < FAER_MATMUL_MIN {
        return a * b;
    }
    from_faer((to_faer(a) * to_faer(b)).as_ref())
}

/// Integer power by repeated squaring.
pub fn matrix_power(m: &ComplexMatrix, n: u64) -> Result<ComplexMatrix> {
    let d = ensure_square(m)?;
    let mut result: Option<ComplexMatrix> = None;
    let mut base = m.clone();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => matmul(&r, &base),
            });
        }
        e >>= 1;
        if e > 0 {
            base = matmul(&base, &base);
        }
    }
    Ok(result.unwrap_or_else(|| identity(d)))
}

/// Full SVD `m = U diag(s) V†`, singular values in non-increasing order.
pub fn svd(m: &ComplexMatrix) -> Result<(ComplexMatrix, Vec<f64>, ComplexMatrix)> {
    ensure_finite(m)?;
    let f = to_faer(m);
    let dec = f
        .svd()
        .map_err(|e| Error::NoConvergence(format!("svd: {e:?}")))?;
    let s: Vec<f64> = dec.S().column_vector().iter().map(|z| z.re).collect();
    Ok((from_faer(dec.U()), s, from_faer(dec.V())))
}

pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if m.is_empty() {
        return Ok(Vec::new());
    }
    ensure_finite(m)?;
    to_faer(m)
        .singular_values()
        .map_err(|e| Error::NoConvergence(format!("singular values: {e:?}")))
}

/// Thin SVD of a real matrix, singular values in non-increasing order.
pub fn real_svd(m: &DMatrix<f64>) -> Result<(DMatrix<f64>, Vec<f64>, DMatrix<f64>)> {
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::NoConvergence("matrix has non-finite entries".into()));
    }
    let f = Mat::<f64>::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)]);
    let dec = f
        .thin_svd()
        .map_err(|e| Error::NoConvergence(format!("svd: {e:?}")))?;
    let (u, v) = (dec.U(), dec.V());
    let s = dec.S().column_vector().iter().copied().collect();
    Ok((
        DMatrix::from_fn(u.nrows(), u.ncols(), |i, j| u[(i, j)]),
        s,
        DMatrix::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)]),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Norms {
    pub frobenius: f64,
    pub trace_norm: f64,
    pub operator_norm: f64,
}

pub fn norms(m: &ComplexMatrix) -> Result<Norms> {
    let s = singular_values(m)?;
    Ok(Norms {
        frobenius: m.norm(),
        trace_norm: s.iter().sum(),
        operator_norm: s.iter().copied().fold(0.0, f64::max),
    })
}

pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(m)?.iter().sum())
}

pub fn operator_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(m)?.into_iter().fold(0.0, f64::max))
}

/// Eigenvalues of the Hermitian part of `a`, non-decreasing.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    ensure_square(a)?;
    ensure_finite(a)?;
    to_faer(&hermitian_part(a))
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::NoConvergence(format!("hermitian eigenvalues: {e:?}")))
}

/// Eigenpairs of the Hermitian part of `a`; eigenvectors are the columns.
pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    ensure_square(a)?;
    ensure_finite(a)?;
    let dec = to_faer(&hermitian_part(a))
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::NoConvergence(format!("hermitian eigen: {e:?}")))?;
    let vals = dec.S().column_vector().iter().map(|z| z.re).collect();
    Ok((vals, from_faer(dec.U())))
}

/// Principal square root of a positive semidefinite matrix. Negative
/// eigenvalues from rounding are clamped to zero.
pub fn psd_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (vals, vecs) = hermitian_eigen(a)?;
    let d = vals.len();
    let roots = ComplexMatrix::from_fn(d, d, |i, j| {
        if i == j {
            c(vals[i].max(0.0).sqrt(), 0.0)
        } else {
            ZERO
        }
    });
    Ok(&vecs * roots * vecs.adjoint())
}

/// All eigenvalues of a general square matrix, unordered.
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let n = ensure_square(m)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    ensure_finite(m)?;
    to_faer(m)
        .eigenvalues()
        .map_err(|e| Error::NoConvergence(format!("eigenvalues: {e:?}")))
}

/// Groups indices of `values` by single linkage at distance `tol`.
pub fn cluster_indices(values: &[Complex64], tol: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (values[i] - values[j]).norm() <= tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b] = a;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if root_slot[r] == usize::MAX {
            root_slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_slot[r]].push(i);
    }
    groups
}

/// Angle in `[0, 2π)`, with angles within `1e-9` of `2π` folded to zero.
pub fn phase(z: Complex64) -> f64 {
    let tau = std::f64::consts::TAU;
    let a = z.arg().rem_euclid(tau);
    if tau - a < 1e-9 {
        0.0
    } else {
        a
    }
}

/// Orders by decreasing modulus, then increasing phase.
pub fn spectral_order(a: Complex64, b: Complex64) -> std::cmp::Ordering {
    let (ma, mb) = (a.norm(), b.norm());
    if (ma - mb).abs() > 1e-6 {
        return mb.total_cmp(&ma);
    }
    phase(a).total_cmp(&phase(b))
}

/// One cluster of (numerically) equal eigenvalues with its eigenvectors.
///
/// When the cluster is not defective, `left` is biorthonormal to `right`:
/// `left† · right = I`.
#[derive(Debug, Clone)]
pub struct EigenCluster {
    pub center: Complex64,
    pub values: Vec<Complex64>,
    pub right: ComplexMatrix,
    pub left: ComplexMatrix,
    pub defective: bool,
    pub overlap_condition: f64,
}

impl EigenCluster {
    pub fn multiplicity(&self) -> usize {
        self.values.len()
    }

    /// Spectral projection `R L†`; `None` for defective clusters.
    pub fn projection(&self) -> Option<ComplexMatrix> {
        (!self.defective).then(|| &self.right * self.left.adjoint())
    }
}

#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub clusters: Vec<EigenCluster>,
}

impl EigenSystem {
    pub fn values(&self) -> Vec<Complex64> {
        self.clusters.iter().flat_map(|c| c.values.iter().copied()).collect()
    }

    pub fn is_defective(&self) -> bool {
        self.clusters.iter().any(|c| c.defective)
    }

    /// Right eigenvectors paired index-wise with [`Self::values`]; defective
    /// clusters contribute only as many vectors as their geometric
    /// multiplicity.
    pub fn right_vectors(&self) -> Vec<ComplexVector> {
        self.clusters
            .iter()
            .flat_map(|c| c.right.column_iter().map(|v| v.into_owned()).collect::<Vec<_>>())
            .collect()
    }

    pub fn left_vectors(&self) -> Vec<ComplexVector> {
        self.clusters
            .iter()
            .flat_map(|c| c.left.column_iter().map(|v| v.into_owned()).collect::<Vec<_>>())
            .collect()
    }
}

/// Full eigendecomposition with clustered, biorthonormalized eigenvectors.
pub fn eig(m: &ComplexMatrix) -> Result<EigenSystem> {
    eig_where(m, |_| true)
}

/// Like [`eig`], but eigenvectors are only computed for clusters whose
/// center satisfies `select`; the rest are dropped.
pub fn eig_where(m: &ComplexMatrix, select: impl Fn(Complex64) -> bool) -> Result<EigenSystem> {
    let values = eigenvalues(m)?;
    let scale = m.norm().max(1.0);
    let mut clusters = Vec::new();
    for group in cluster_indices(&values, CLUSTER_TOL) {
        let members: Vec<Complex64> = group.iter().map(|&i| values[i]).collect();
        let center = members.iter().sum::<Complex64>() / members.len() as f64;
        if select(center) {
            clusters.push(cluster_vectors(m, center, members, scale)?);
        }
    }
    clusters.sort_by(|a, b| spectral_order(a.center, b.center));
    Ok(EigenSystem { clusters })
}

fn cluster_vectors(
    m: &ComplexMatrix,
    center: Complex64,
    values: Vec<Complex64>,
    scale: f64,
) -> Result<EigenCluster> {
    let n = m.nrows();
    let k = values.len();
    let shifted = m - identity(n) * center;
    let (u, s, v) = svd(&shifted)?;
    let nullity = s.iter().filter(|&&x| x <= NULL_TOL * scale).count();
    let take = nullity.min(k);
    let right = v.columns(n - take, take).into_owned();
    let left = u.columns(n - take, take).into_owned();
    if take < k || take == 0 {
        return Ok(EigenCluster {
            center,
            values,
            right,
            left,
            defective: true,
            overlap_condition: f64::INFINITY,
        });
    }
    let overlap = left.adjoint() * &right;
    let sv = singular_values(&overlap)?;
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if condition > DEFECT_CONDITION {
        return Ok(EigenCluster {
            center,
            values,
            right,
            left,
            defective: true,
            overlap_condition: condition,
        });
    }
    let inv = overlap
        .try_inverse()
        .ok_or_else(|| Error::NoConvergence("singular eigenvector overlap".into()))?;
    let left = left * inv.adjoint();
    Ok(EigenCluster {
        center,
        values,
        right,
        left,
        defective: false,
        overlap_condition: condition,
    })
}

/// Hermitian, Hilbert–Schmidt-orthonormal basis of the complex span of
/// `span`, assuming that span is closed under `†`.
///
/// The Hermitian and anti-Hermitian parts of every element are flattened
/// into real vectors and the basis is read off their SVD; directions with
/// singular value at most `rank_tol` times the largest are dropped.
pub fn hermitian_basis(span: &[ComplexMatrix], rank_tol: f64) -> Result<Vec<ComplexMatrix>> {
    let Some(first) = span.first() else {
        return Ok(Vec::new());
    };
    let d = first.nrows();
    let parts: Vec<ComplexMatrix> = span
        .iter()
        .flat_map(|x| {
            let adj = x.adjoint();
            [(x + &adj).scale(0.5), (x - &adj) * c(0.0, -0.5)]
        })
        .collect();
    let flat = DMatrix::from_fn(2 * d * d, parts.len(), |i, j| {
        let z = parts[j][((i / 2) / d, (i / 2) % d)];
        if i % 2 == 0 {
            z.re
        } else {
            z.im
        }
    });
    let (u, s, _) = real_svd(&flat)?;
    let largest = s.first().copied().unwrap_or(0.0);
    Ok(s.iter()
        .take_while(|&&x| x > rank_tol * largest && largest > 0.0)
        .enumerate()
        .map(|(k, _)| {
            let b = ComplexMatrix::from_fn(d, d, |r, col| {
                let i = 2 * (r * d + col);
                c(u[(i, k)], u[(i + 1, k)])
            });
            hermitian_part(&b)
        })
        .collect())
}
