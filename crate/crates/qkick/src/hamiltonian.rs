//! Hermitian generators, their adjoint action, operator Schmidt
//! decompositions and a seeded random ensemble.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channel::Superoperator;
use crate::error::{Error, Result};
use crate::numerics::{
    c, check_hermitian, expm, hermitian_part, identity, kron, operator_norm, real_svd, ComplexMatrix, I,
    ONE, ZERO,
};

const HERMITIAN_TOL: f64 = 1e-12;

/// A Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    matrix: ComplexMatrix,
}

impl Hamiltonian {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        crate::numerics::ensure_finite(&matrix)?;
        check_hermitian(&matrix, HERMITIAN_TOL)?;
        Ok(Self {
            matrix: hermitian_part(&matrix),
        })
    }

    /// Parses sums of Pauli strings such as `"ZZ"`, `"XZ+ZI"` or
    /// `"0.5*XX - 0.25*YY + ZI"`.
    pub fn from_pauli(expr: &str) -> Result<Self> {
        let mut total: Option<ComplexMatrix> = None;
        for (coef, word) in pauli_terms(expr)? {
            let mut op = identity(1);
            for ch in word.chars() {
                op = kron(&op, &pauli(ch)?);
            }
            let op = op.scale(coef);
            total = Some(match total {
                None => op,
                Some(t) if t.shape() == op.shape() => t + op,
                Some(_) => {
                    return Err(Error::Parse(format!("Pauli terms of different lengths in {expr:?}")));
                }
            });
        }
        Self::new(total.ok_or_else(|| Error::Parse("empty Pauli expression".into()))?)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &Hamiltonian) -> Hamiltonian {
        Hamiltonian {
            matrix: kron(&self.matrix, &other.matrix),
        }
    }

    /// `e^{-itH}`.
    pub fn propagator(&self, t: f64) -> Result<ComplexMatrix> {
        expm(&(&self.matrix * c(0.0, -t)))
    }
}

fn pauli(ch: char) -> Result<ComplexMatrix> {
    let m = |a, b, c_, d| ComplexMatrix::from_row_slice(2, 2, &[a, b, c_, d]);
    Ok(match ch.to_ascii_uppercase() {
        'I' => m(ONE, ZERO, ZERO, ONE),
        'X' => m(ZERO, ONE, ONE, ZERO),
        'Y' => m(ZERO, -I, I, ZERO),
        'Z' => m(ONE, ZERO, ZERO, -ONE),
        other => return Err(Error::Parse(format!("unknown Pauli letter {other:?}"))),
    })
}

fn pauli_terms(expr: &str) -> Result<Vec<(f64, String)>> {
    let compact: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    let mut terms = Vec::new();
    let mut sign = 1.0;
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        } else if let Some(r) = rest.strip_prefix('-') {
            sign = -sign;
            rest = r;
        }
        let split = rest.find(|ch: char| ch.is_ascii_alphabetic()).unwrap_or(rest.len());
        let (num, tail) = rest.split_at(split);
        let num = num.strip_suffix('*').unwrap_or(num);
        let coef = if num.is_empty() {
            1.0
        } else {
            num.parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad coefficient {num:?} in {expr:?}")))?
        };
        let end = tail.find(['+', '-']).unwrap_or(tail.len());
        let word = &tail[..end];
        if word.is_empty() {
            return Err(Error::Parse(format!("missing Pauli string in {expr:?}")));
        }
        terms.push((sign * coef, word.to_string()));
        sign = 1.0;
        rest = &tail[end..];
    }
    Ok(terms)
}

/// `[H, ·]` as the superoperator `H ⊗ I − I ⊗ Hᵀ`.
pub fn adjoint_rep(h: &Hamiltonian) -> Superoperator {
    let d = h.dim();
    let id = identity(d);
    let m = kron(&h.matrix, &id) - kron(&id, &h.matrix.transpose());
    Superoperator::from_matrix(d, m).expect("square by construction")
}

/// Orthonormal Hermitian basis of `d×d` matrices: `I/√d` followed by the
/// normalized generalized Gell-Mann matrices (symmetric, antisymmetric,
/// diagonal).
pub fn hermitian_operator_basis(d: usize) -> Vec<ComplexMatrix> {
    let mut basis = vec![identity(d).unscale((d as f64).sqrt())];
    let r = std::f64::consts::FRAC_1_SQRT_2;
    for j in 0..d {
        for k in j + 1..d {
            let mut m = ComplexMatrix::zeros(d, d);
            m[(j, k)] = c(r, 0.0);
            m[(k, j)] = c(r, 0.0);
            basis.push(m);
        }
    }
    for j in 0..d {
        for k in j + 1..d {
            let mut m = ComplexMatrix::zeros(d, d);
            m[(j, k)] = c(0.0, -r);
            m[(k, j)] = c(0.0, r);
            basis.push(m);
        }
    }
    for l in 1..d {
        let norm = ((l * (l + 1)) as f64).sqrt();
        let mut m = ComplexMatrix::zeros(d, d);
        for k in 0..l {
            m[(k, k)] = c(1.0 / norm, 0.0);
        }
        m[(l, l)] = c(-(l as f64) / norm, 0.0);
        basis.push(m);
    }
    basis
}

/// `H = c·I⊗I + H₁⊗I + I⊗H₂ + Σᵢ h₁⁽ⁱ⁾⊗h₂⁽ⁱ⁾` with traceless Hermitian parts.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub d1: usize,
    pub d2: usize,
    pub identity_coefficient: f64,
    pub h1: ComplexMatrix,
    pub h2: ComplexMatrix,
    pub terms: Vec<(ComplexMatrix, ComplexMatrix)>,
}

impl SchmidtDecomposition {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let (i1, i2) = (identity(self.d1), identity(self.d2));
        let mut h = kron(&i1, &i2).scale(self.identity_coefficient) + kron(&self.h1, &i2) + kron(&i1, &self.h2);
        for (a, b) in &self.terms {
            h += kron(a, b);
        }
        h
    }
}

const SCHMIDT_RANK_TOL: f64 = 1e-12;

pub fn schmidt(h: &Hamiltonian, d1: usize, d2: usize) -> Result<SchmidtDecomposition> {
    if d1 == 0 || d2 == 0 || d1 * d2 != h.dim() {
        return Err(Error::DimensionMismatch(format!(
            "cannot factor dimension {} as {d1}x{d2}",
            h.dim()
        )));
    }
    let b1 = hermitian_operator_basis(d1);
    let b2 = hermitian_operator_basis(d2);
    let hm = h.matrix();
    // coefficients tr((G_a ⊗ G_b) H) are real for Hermitian H and basis
    let coef = DMatrix::<f64>::from_fn(b1.len(), b2.len(), |a, b| {
        (kron(&b1[a], &b2[b]) * hm).trace().re
    });
    let (s1, s2) = ((d1 as f64).sqrt(), (d2 as f64).sqrt());
    let combine = |basis: &[ComplexMatrix], weights: &mut dyn Iterator<Item = f64>| -> ComplexMatrix {
        let d = basis[0].nrows();
        basis[1..]
            .iter()
            .zip(weights)
            .fold(ComplexMatrix::zeros(d, d), |acc, (g, w)| acc + g.scale(w))
    };
    let h1 = combine(&b1, &mut (1..b1.len()).map(|a| coef[(a, 0)] / s2));
    let h2 = combine(&b2, &mut (1..b2.len()).map(|b| coef[(0, b)] / s1));

    let mut terms = Vec::new();
    if b1.len() > 1 && b2.len() > 1 {
        let block = coef.view((1, 1), (b1.len() - 1, b2.len() - 1)).into_owned();
        let (u, s, v) = real_svd(&block)?;
        let scale = block.norm().max(1.0);
        for (k, &sigma) in s.iter().enumerate() {
            if sigma <= SCHMIDT_RANK_TOL * scale {
                continue;
            }
            let w = sigma.sqrt();
            let mut a = combine(&b1, &mut u.column(k).iter().map(|x| x * w));
            let mut b = combine(&b2, &mut v.column(k).iter().map(|x| x * w));
            if leading_sign(&a) < 0.0 {
                a = -a;
                b = -b;
            }
            terms.push((a, b));
        }
    }
    Ok(SchmidtDecomposition {
        d1,
        d2,
        identity_coefficient: coef[(0, 0)] / (s1 * s2),
        h1,
        h2,
        terms,
    })
}

/// Sign of the first entry of `a` (row-major) that is not negligible:
/// its real part, or its imaginary part when the entry is imaginary.
fn leading_sign(a: &ComplexMatrix) -> f64 {
    let tol = 1e-12 * a.norm().max(1e-300);
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            let z = a[(i, j)];
            if z.norm() > tol {
                return if z.re.abs() > tol { z.re.signum() } else { z.im.signum() };
            }
        }
    }
    1.0
}

/// Draws Hermitian matrices from a seeded stream: complex Gaussian entries,
/// Hermitized and scaled to unit operator norm.
#[derive(Debug, Clone)]
pub struct HamiltonianSampler {
    rng: ChaCha8Rng,
}

impl HamiltonianSampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn sample(&mut self, d: usize) -> Result<Hamiltonian> {
        random_hamiltonian_with(&mut self.rng, d)
    }
}

/// One draw of the ensemble from a fresh generator seeded with `seed`.
pub fn random_hamiltonian(d: usize, seed: u64) -> Result<Hamiltonian> {
    HamiltonianSampler::new(seed).sample(d)
}

pub fn random_hamiltonian_with<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Result<Hamiltonian> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("random Hamiltonian needs d ≥ 2, got {d}")));
    }
    let g = ComplexMatrix::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im)
    });
    let h = hermitian_part(&g);
    let norm = operator_norm(&h)?;
    Ok(Hamiltonian {
        matrix: hermitian_part(&h.unscale(norm)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{hs_inner, matrix_unit};

    #[test]
    fn pauli_parsing() {
        let zz = Hamiltonian::from_pauli("ZZ").unwrap();
        assert_eq!(zz.dim(), 4);
        let diag: Vec<f64> = (0..4).map(|i| zz.matrix()[(i, i)].re).collect();
        assert_eq!(diag, vec![1.0, -1.0, -1.0, 1.0]);
        let mixed = Hamiltonian::from_pauli("0.5*XZ - ZI + 2IY").unwrap();
        let expected = kron(&pauli('X').unwrap(), &pauli('Z').unwrap()).scale(0.5)
            - kron(&pauli('Z').unwrap(), &identity(2))
            + kron(&identity(2), &pauli('Y').unwrap()).scale(2.0);
        assert!((mixed.matrix() - expected).norm() < 1e-15);
        assert!(Hamiltonian::from_pauli("ZQ").is_err());
        assert!(Hamiltonian::from_pauli("Z+ZZ").is_err());
        assert!(Hamiltonian::from_pauli("").is_err());
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = matrix_unit(2, 0, 1);
        assert!(matches!(Hamiltonian::new(m), Err(Error::NonHermitian(_))));
    }

    #[test]
    fn adjoint_of_z() {
        let z = Hamiltonian::from_pauli("Z").unwrap();
        let ad = adjoint_rep(&z);
        let mut expected = ComplexMatrix::zeros(4, 4);
        expected[(1, 1)] = c(2.0, 0.0);
        expected[(2, 2)] = c(-2.0, 0.0);
        assert_eq!(ad.matrix(), &expected);
        // [Z, |i⟩⟨j|] computed directly
        for i in 0..2 {
            for j in 0..2 {
                let e = matrix_unit(2, i, j);
                let direct = z.matrix() * &e - &e * z.matrix();
                assert_eq!(ad.apply(&e).unwrap(), direct);
            }
        }
        let id = Hamiltonian::new(identity(3)).unwrap();
        assert_eq!(adjoint_rep(&id).matrix().norm(), 0.0);
    }

    #[test]
    fn gell_mann_basis_is_orthonormal() {
        for d in 1..5 {
            let b = hermitian_operator_basis(d);
            assert_eq!(b.len(), d * d);
            for (i, x) in b.iter().enumerate() {
                assert!(crate::numerics::hermitian_residual(x) == 0.0);
                if i > 0 {
                    assert!(x.trace().norm() < 1e-15);
                }
                for (j, y) in b.iter().enumerate() {
                    let ip = hs_inner(x, y);
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((ip - c(expected, 0.0)).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn schmidt_examples() {
        let zz = Hamiltonian::from_pauli("ZZ").unwrap();
        let s = schmidt(&zz, 2, 2).unwrap();
        assert!(s.h1.norm() < 1e-14 && s.h2.norm() < 1e-14);
        assert_eq!(s.terms.len(), 1);
        let (a, b) = &s.terms[0];
        assert!((kron(a, b) - zz.matrix()).norm() < 1e-12);
        assert!((a.norm() - b.norm()).abs() < 1e-12);
        assert!((a - pauli('Z').unwrap()).norm() < 1e-12);

        let local = Hamiltonian::from_pauli("ZI + IX").unwrap();
        let s = schmidt(&local, 2, 2).unwrap();
        assert!(s.terms.is_empty());
        assert!((&s.h1 - pauli('Z').unwrap()).norm() < 1e-12);
        assert!((&s.h2 - pauli('X').unwrap()).norm() < 1e-12);
        assert!(s.identity_coefficient.abs() < 1e-14);

        let y = Hamiltonian::from_pauli("YY").unwrap();
        let (a, _) = &schmidt(&y, 2, 2).unwrap().terms[0];
        assert!(a[(0, 1)].im > 0.0 || a[(0, 1)].re > 0.0);

        assert!(schmidt(&zz, 3, 2).is_err());
    }

    #[test]
    fn schmidt_reconstructs_random_operators() {
        let mut sampler = HamiltonianSampler::new(7);
        for (d1, d2) in [(2, 2), (2, 3), (3, 2)] {
            let h = sampler.sample(d1 * d2).unwrap();
            let h = Hamiltonian::new(h.matrix() + identity(d1 * d2).scale(0.3)).unwrap();
            let s = schmidt(&h, d1, d2).unwrap();
            assert!((s.reconstruct() - h.matrix()).norm() < 1e-10);
            assert!((s.identity_coefficient - h.matrix().trace().re / (d1 * d2) as f64).abs() < 1e-12);
            assert!(s.terms.len() <= (d1 * d1 - 1).min(d2 * d2 - 1));
        }
    }

    #[test]
    fn random_hamiltonians_are_normalized_and_deterministic() {
        let a = random_hamiltonian(2, 42).unwrap();
        let b = random_hamiltonian(2, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_hamiltonian(2, 43).unwrap());
        assert!((operator_norm(a.matrix()).unwrap() - 1.0).abs() < 1e-12);
        assert!(random_hamiltonian(1, 0).is_err());
    }

    #[test]
    fn adjoint_exponential_is_conjugation() {
        let h = random_hamiltonian(3, 5).unwrap();
        let t = 0.8;
        let via_super = expm(&(adjoint_rep(&h).matrix() * c(0.0, -t))).unwrap();
        let u = h.propagator(t).unwrap();
        let conj = Superoperator::conjugation(&u).unwrap();
        assert!((via_super - conj.matrix()).norm() < 1e-12);
        let x = ComplexMatrix::from_fn(3, 3, |i, j| c(i as f64 - 0.5 * j as f64, (i * j) as f64));
        let direct = &u * &x * u.adjoint();
        assert!((conj.apply(&x).unwrap() - direct).norm() < 1e-12);
    }
}
