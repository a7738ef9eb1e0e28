use crate::channel::Superoperator;
use crate::error::{Error, Result};
use crate::numerics::{trace_norm, ComplexMatrix};

/// Choi state of `s` with the second tensor factor removed from both the
/// output and the ancilla leg. The result is indexed by
/// `(out₁, anc₁)` pairs, i.e. `d1² × d1²`.
pub fn reduced_choi(s: &Superoperator, d1: usize, d2: usize) -> Result<ComplexMatrix> {
    let big = s.dim();
    if d1 == 0 || d2 == 0 || d1 * d2 != big {
        return Err(Error::DimensionMismatch(format!(
            "cannot split dimension {big} as {d1}x{d2}"
        )));
    }
    let choi = s.choi();
    let lam = choi.matrix();
    let idx = |o1: usize, o2: usize, a1: usize, a2: usize| (o1 * d2 + o2) * big + (a1 * d2 + a2);
    Ok(ComplexMatrix::from_fn(d1 * d1, d1 * d1, |r, c| {
        let (o1, a1) = (r / d1, r % d1);
        let (p1, b1) = (c / d1, c % d1);
        let mut acc = crate::numerics::ZERO;
        for o2 in 0..d2 {
            for a2 in 0..d2 {
                acc += lam[(idx(o1, o2, a1, a2), idx(p1, o2, b1, a2))];
            }
        }
        acc
    }))
}

/// `‖Λ₁‖_F²` for the reduced Choi state of [`reduced_choi`].
pub fn reduced_choi_purity(s: &Superoperator, d1: usize, d2: usize) -> Result<f64> {
    Ok(reduced_choi(s, d1, d2)?.norm_squared())
}

/// `‖Λ(a) − Λ(b)‖₁`.
pub fn choi_distance(a: &Superoperator, b: &Superoperator) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "channels on dimensions {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    trace_norm(&(a.choi().matrix() - b.choi().matrix()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::KrausChannel;
    use crate::hamiltonian::random_hamiltonian;
    use crate::numerics::matrix_unit;

    fn depolarizing(d: usize) -> Superoperator {
        let kraus = (0..d)
            .flat_map(|a| (0..d).map(move |b| matrix_unit(d, a, b).scale(1.0 / (d as f64).sqrt())))
            .collect();
        KrausChannel::new(kraus).unwrap().superoperator().clone()
    }

    #[test]
    fn product_unitary_is_pure() {
        let u1 = random_hamiltonian(2, 1).unwrap().propagator(0.4).unwrap();
        let u2 = random_hamiltonian(3, 2).unwrap().propagator(1.1).unwrap();
        let s = Superoperator::conjugation(&u1.kronecker(&u2)).unwrap();
        assert!((reduced_choi_purity(&s, 2, 3).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn depolarizing_on_both_factors() {
        for (d1, d2) in [(2, 2), (2, 3), (3, 2)] {
            let p = reduced_choi_purity(&depolarizing(d1 * d2), d1, d2).unwrap();
            assert!((p - 1.0 / (d1 * d1) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn reduction_agrees_with_partial_trace_after_reordering() {
        // For a product channel A ⊗ B the reduced Choi state is Λ(A).
        let a = depolarizing(2).mix(0.3, &Superoperator::identity(2)).unwrap();
        let b = depolarizing(2);
        let s = Superoperator::from_map(4, |x| {
            let mut out = ComplexMatrix::zeros(4, 4);
            for i in 0..2 {
                for j in 0..2 {
                    let blk = x.view((2 * i, 2 * j), (2, 2)).into_owned();
                    let left = a.apply(&matrix_unit(2, i, j)).unwrap();
                    out += left.kronecker(&b.apply(&blk).unwrap());
                }
            }
            out
        })
        .unwrap();
        let r = reduced_choi(&s, 2, 2).unwrap();
        assert!((r - a.choi().matrix()).norm() < 1e-12);
    }

    #[test]
    fn distances() {
        let s = depolarizing(2);
        assert_eq!(choi_distance(&s, &s).unwrap(), 0.0);
        let id = Superoperator::identity(2);
        // Λ(id) is pure and Λ(dep) = I/4, so ‖·‖₁ = 3/4 + 3·1/4
        assert!((choi_distance(&s, &id).unwrap() - 1.5).abs() < 1e-12);
        assert!(choi_distance(&s, &Superoperator::identity(3)).is_err());
    }
}
