//! Built-in example channels with their expected classification and
//! witness Hamiltonians.
//!
//! | name         | space   | action                                                |
//! |--------------|---------|-------------------------------------------------------|
//! | `E_omega`    | 2 ⊗ k   | `A ↦ tr₂(A) ⊗ Ω`                                      |
//! | `E_half`     | 2 ⊗ 2   | `E_omega` with `Ω = I/2`                              |
//! | `E_df`       | 2⊗2⊗2   | swaps the `|0⟩⟨0|` and `|1⟩⟨1|` blocks, rotating qubit 2 |
//! | `E_dephase`  | d       | `Σ_i |i⟩⟨i| A |i⟩⟨i|`                                  |
//! | `E_hook`     | 3       | `{|0⟩⟨1|, |1⟩⟨0|, |0⟩⟨2|}`                             |
//! | `E_updown`   | 2       | `{|0⟩⟨1|, |1⟩⟨0|}`                                     |
//! | `E_triangle` | 3       | `{|0⟩⟨1|, |1⟩⟨2|, |2⟩⟨0|}`                             |
//! | `E_square`   | 3       | `{|2⟩⟨0|, |2⟩⟨1|, √p|0⟩⟨2|, √(1−p)|1⟩⟨2|}`              |
//! | `P_rho`      | d       | `A ↦ tr(A) ρ*`                                        |
//!
//! Specs look like `E_square(p=0.3)`, `P_rho(diag=0.7:0.3)` or
//! `E_dephase(d=3)`, optionally prefixed with `zoo:`.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::channel::KrausChannel;
use crate::classify::Classification;
use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;
use crate::numerics::{c, hermitian_eigen, identity, kron, matrix_unit, ComplexMatrix, ZERO};

/// The eight channels of the classification table, in table order.
pub const TABLE_NAMES: [&str; 8] = [
    "E_omega",
    "E_df",
    "E_dephase",
    "E_hook",
    "E_updown",
    "E_triangle",
    "E_square",
    "P_rho",
];

#[derive(Debug, Clone, PartialEq)]
pub enum Expectation {
    /// Kicking the channel as a bath with this Hamiltonian decouples (or not).
    Decoupling { works: bool },
    /// The Zeno Hamiltonian of the channel with this Hamiltonian vanishes (or not).
    Suppression { suppressed: bool },
}

#[derive(Debug, Clone)]
pub struct Witness {
    pub label: String,
    pub hamiltonian: Hamiltonian,
    pub expectation: Expectation,
}

#[derive(Debug, Clone)]
pub struct ZooEntry {
    pub name: String,
    pub channel: KrausChannel,
    pub expected: Classification,
    pub witnesses: Vec<Witness>,
}

/// Parameters for the parametrized channels; unset fields take defaults.
#[derive(Debug, Clone, Default)]
pub struct ZooParams {
    pub p: Option<f64>,
    pub d: Option<usize>,
    /// `ρ*` for `P_rho`, `Ω` for `E_omega`.
    pub state: Option<ComplexMatrix>,
    pub df: Option<DfParams>,
}

#[derive(Debug, Clone)]
pub struct DfParams {
    pub u0: ComplexMatrix,
    pub u1: ComplexMatrix,
    pub rho0: ComplexMatrix,
    pub rho1: ComplexMatrix,
}

impl Default for DfParams {
    fn default() -> Self {
        let h = FRAC_1_SQRT_2;
        let (cs, sn) = (0.3f64.cos(), 0.3f64.sin());
        Self {
            u0: ComplexMatrix::from_row_slice(2, 2, &[c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)]),
            u1: ComplexMatrix::from_row_slice(2, 2, &[c(cs, 0.0), c(-sn, 0.0), c(sn, 0.0), c(cs, 0.0)]),
            rho0: diag(&[0.7, 0.3]),
            rho1: ComplexMatrix::from_row_slice(2, 2, &[c(0.4, 0.0), c(0.1, 0.0), c(0.1, 0.0), c(0.6, 0.0)]),
        }
    }
}

impl ZooParams {
    /// Parses `key=value` pairs separated by commas. Keys: `p`, `d` and
    /// `diag` (colon-separated diagonal of `ρ*` or `Ω`).
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = Self::default();
        for pair in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {pair:?}")))?;
            let bad = || Error::Parse(format!("bad value for {key}: {value:?}"));
            match key.trim() {
                "p" => out.p = Some(value.trim().parse().map_err(|_| bad())?),
                "d" => out.d = Some(value.trim().parse().map_err(|_| bad())?),
                "diag" => {
                    let entries = value
                        .split(':')
                        .map(|x| x.trim().parse::<f64>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|_| bad())?;
                    out.state = Some(diag(&entries));
                }
                other => return Err(Error::InvalidParameter(format!("unknown parameter {other:?}"))),
            }
        }
        Ok(out)
    }
}

fn diag(values: &[f64]) -> ComplexMatrix {
    let n = values.len();
    ComplexMatrix::from_fn(n, n, |i, j| if i == j { c(values[i], 0.0) } else { ZERO })
}

/// Parses `NAME` or `NAME(params)`, with an optional `zoo:` prefix.
pub fn from_spec(spec: &str) -> Result<ZooEntry> {
    let spec = spec.trim();
    let spec = spec.strip_prefix("zoo:").unwrap_or(spec);
    let (name, params) = match spec.split_once('(') {
        Some((name, rest)) => {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in {spec:?}")))?;
            (name.trim(), ZooParams::parse(inner)?)
        }
        None => (spec, ZooParams::default()),
    };
    builtin(name, &params)
}

/// The eight table channels with default parameters.
pub fn all() -> Vec<ZooEntry> {
    TABLE_NAMES
        .iter()
        .map(|n| builtin(n, &ZooParams::default()).expect("defaults are valid"))
        .collect()
}

pub fn builtin(name: &str, params: &ZooParams) -> Result<ZooEntry> {
    match name {
        "E_omega" => e_omega(params, "E_omega"),
        "E_half" => e_omega(
            &ZooParams {
                state: Some(identity(2).scale(0.5)),
                ..ZooParams::default()
            },
            "E_half",
        ),
        "E_df" => e_df(params),
        "E_dephase" => e_dephase(params),
        "E_hook" => Ok(fixed_kraus(
            "E_hook",
            3,
            &[(0, 1), (1, 0), (0, 2)],
            expected(1, 2, [false, false, true, true], Some(vec![2])),
            Vec::new(),
        )),
        "E_updown" => Ok(fixed_kraus(
            "E_updown",
            2,
            &[(0, 1), (1, 0)],
            expected(1, 2, [false, true, true, true], Some(vec![2])),
            vec![Witness {
                label: "pauli:XZ+ZI".into(),
                hamiltonian: Hamiltonian::from_pauli("XZ+ZI")?,
                expectation: Expectation::Decoupling { works: true },
            }],
        )),
        "E_triangle" => Ok(fixed_kraus(
            "E_triangle",
            3,
            &[(0, 1), (1, 2), (2, 0)],
            expected(1, 3, [false, true, true, true], Some(vec![3])),
            Vec::new(),
        )),
        "E_square" => e_square(params),
        "P_rho" => p_rho(params),
        other => Err(Error::UnknownName(other.to_string())),
    }
}

fn expected(dim_fixed: usize, dim_recurrent: usize, profile: [bool; 4], cycles: Option<Vec<usize>>) -> Classification {
    let [mixing, irreducible, ergodic, dfs_free] = profile;
    Classification {
        name: None,
        dim_fixed,
        dim_recurrent,
        ergodic,
        mixing,
        irreducible,
        dfs_free,
        cycle_lengths: cycles,
    }
}

fn fixed_kraus(
    name: &str,
    d: usize,
    units: &[(usize, usize)],
    expected: Classification,
    witnesses: Vec<Witness>,
) -> ZooEntry {
    let kraus = units.iter().map(|&(i, j)| matrix_unit(d, i, j)).collect();
    entry(name, KrausChannel::new(kraus).expect("valid Kraus list"), expected, witnesses)
}

fn entry(name: &str, channel: KrausChannel, expected: Classification, witnesses: Vec<Witness>) -> ZooEntry {
    ZooEntry {
        name: name.to_string(),
        channel: channel.with_name(name),
        expected: expected.with_name(name),
        witnesses,
    }
}

/// Checks that `rho` is a density matrix and returns its eigenpairs.
pub fn validate_state(rho: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    crate::numerics::check_hermitian(rho, 1e-10)
        .map_err(|_| Error::InvalidParameter("state is not Hermitian".into()))?;
    let (vals, vecs) = hermitian_eigen(rho)?;
    let tr: f64 = vals.iter().sum();
    if vals.iter().any(|&x| x < -1e-12) || (tr - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParameter(format!(
            "not a density matrix: eigenvalues {vals:?}"
        )));
    }
    Ok((vals, vecs))
}

/// Kraus operators `√λ_m |v_m⟩⟨j|` of the replacement map `A ↦ tr(A) ρ`.
fn replacement_kraus(rho: &ComplexMatrix) -> Result<Vec<ComplexMatrix>> {
    let (vals, vecs) = validate_state(rho)?;
    let d = rho.nrows();
    let mut out = Vec::new();
    for (m, &lam) in vals.iter().enumerate() {
        if lam <= 0.0 {
            continue;
        }
        for j in 0..d {
            let mut k = ComplexMatrix::zeros(d, d);
            k.set_column(j, &vecs.column(m).scale(lam.sqrt()));
            out.push(k);
        }
    }
    Ok(out)
}

fn e_omega(params: &ZooParams, name: &str) -> Result<ZooEntry> {
    let omega = params.state.clone().unwrap_or_else(|| identity(2).scale(0.5));
    let k = omega.nrows();
    let kraus: Vec<ComplexMatrix> = replacement_kraus(&omega)?
        .iter()
        .map(|r| kron(&identity(2), r))
        .collect();
    let channel = KrausChannel::new(kraus)?;
    let mut witnesses = vec![Witness {
        label: "pauli:ZI".into(),
        hamiltonian: Hamiltonian::new(kron(&pauli_z(), &identity(k)))?,
        expectation: Expectation::Suppression { suppressed: false },
    }];
    if k == 2 {
        witnesses.push(Witness {
            label: "pauli:ZZI".into(),
            hamiltonian: Hamiltonian::from_pauli("ZZI")?,
            expectation: Expectation::Decoupling { works: false },
        });
    }
    Ok(entry(name, channel, expected(4, 4, [false; 4], None), witnesses))
}

fn pauli_z() -> ComplexMatrix {
    diag(&[1.0, -1.0])
}

fn e_df(params: &ZooParams) -> Result<ZooEntry> {
    let p = params.df.clone().unwrap_or_default();
    for u in [&p.u0, &p.u1] {
        if u.shape() != (2, 2) || (u.adjoint() * u - identity(2)).norm() > 1e-10 {
            return Err(Error::InvalidParameter("E_df needs 2x2 unitaries".into()));
        }
    }
    let mut kraus = Vec::new();
    for (from, to, u, rho) in [(0, 1, &p.u1, &p.rho1), (1, 0, &p.u0, &p.rho0)] {
        if rho.shape() != (2, 2) {
            return Err(Error::InvalidParameter("E_df needs qubit states".into()));
        }
        let jump = matrix_unit(2, to, from);
        for r in replacement_kraus(rho)? {
            kraus.push(kron(&kron(&jump, u), &r));
        }
    }
    let channel = KrausChannel::new(kraus)?;
    let witnesses = vec![Witness {
        label: "pauli:IZI".into(),
        hamiltonian: Hamiltonian::from_pauli("IZI")?,
        expectation: Expectation::Suppression { suppressed: false },
    }];
    Ok(entry("E_df", channel, expected(2, 8, [false; 4], None), witnesses))
}

fn e_dephase(params: &ZooParams) -> Result<ZooEntry> {
    let d = params.d.unwrap_or(2);
    if d < 2 {
        return Err(Error::InvalidParameter(format!("E_dephase needs d ≥ 2, got {d}")));
    }
    let kraus = (0..d).map(|i| matrix_unit(d, i, i)).collect();
    let mut witnesses = Vec::new();
    if d == 2 {
        witnesses.push(Witness {
            label: "pauli:ZZ".into(),
            hamiltonian: Hamiltonian::from_pauli("ZZ")?,
            expectation: Expectation::Decoupling { works: false },
        });
    }
    Ok(entry(
        "E_dephase",
        KrausChannel::new(kraus)?,
        expected(d, d, [false, false, false, true], Some(vec![1; d])),
        witnesses,
    ))
}

fn e_square(params: &ZooParams) -> Result<ZooEntry> {
    let p = params.p.unwrap_or(0.5);
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!("E_square needs p in (0, 1), got {p}")));
    }
    let kraus = vec![
        matrix_unit(3, 2, 0),
        matrix_unit(3, 2, 1),
        matrix_unit(3, 0, 2).scale(p.sqrt()),
        matrix_unit(3, 1, 2).scale((1.0 - p).sqrt()),
    ];
    let witnesses = vec![Witness {
        label: "X⊗diag(1,-1,0)".into(),
        hamiltonian: Hamiltonian::new(kron(&pauli_x(), &diag(&[1.0, -1.0, 0.0])))?,
        expectation: Expectation::Decoupling { works: true },
    }];
    Ok(entry(
        "E_square",
        KrausChannel::new(kraus)?,
        expected(1, 2, [false, true, true, true], Some(vec![2])),
        witnesses,
    ))
}

fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[ZERO, c(1.0, 0.0), c(1.0, 0.0), ZERO])
}

fn p_rho(params: &ZooParams) -> Result<ZooEntry> {
    let rho = match (&params.state, params.d) {
        (Some(rho), _) => rho.clone(),
        (None, Some(d)) if d >= 1 => identity(d).unscale(d as f64),
        (None, Some(_)) => return Err(Error::InvalidParameter("P_rho needs d ≥ 1".into())),
        (None, None) => identity(2).scale(0.5),
    };
    let (vals, _) = validate_state(&rho)?;
    let full_rank = vals.iter().all(|&x| x > 1e-10);
    Ok(entry(
        "P_rho",
        KrausChannel::new(replacement_kraus(&rho)?)?,
        expected(1, 1, [true, full_rank, true, true], Some(vec![1])),
        Vec::new(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::Superoperator;
    use crate::numerics::{partial_trace, Subsystem};

    #[test]
    fn every_entry_is_cptp() {
        for e in all() {
            let r = e.channel.validate().unwrap();
            assert!(r.passed, "{} failed validation: {r:?}", e.name);
            assert!(e.expected.is_consistent(), "{}", e.name);
        }
    }

    #[test]
    fn spec_parsing() {
        let e = from_spec("zoo:E_square(p=0.25)").unwrap();
        assert_eq!(e.name, "E_square");
        assert!((e.channel.kraus()[2][(0, 2)].re - 0.5).abs() < 1e-15);
        assert_eq!(from_spec("E_dephase(d=3)").unwrap().channel.dim(), 3);
        assert!(matches!(from_spec("E_nope"), Err(Error::UnknownName(_))));
        assert!(matches!(from_spec("E_square(p=1.5)"), Err(Error::InvalidParameter(_))));
        assert!(matches!(from_spec("E_square(q=0.5)"), Err(Error::InvalidParameter(_))));
        assert!(from_spec("E_square(p=0.5").is_err());
        assert!(matches!(from_spec("P_rho(diag=0.7:0.7)"), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn replacement_channels_match_their_action() {
        let rho = ComplexMatrix::from_row_slice(2, 2, &[c(0.6, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.4, 0.0)]);
        let e = builtin(
            "P_rho",
            &ZooParams {
                state: Some(rho.clone()),
                ..ZooParams::default()
            },
        )
        .unwrap();
        let s = e.channel.superoperator();
        let oracle = Superoperator::from_map(2, |a| rho.clone() * a.trace()).unwrap();
        assert!((s.matrix() - oracle.matrix()).norm() < 1e-12);

        let omega = diag(&[0.7, 0.3]);
        let e = builtin(
            "E_omega",
            &ZooParams {
                state: Some(omega.clone()),
                ..ZooParams::default()
            },
        )
        .unwrap();
        let oracle = Superoperator::from_map(4, |a| {
            kron(&partial_trace(a, 2, 2, Subsystem::First).unwrap(), &omega)
        })
        .unwrap();
        assert!((e.channel.superoperator().matrix() - oracle.matrix()).norm() < 1e-12);
    }

    #[test]
    fn df_matches_its_action() {
        let p = DfParams::default();
        let e = builtin("E_df", &ZooParams::default()).unwrap();
        let oracle = Superoperator::from_map(8, |a| {
            // a = Σ |i⟩⟨j| ⊗ A_ij over the first qubit
            let block = |i: usize, j: usize| a.view((4 * i, 4 * j), (4, 4)).into_owned();
            let a00 = partial_trace(&block(0, 0), 2, 2, Subsystem::First).unwrap();
            let a11 = partial_trace(&block(1, 1), 2, 2, Subsystem::First).unwrap();
            kron(&matrix_unit(2, 1, 1), &kron(&(&p.u1 * a00 * p.u1.adjoint()), &p.rho1))
                + kron(&matrix_unit(2, 0, 0), &kron(&(&p.u0 * a11 * p.u0.adjoint()), &p.rho0))
        })
        .unwrap();
        assert!((e.channel.superoperator().matrix() - oracle.matrix()).norm() < 1e-12);
    }
}
