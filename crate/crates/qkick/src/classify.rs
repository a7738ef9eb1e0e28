//! Ergodicity, mixing, irreducibility and decoherence-free-subsystem tests.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::channel::Superoperator;
use crate::error::{Error, Result};
use crate::numerics::{commutator, hermitian_eigenvalues};
use crate::spectral::{analyze_peripheral, fixed_point_state, PeripheralDecomposition, DEFAULT_PERIPHERAL_TOL};

/// Largest commutator norm tolerated between recurrent basis elements.
pub const COMMUTATOR_TOL: f64 = 1e-8;
/// Smallest fixed-state eigenvalue counted as nonzero.
pub const FULL_RANK_TOL: f64 = 1e-10;
/// Distance within which a peripheral value matches a root of unity.
pub const ROOT_MATCH_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim_fixed: usize,
    pub dim_recurrent: usize,
    pub ergodic: bool,
    pub mixing: bool,
    pub irreducible: bool,
    pub dfs_free: bool,
    /// Cycle lengths, present exactly when `dfs_free`.
    pub cycle_lengths: Option<Vec<usize>>,
}

impl Classification {
    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// The four booleans in the order mixing, irreducible, ergodic, DFS-free.
    pub fn profile(&self) -> [bool; 4] {
        [self.mixing, self.irreducible, self.ergodic, self.dfs_free]
    }

    /// `mixing ⇒ ergodic`, `irreducible ⇒ ergodic`, `ergodic ⇒ dfs_free` and
    /// cycle lengths summing to the recurrent dimension.
    pub fn is_consistent(&self) -> bool {
        let chain = (!self.mixing || self.ergodic)
            && (!self.irreducible || self.ergodic)
            && (!self.ergodic || self.dfs_free);
        let cycles = match &self.cycle_lengths {
            Some(k) => self.dfs_free && k.iter().sum::<usize>() == self.dim_recurrent,
            None => !self.dfs_free,
        };
        chain && cycles && self.dim_fixed <= self.dim_recurrent
    }
}

pub fn classify(s: &Superoperator) -> Result<Classification> {
    classify_with_tol(s, DEFAULT_PERIPHERAL_TOL)
}

pub fn classify_with_tol(s: &Superoperator, tol: f64) -> Result<Classification> {
    classify_decomposition(&analyze_peripheral(s, tol)?)
}

pub fn classify_decomposition(dec: &PeripheralDecomposition) -> Result<Classification> {
    let ergodic = dec.is_ergodic();
    let irreducible = ergodic && {
        let rho = fixed_point_state(dec)?;
        hermitian_eigenvalues(&rho)?.into_iter().all(|x| x > FULL_RANK_TOL)
    };
    let dfs_free = max_recurrent_commutator(dec) <= COMMUTATOR_TOL;
    let cycle_lengths = if dfs_free { Some(cycles_of(dec)?) } else { None };
    Ok(Classification {
        name: None,
        dim_fixed: dec.dim_fixed(),
        dim_recurrent: dec.dim_recurrent(),
        ergodic,
        mixing: dec.is_mixing(),
        irreducible,
        dfs_free,
        cycle_lengths,
    })
}

/// `max ‖[X_i, X_j]‖_F` over pairs of the Hermitian recurrent basis.
pub fn max_recurrent_commutator(dec: &PeripheralDecomposition) -> f64 {
    let basis = dec.recurrent_basis();
    let mut worst = 0.0f64;
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i + 1..] {
            worst = worst.max(commutator(a, b).norm());
        }
    }
    worst
}

/// Cycle lengths of a DFS-free channel, largest first.
pub fn cycle_structure(s: &Superoperator) -> Result<Vec<usize>> {
    let dec = analyze_peripheral(s, DEFAULT_PERIPHERAL_TOL)?;
    if max_recurrent_commutator(&dec) > COMMUTATOR_TOL {
        return Err(Error::InvalidParameter(
            "cycle structure is only defined for channels without a decoherence-free subsystem".into(),
        ));
    }
    cycles_of(&dec)
}

fn cycles_of(dec: &PeripheralDecomposition) -> Result<Vec<usize>> {
    let values = dec.peripheral_values();
    if dec.is_ergodic() {
        let k = values.len();
        if match_roots(&values, &[k], ROOT_MATCH_TOL) {
            Ok(vec![k])
        } else {
            Err(Error::UnmatchedSpectrum(format!(
                "peripheral values of an ergodic channel are not the {k}-th roots of unity"
            )))
        }
    } else {
        root_of_unity_groups(&values, ROOT_MATCH_TOL)
    }
}

/// Splits a multiset of unimodular numbers into complete groups of `K`-th
/// roots of unity, taking the largest available `K` first.
pub fn root_of_unity_groups(values: &[Complex64], tol: f64) -> Result<Vec<usize>> {
    let mut remaining: Vec<Complex64> = values.to_vec();
    let mut groups = Vec::new();
    'outer: while !remaining.is_empty() {
        for k in (1..=remaining.len()).rev() {
            if let Some(rest) = remove_roots(&remaining, k, tol) {
                groups.push(k);
                remaining = rest;
                continue 'outer;
            }
        }
        return Err(Error::UnmatchedSpectrum(format!(
            "{} peripheral values do not form a union of root-of-unity groups",
            remaining.len()
        )));
    }
    groups.sort_unstable_by(|a, b| b.cmp(a));
    Ok(groups)
}

fn remove_roots(values: &[Complex64], k: usize, tol: f64) -> Option<Vec<Complex64>> {
    let mut used = vec![false; values.len()];
    for l in 0..k {
        let root = Complex64::from_polar(1.0, TAU * l as f64 / k as f64);
        let hit = values
            .iter()
            .enumerate()
            .filter(|(i, z)| !used[*i] && (**z - root).norm() <= tol)
            .min_by(|a, b| (a.1 - root).norm().total_cmp(&(b.1 - root).norm()))?;
        used[hit.0] = true;
    }
    Some(
        values
            .iter()
            .zip(&used)
            .filter(|(_, u)| !**u)
            .map(|(z, _)| *z)
            .collect(),
    )
}

/// Whether `values` is exactly the union of the root groups in `cycles`.
pub fn match_roots(values: &[Complex64], cycles: &[usize], tol: f64) -> bool {
    let mut remaining = values.to_vec();
    for &k in cycles {
        match remove_roots(&remaining, k, tol) {
            Some(rest) => remaining = rest,
            None => return false,
        }
    }
    remaining.is_empty()
}
