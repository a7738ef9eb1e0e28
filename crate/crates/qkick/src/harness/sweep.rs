use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::Superoperator;
use crate::error::{Error, Result};
use crate::hamiltonian::{Hamiltonian, HamiltonianSampler};
use crate::io::{resolve_channel, resolve_hamiltonian};
use crate::numerics::{c, expm, matmul, ComplexMatrix};
use crate::spectral::{analyze_peripheral, PeripheralDecomposition, DEFAULT_PERIPHERAL_TOL};
use crate::zeno::{zeno_evolution, zeno_hamiltonian};

use super::metrics::{choi_distance, reduced_choi_purity};
use super::par_map;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    /// Bath kicks `I ⊗ E`; metric is the reduced Choi purity.
    Dd,
    /// Kicks `E` on the whole space; metric is the Choi distance to a reference.
    Zeno,
}

/// Reference evolution for [`SweepMode::Zeno`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reference {
    /// `E_φⁿ`
    #[default]
    PeripheralPower,
    /// `E_φⁿ e^{-itH_Z}`
    Target,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum HamiltonianSource {
    /// `count` draws from one stream seeded with `seed`.
    Random { count: usize, seed: u64 },
    /// A `pauli:` expression or a Hamiltonian file.
    Fixture(String),
}

fn default_t() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// `zoo:NAME(params)` or a channel file.
    pub channel: String,
    pub mode: SweepMode,
    /// System dimension for [`SweepMode::Dd`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d1: Option<usize>,
    pub hamiltonians: HamiltonianSource,
    #[serde(default = "default_t")]
    pub t: f64,
    pub n: Vec<u64>,
    #[serde(default)]
    pub reference: Reference,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("sweep config: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub n: u64,
    pub metric_name: &'static str,
    pub value: f64,
    pub seed: Option<u64>,
    pub sample: Option<usize>,
    pub channel: String,
    pub hamiltonian: String,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub n: u64,
    pub count: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepOutput {
    pub records: Vec<SweepRecord>,
    pub aggregates: Vec<Aggregate>,
}

impl SweepOutput {
    pub fn aggregate(&self, n: u64) -> Option<&Aggregate> {
        self.aggregates.iter().find(|a| a.n == n)
    }

    pub fn records_csv(&self) -> String {
        let mut out = String::from("n,metric,value,seed,sample,channel,hamiltonian,t\n");
        for r in &self.records {
            let opt = |x: Option<String>| x.unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.n,
                r.metric_name,
                r.value,
                opt(r.seed.map(|s| s.to_string())),
                opt(r.sample.map(|s| s.to_string())),
                csv_field(&r.channel),
                csv_field(&r.hamiltonian),
                r.t
            );
        }
        out
    }

    pub fn aggregates_csv(&self) -> String {
        let mut out = String::from("n,count,min,max,mean\n");
        for a in &self.aggregates {
            let _ = writeln!(out, "{},{},{},{},{}", a.n, a.count, a.min, a.max, a.mean);
        }
        out
    }

    /// Writes `records.csv` and `aggregates.csv` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("records.csv"), self.records_csv())?;
        std::fs::write(dir.join("aggregates.csv"), self.aggregates_csv())?;
        Ok(())
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Precomputed kick data shared by all points of a sweep.
pub struct Evaluator {
    mode: SweepMode,
    reference: Reference,
    kick: Superoperator,
    d1: usize,
    d2: usize,
    dec: PeripheralDecomposition,
}

impl Evaluator {
    pub fn new(channel: &Superoperator, mode: SweepMode, d1: Option<usize>, reference: Reference) -> Result<Self> {
        let (kick, d1, d2, dec) = match mode {
            SweepMode::Dd => {
                let d1 = d1.ok_or_else(|| Error::InvalidParameter("dd sweeps need d1".into()))?;
                if d1 == 0 {
                    return Err(Error::InvalidParameter("d1 must be positive".into()));
                }
                let dec = analyze_peripheral(channel, DEFAULT_PERIPHERAL_TOL)?.extend_with_identity(d1)?;
                (channel.extend_with_identity(d1)?, d1, channel.dim(), dec)
            }
            SweepMode::Zeno => {
                let dec = analyze_peripheral(channel, DEFAULT_PERIPHERAL_TOL)?;
                (channel.clone(), channel.dim(), 1, dec)
            }
        };
        Ok(Self {
            mode,
            reference,
            kick,
            d1,
            d2,
            dec,
        })
    }

    /// Dimension the Hamiltonians must have.
    pub fn dim(&self) -> usize {
        self.kick.dim()
    }

    pub fn metric_name(&self) -> &'static str {
        match self.mode {
            SweepMode::Dd => "purity",
            SweepMode::Zeno => "choi_distance",
        }
    }

    /// Per-Hamiltonian data: `e^{-itH_Z}` when the reference needs it.
    fn flow(&self, h: &Hamiltonian, t: f64) -> Result<Option<ComplexMatrix>> {
        match (self.mode, self.reference) {
            (SweepMode::Zeno, Reference::Target) => {
                let hz = zeno_hamiltonian(&self.dec, h)?;
                Ok(Some(expm(&(hz.matrix() * c(0.0, -t)))?))
            }
            _ => Ok(None),
        }
    }

    fn point(&self, h: &Hamiltonian, flow: Option<&ComplexMatrix>, t: f64, n: u64) -> Result<f64> {
        let evolved = zeno_evolution(&self.kick, h, t, n)?;
        match self.mode {
            SweepMode::Dd => reduced_choi_purity(&evolved, self.d1, self.d2),
            SweepMode::Zeno => {
                let mut reference = self.dec.peripheral_power(n);
                if let Some(f) = flow {
                    reference = Superoperator::from_matrix(self.dim(), matmul(reference.matrix(), f))?;
                }
                choi_distance(&evolved, &reference)
            }
        }
    }

    /// `values[h][k]` for every Hamiltonian and every entry of `ns`.
    pub fn evaluate(&self, hamiltonians: &[Hamiltonian], t: f64, ns: &[u64]) -> Result<Vec<Vec<f64>>> {
        for h in hamiltonians {
            if h.dim() != self.dim() {
                return Err(Error::DimensionMismatch(format!(
                    "Hamiltonian of dimension {} for a kick on dimension {}",
                    h.dim(),
                    self.dim()
                )));
            }
        }
        let flows: Vec<Option<ComplexMatrix>> = par_map(hamiltonians, |h| self.flow(h, t))
            .into_iter()
            .collect::<Result<_>>()?;
        let jobs: Vec<(usize, u64)> = (0..hamiltonians.len())
            .flat_map(|i| ns.iter().map(move |&n| (i, n)))
            .collect();
        let values = par_map(&jobs, |&(i, n)| self.point(&hamiltonians[i], flows[i].as_ref(), t, n));
        let mut out = vec![Vec::with_capacity(ns.len()); hamiltonians.len()];
        for ((i, _), v) in jobs.iter().zip(values) {
            out[*i].push(v?);
        }
        Ok(out)
    }
}

pub fn sweep(config: &SweepConfig) -> Result<SweepOutput> {
    if config.n.is_empty() || config.n.contains(&0) {
        return Err(Error::InvalidParameter("n must be a non-empty list of positive counts".into()));
    }
    if !config.t.is_finite() {
        return Err(Error::InvalidParameter("t must be finite".into()));
    }
    if config.mode == SweepMode::Zeno && config.d1.is_some() {
        return Err(Error::InvalidParameter("d1 only applies to dd sweeps".into()));
    }
    let channel = resolve_channel(&config.channel)?;
    let eval = Evaluator::new(channel.superoperator(), config.mode, config.d1, config.reference)?;
    let (hamiltonians, label, seed) = match &config.hamiltonians {
        HamiltonianSource::Random { count, seed } => {
            let mut sampler = HamiltonianSampler::new(*seed);
            let hs = (0..*count).map(|_| sampler.sample(eval.dim())).collect::<Result<Vec<_>>>()?;
            (hs, "random".to_string(), Some(*seed))
        }
        HamiltonianSource::Fixture(spec) => (vec![resolve_hamiltonian(spec, eval.dim())?], spec.clone(), None),
    };
    let values = eval.evaluate(&hamiltonians, config.t, &config.n)?;
    let mut records = Vec::with_capacity(values.len() * config.n.len());
    for (i, row) in values.iter().enumerate() {
        for (&n, &value) in config.n.iter().zip(row) {
            records.push(SweepRecord {
                n,
                metric_name: eval.metric_name(),
                value,
                seed,
                sample: seed.map(|_| i),
                channel: config.channel.clone(),
                hamiltonian: label.clone(),
                t: config.t,
            });
        }
    }
    records.sort_by_key(|r| (r.sample, r.n));
    let mut ns = config.n.clone();
    ns.sort_unstable();
    ns.dedup();
    let aggregates = ns
        .iter()
        .map(|&n| {
            let vals: Vec<f64> = records.iter().filter(|r| r.n == n).map(|r| r.value).collect();
            Aggregate {
                n,
                count: vals.len(),
                min: vals.iter().copied().fold(f64::INFINITY, f64::min),
                max: vals.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                mean: vals.iter().sum::<f64>() / vals.len() as f64,
            }
        })
        .collect();
    Ok(SweepOutput { records, aggregates })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing() {
        let cfg = SweepConfig::from_json(
            r#"{"channel": "zoo:E_updown", "mode": "dd", "d1": 2,
                "hamiltonians": {"random": {"count": 3, "seed": 5}}, "n": [1, 4]}"#,
        )
        .unwrap();
        assert_eq!(cfg.t, 1.0);
        assert_eq!(cfg.reference, Reference::PeripheralPower);
        let bad = SweepConfig::from_json(
            r#"{"channel": "zoo:E_updown", "mode": "dd", "colour": 1,
                "hamiltonians": {"fixture": "pauli:ZZ"}, "n": [1]}"#,
        );
        assert!(matches!(bad, Err(Error::Parse(_))));
    }

    #[test]
    fn fixture_sweep_records_and_aggregates() {
        let cfg = SweepConfig {
            channel: "zoo:E_dephase".into(),
            mode: SweepMode::Dd,
            d1: Some(2),
            hamiltonians: HamiltonianSource::Fixture("pauli:ZZ".into()),
            t: 1.0,
            n: vec![3, 1, 2],
            reference: Reference::default(),
        };
        let out = sweep(&cfg).unwrap();
        assert_eq!(out.records.len(), 3);
        assert_eq!(out.records.iter().map(|r| r.n).collect::<Vec<_>>(), vec![1, 2, 3]);
        let expected = 0.5 * (1.0 + 2.0f64.cos().powi(2));
        for r in &out.records {
            assert!((r.value - expected).abs() < 1e-10, "{r:?}");
            assert_eq!(r.metric_name, "purity");
        }
        let csv = out.aggregates_csv();
        assert!(csv.starts_with("n,count,min,max,mean\n1,1,"));
    }

    #[test]
    fn invalid_sweeps() {
        let mut cfg = SweepConfig {
            channel: "zoo:E_updown".into(),
            mode: SweepMode::Zeno,
            d1: None,
            hamiltonians: HamiltonianSource::Random { count: 2, seed: 0 },
            t: 1.0,
            n: vec![],
            reference: Reference::Target,
        };
        assert!(sweep(&cfg).is_err());
        cfg.n = vec![0];
        assert!(sweep(&cfg).is_err());
        cfg.n = vec![4];
        cfg.d1 = Some(2);
        assert!(sweep(&cfg).is_err());
        cfg.d1 = None;
        cfg.hamiltonians = HamiltonianSource::Fixture("pauli:ZZ".into());
        assert!(matches!(sweep(&cfg), Err(Error::DimensionMismatch(_))));
    }
}
