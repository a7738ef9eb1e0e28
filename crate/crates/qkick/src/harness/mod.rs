//! Parameter sweeps, figure reproduction and the metrics they report.

pub mod figures;
pub mod metrics;
pub mod sweep;

pub use figures::{figure_data, reproduce, FigureData, FigureId, FigureOptions};
pub use metrics::{choi_distance, reduced_choi, reduced_choi_purity};
pub use sweep::{sweep, Evaluator, Reference, SweepConfig, SweepMode, SweepOutput};

#[cfg(feature = "parallel")]
pub(crate) fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map<T, R>(items: &[T], f: impl Fn(&T) -> R) -> Vec<R> {
    items.iter().map(f).collect()
}
