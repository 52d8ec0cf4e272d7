//! Seeded property sweeps over the three uncertainty-relation families.
//!
//! A sweep of `n` samples is cut into fixed partitions of
//! [`PARTITION_SIZE`] samples. Partition `p` of family `f` draws from stream
//! `(f << 32) | p` of the seeded generator, and partial statistics are merged
//! in partition order, so the summary does not depend on the worker count.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{commutator, Tolerance};
use crate::operators::PauliAxis;
use crate::sampling::{
    bloch_ball, ginibre_mixed, haar_pure, product_state, random_hermitian, SeededGenerator,
};
use crate::states::{
    intersubsystem_relation, schroedinger_report, single_qubit_relation, DensityOperator,
    UncertaintyReport,
};

pub const PARTITION_SIZE: usize = 1000;
pub const DEFAULT_SAMPLES: usize = 100_000;
pub const DEFAULT_SEED: u64 = 42;

const SINGLE_QUBIT_PAIRS: [(PauliAxis, PauliAxis); 3] = [
    (PauliAxis::X, PauliAxis::Y),
    (PauliAxis::Y, PauliAxis::Z),
    (PauliAxis::Z, PauliAxis::X),
];

/// One family of inequality checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// General form on random Hermitian pairs and random states.
    Schroedinger { dim: usize },
    /// Bloch-vector relation, all three axis pairs, uniform Bloch ball.
    SingleQubit,
    /// Bloch-vector relation on Haar-random pure qubits (saturation).
    SingleQubitPure,
    /// Inter-subsystem relation, all nine pairs, random two-qubit states.
    Intersubsystem,
    /// Inter-subsystem relation on random product states.
    IntersubsystemProduct,
}

impl Relation {
    /// The rows emitted by `verify`, in order.
    pub const VERIFY_SET: [Relation; 6] = [
        Relation::Schroedinger { dim: 2 },
        Relation::Schroedinger { dim: 4 },
        Relation::SingleQubit,
        Relation::SingleQubitPure,
        Relation::Intersubsystem,
        Relation::IntersubsystemProduct,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Relation::Schroedinger { .. } => "schroedinger",
            Relation::SingleQubit => "single_qubit",
            Relation::SingleQubitPure => "single_qubit_pure",
            Relation::Intersubsystem => "intersubsystem",
            Relation::IntersubsystemProduct => "intersubsystem_product",
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Relation::Schroedinger { dim } => dim,
            Relation::SingleQubit | Relation::SingleQubitPure => 2,
            Relation::Intersubsystem | Relation::IntersubsystemProduct => 4,
        }
    }

    fn family(self) -> u64 {
        match self {
            Relation::Schroedinger { dim } => dim as u64,
            Relation::SingleQubit => 16,
            Relation::SingleQubitPure => 17,
            Relation::Intersubsystem => 32,
            Relation::IntersubsystemProduct => 33,
        }
    }
}

/// Aggregate of one sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub relation: &'static str,
    pub dim: usize,
    pub samples: usize,
    /// Inequality instances evaluated (samples times index pairs).
    pub evaluations: usize,
    pub min_margin: f64,
    pub mean_margin: f64,
    pub max_abs_margin: f64,
    /// Instances with `margin < -tol`.
    pub violations: usize,
    /// Smallest `robertson_margin - margin`, i.e. smallest covariance term.
    pub min_covariance_term: f64,
    /// Largest covariance term seen.
    pub max_covariance_term: f64,
    /// Largest `|Tr [A₁, A₂]|`, for families drawing random observables.
    pub max_commutator_trace: Option<f64>,
}

#[derive(Debug, Clone)]
struct Stats {
    evaluations: usize,
    min_margin: f64,
    sum_margin: f64,
    max_abs_margin: f64,
    violations: usize,
    min_cov: f64,
    max_cov: f64,
    max_commutator_trace: Option<f64>,
}

impl Stats {
    fn new() -> Self {
        Self {
            evaluations: 0,
            min_margin: f64::INFINITY,
            sum_margin: 0.0,
            max_abs_margin: 0.0,
            violations: 0,
            min_cov: f64::INFINITY,
            max_cov: 0.0,
            max_commutator_trace: None,
        }
    }

    fn record(&mut self, report: &UncertaintyReport, tol: f64) {
        self.evaluations += 1;
        self.min_margin = self.min_margin.min(report.margin);
        self.sum_margin += report.margin;
        self.max_abs_margin = self.max_abs_margin.max(report.margin.abs());
        if report.margin < -tol {
            self.violations += 1;
        }
        let cov = report.robertson_margin() - report.margin;
        self.min_cov = self.min_cov.min(cov);
        self.max_cov = self.max_cov.max(cov);
    }

    fn record_commutator_trace(&mut self, value: f64) {
        let current = self.max_commutator_trace.unwrap_or(0.0);
        self.max_commutator_trace = Some(current.max(value));
    }

    fn merge(mut self, other: Stats) -> Stats {
        self.evaluations += other.evaluations;
        self.min_margin = self.min_margin.min(other.min_margin);
        self.sum_margin += other.sum_margin;
        self.max_abs_margin = self.max_abs_margin.max(other.max_abs_margin);
        self.violations += other.violations;
        self.min_cov = self.min_cov.min(other.min_cov);
        self.max_cov = self.max_cov.max(other.max_cov);
        self.max_commutator_trace = match (self.max_commutator_trace, other.max_commutator_trace) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        self
    }
}

/// Draws a Ginibre state of uniformly random rank, so pure and mixed states
/// are both covered.
fn random_rank_state(gen: &mut SeededGenerator, dim: usize) -> Result<DensityOperator> {
    let rank = 1 + (gen.next_u64() % dim as u64) as usize;
    ginibre_mixed(gen, dim, rank)
}

fn sample_into(
    relation: Relation,
    gen: &mut SeededGenerator,
    stats: &mut Stats,
    tol: f64,
) -> Result<()> {
    match relation {
        Relation::Schroedinger { dim } => {
            let rho = random_rank_state(gen, dim)?;
            let a1 = random_hermitian(gen, dim)?;
            let a2 = random_hermitian(gen, dim)?;
            stats.record_commutator_trace(commutator(&a1, &a2)?.trace().norm());
            stats.record(&schroedinger_report(&rho, &a1, &a2)?, tol);
        }
        Relation::SingleQubit | Relation::SingleQubitPure => {
            let rho = if relation == Relation::SingleQubit {
                bloch_ball(gen)?
            } else {
                DensityOperator::from_pure(&haar_pure(gen, 2)?, Tolerance::default())?
            };
            for (j, k) in SINGLE_QUBIT_PAIRS {
                stats.record(&single_qubit_relation(&rho, j, k)?, tol);
            }
        }
        Relation::Intersubsystem | Relation::IntersubsystemProduct => {
            let rho = if relation == Relation::Intersubsystem {
                random_rank_state(gen, 4)?
            } else {
                product_state(gen)?
            };
            for j in PauliAxis::XYZ {
                for k in PauliAxis::XYZ {
                    stats.record(&intersubsystem_relation(&rho, j, k)?, tol);
                }
            }
        }
    }
    Ok(())
}

/// Runs `samples` draws of `relation` from `seed`, flagging margins below
/// `-tol` as violations.
pub fn run_sweep(
    relation: Relation,
    seed: u64,
    samples: usize,
    tol: Tolerance,
) -> Result<SweepSummary> {
    if samples == 0 {
        return Err(Error::InvalidScenario(
            "sample count must be positive".into(),
        ));
    }
    let partitions = samples.div_ceil(PARTITION_SIZE);
    let family = relation.family();
    let partials = (0..partitions)
        .into_par_iter()
        .map(|p| {
            let mut gen = SeededGenerator::new(seed, (family << 32) | p as u64);
            let start = p * PARTITION_SIZE;
            let end = (start + PARTITION_SIZE).min(samples);
            let mut stats = Stats::new();
            for _ in start..end {
                sample_into(relation, &mut gen, &mut stats, tol.eps())?;
            }
            Ok(stats)
        })
        .collect::<Result<Vec<_>>>()?;
    let total = partials.into_iter().fold(Stats::new(), Stats::merge);
    Ok(SweepSummary {
        relation: relation.id(),
        dim: relation.dim(),
        samples,
        evaluations: total.evaluations,
        min_margin: total.min_margin,
        mean_margin: total.sum_margin / total.evaluations as f64,
        max_abs_margin: total.max_abs_margin,
        violations: total.violations,
        min_covariance_term: total.min_cov,
        max_covariance_term: total.max_cov,
        max_commutator_trace: total.max_commutator_trace,
    })
}

/// Every family of [`Relation::VERIFY_SET`] at the same seed and size.
pub fn verify_all(seed: u64, samples: usize, tol: Tolerance) -> Result<Vec<SweepSummary>> {
    Relation::VERIFY_SET
        .iter()
        .map(|&r| run_sweep(r, seed, samples, tol))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summaries_are_independent_of_thread_count() {
        let tol = Tolerance::default();
        let reference = run_sweep(Relation::Intersubsystem, 5, 2500, tol).unwrap();
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run_sweep(Relation::Intersubsystem, 5, 2500, tol).unwrap());
        assert_eq!(reference, single);
        assert_eq!(reference.evaluations, 2500 * 9);
    }

    #[test]
    fn small_sweeps_have_no_violations() {
        let tol = Tolerance::default();
        for relation in Relation::VERIFY_SET {
            let s = run_sweep(relation, 7, 300, tol).unwrap();
            assert_eq!(s.violations, 0, "{s:?}");
            assert!(s.min_covariance_term >= 0.0);
            assert_eq!(s.relation, relation.id());
        }
    }

    #[test]
    fn commutator_trace_tracked_only_for_random_observables() {
        let tol = Tolerance::default();
        let s = run_sweep(Relation::Schroedinger { dim: 4 }, 1, 50, tol).unwrap();
        assert!(s.max_commutator_trace.unwrap() < 1e-10);
        let s = run_sweep(Relation::SingleQubit, 1, 50, tol).unwrap();
        assert!(s.max_commutator_trace.is_none());
    }

    #[test]
    fn pure_and_product_families() {
        let tol = Tolerance::default();
        let pure = run_sweep(Relation::SingleQubitPure, 3, 500, tol).unwrap();
        assert!(pure.max_abs_margin <= 1e-10);
        let product = run_sweep(Relation::IntersubsystemProduct, 3, 500, tol).unwrap();
        assert!(product.max_covariance_term <= 1e-18);
    }

    #[test]
    fn covariance_term_is_exercised() {
        let s = run_sweep(Relation::Intersubsystem, 42, 10_000, Tolerance::default()).unwrap();
        // max |M_jk| > 0.5
        assert!(s.max_covariance_term > 0.25, "{s:?}");
    }

    #[test]
    fn rejects_empty_sweep() {
        assert!(run_sweep(Relation::SingleQubit, 1, 0, Tolerance::default()).is_err());
    }
}
