//! Seeded random states and observables for property sweeps.
//!
//! Every draw is a pure function of `(seed, stream_id)` and the call
//! sequence. The underlying generator is ChaCha8 seeded from the 64-bit
//! seed, with `stream_id` selecting one of its 2^64 independent streams.
//! Uniform doubles take the top 53 bits of a `u64`; Gaussians use the basic
//! Box–Muller transform, with the sine branch cached for the next call.

use std::f64::consts::TAU;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, StateVector, Tolerance, C64, SUPPORTED_DIMS};
use crate::operators::{pauli, PauliAxis};
use crate::states::DensityOperator;

#[derive(Clone, Debug)]
pub struct SeededGenerator {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
    spare_gaussian: Option<f64>,
}

impl SeededGenerator {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            rng,
            spare_gaussian: None,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        (self.next_u64() >> 11) as f64 * SCALE
    }

    /// Standard normal deviate.
    pub fn gaussian(&mut self) -> f64 {
        if let Some(g) = self.spare_gaussian.take() {
            return g;
        }
        // 1 - u lies in (0, 1], keeping the logarithm finite
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = TAU * u2;
        self.spare_gaussian = Some(radius * angle.sin());
        radius * angle.cos()
    }

    /// Standard complex Gaussian, `E|z|^2 = 1`.
    pub fn complex_gaussian(&mut self) -> C64 {
        let re = self.gaussian();
        let im = self.gaussian();
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if SUPPORTED_DIMS.contains(&dim) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

/// Unitarily invariant random pure state.
pub fn haar_pure(gen: &mut SeededGenerator, dim: usize) -> Result<StateVector> {
    check_dim(dim)?;
    let amps = (0..dim).map(|_| gen.complex_gaussian()).collect();
    StateVector::new(amps)?.normalized()
}

/// `G G† / Tr(G G†)` with `G` a `dim × rank` complex Gaussian matrix.
pub fn ginibre_mixed(
    gen: &mut SeededGenerator,
    dim: usize,
    rank: usize,
) -> Result<DensityOperator> {
    check_dim(dim)?;
    if rank == 0 || rank > dim {
        return Err(Error::InvalidRank { rank, dim });
    }
    let g: Vec<C64> = (0..dim * rank).map(|_| gen.complex_gaussian()).collect();
    let gram = ComplexMatrix::from_fn(dim, |r, c| {
        (0..rank)
            .map(|k| g[r * rank + k] * g[c * rank + k].conj())
            .sum()
    })?;
    let norm = gram.trace().re;
    DensityOperator::new(
        gram.scale_re(1.0 / norm).hermitian_part(),
        Tolerance::default(),
    )
}

/// Product of two independent full-rank single-qubit Ginibre states.
pub fn product_state(gen: &mut SeededGenerator) -> Result<DensityOperator> {
    let first = ginibre_mixed(gen, 2, 2)?;
    let second = ginibre_mixed(gen, 2, 2)?;
    DensityOperator::new(first.matrix().kron(second.matrix())?, Tolerance::default())
}

/// Uniform point `r` of the closed unit ball mapped to `½(I + r·σ)`.
pub fn bloch_ball(gen: &mut SeededGenerator) -> Result<DensityOperator> {
    let r = uniform_ball_point(gen);
    DensityOperator::from_bloch(r)
}

fn uniform_ball_point(gen: &mut SeededGenerator) -> [f64; 3] {
    loop {
        let d = [gen.gaussian(), gen.gaussian(), gen.gaussian()];
        let len = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        if len == 0.0 {
            continue;
        }
        let radius = gen.uniform().cbrt();
        return d.map(|x| (x / len * radius).clamp(-1.0, 1.0));
    }
}

/// `(G + G†)/2` with complex Gaussian `G`.
pub fn random_hermitian(gen: &mut SeededGenerator, dim: usize) -> Result<ComplexMatrix> {
    let g = ComplexMatrix::from_fn(dim, |_, _| gen.complex_gaussian())?;
    Ok(g.hermitian_part())
}

/// `ρ = ½(I + r·σ)` for a Bloch vector with `|r| ≤ 1`.
pub(crate) fn bloch_matrix(r: [f64; 3]) -> ComplexMatrix {
    let mut m = pauli(PauliAxis::Identity);
    for (axis, comp) in [PauliAxis::X, PauliAxis::Y, PauliAxis::Z]
        .into_iter()
        .zip(r)
    {
        m = m.add(&pauli(axis).scale_re(comp)).expect("2x2 operands");
    }
    m.scale_re(0.5)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleKind {
    HaarPure,
    GinibreMixed { rank: usize },
    Product,
    BlochBall,
}

/// A batch request: `count` draws of `kind` at dimension `dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SampleSpec {
    pub count: usize,
    pub dim: usize,
    pub kind: SampleKind,
}

impl SampleSpec {
    pub fn new(count: usize, dim: usize, kind: SampleKind) -> Result<Self> {
        check_dim(dim)?;
        if count == 0 {
            return Err(Error::InvalidScenario(
                "sample count must be positive".into(),
            ));
        }
        match kind {
            SampleKind::GinibreMixed { rank } if rank == 0 || rank > dim => {
                return Err(Error::InvalidRank { rank, dim })
            }
            SampleKind::Product if dim != 4 => {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: 4,
                })
            }
            SampleKind::BlochBall if dim != 2 => {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: 2,
                })
            }
            _ => {}
        }
        Ok(Self { count, dim, kind })
    }

    pub fn draw(&self, gen: &mut SeededGenerator) -> Result<DensityOperator> {
        match self.kind {
            SampleKind::HaarPure => {
                DensityOperator::from_pure(&haar_pure(gen, self.dim)?, Tolerance::default())
            }
            SampleKind::GinibreMixed { rank } => ginibre_mixed(gen, self.dim, rank),
            SampleKind::Product => product_state(gen),
            SampleKind::BlochBall => bloch_ball(gen),
        }
    }

    pub fn sample(&self, gen: &mut SeededGenerator) -> Result<Vec<DensityOperator>> {
        (0..self.count).map(|_| self.draw(gen)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eig_hermitian;
    use crate::states::{bloch, partial_trace, variance};

    #[test]
    fn frozen_stream_vectors() {
        // Pinned outputs; a change here breaks reproducibility of published runs.
        let mut gen = SeededGenerator::new(42, 0);
        let first: Vec<u64> = (0..3).map(|_| gen.next_u64()).collect();
        let mut again = SeededGenerator::new(42, 0);
        let repeat: Vec<u64> = (0..3).map(|_| again.next_u64()).collect();
        assert_eq!(first, repeat);
        assert_eq!(first, FROZEN_SEED42_STREAM0.to_vec());

        let mut other = SeededGenerator::new(42, 1);
        assert_ne!(other.next_u64(), first[0]);
    }

    const FROZEN_SEED42_STREAM0: [u64; 3] = [
        12578764544318200737,
        17529487244874322312,
        7886285670807131020,
    ];

    #[test]
    fn uniform_and_gaussian_ranges() {
        let mut gen = SeededGenerator::new(9, 3);
        let n = 20_000;
        let mut mean = 0.0;
        let mut second = 0.0;
        for _ in 0..n {
            let u = gen.uniform();
            assert!((0.0..1.0).contains(&u));
            let g = gen.gaussian();
            assert!(g.is_finite());
            mean += g;
            second += g * g;
        }
        mean /= n as f64;
        second /= n as f64;
        assert!(mean.abs() < 0.03);
        assert!((second - 1.0).abs() < 0.05);
    }

    #[test]
    fn haar_pure_is_normalized_and_centered() {
        let mut gen = SeededGenerator::new(11, 0);
        for dim in SUPPORTED_DIMS {
            assert!((haar_pure(&mut gen, dim).unwrap().norm() - 1.0).abs() < 1e-12);
        }
        let n = 100_000;
        let mut mean = [0.0; 3];
        for _ in 0..n {
            let rho =
                DensityOperator::from_pure(&haar_pure(&mut gen, 2).unwrap(), Tolerance::default())
                    .unwrap();
            let b = bloch(&rho).unwrap();
            mean[0] += b.sx;
            mean[1] += b.sy;
            mean[2] += b.sz;
        }
        for m in mean {
            assert!(
                (m / n as f64).abs() < 0.01,
                "mean component {}",
                m / n as f64
            );
        }
    }

    #[test]
    fn haar_reduced_purity_mean() {
        // E[Tr ρ_A^2] = (dA + dB)/(dA dB + 1) = 4/5 for two qubits;
        // Monte-Carlo oracle below confirms it.
        let mut gen = SeededGenerator::new(12, 0);
        let n = 50_000;
        let mut acc = 0.0;
        for _ in 0..n {
            let psi = haar_pure(&mut gen, 4).unwrap();
            let rho = DensityOperator::from_pure(&psi, Tolerance::default()).unwrap();
            acc += partial_trace(&rho, &[0]).unwrap().purity();
        }
        let mean = acc / n as f64;
        assert!((mean - 0.8).abs() < 0.01, "mean purity {mean}");
    }

    #[test]
    fn ginibre_rank_and_validity() {
        let mut gen = SeededGenerator::new(13, 0);
        for dim in SUPPORTED_DIMS {
            let pure = ginibre_mixed(&mut gen, dim, 1).unwrap();
            assert!((pure.purity() - 1.0).abs() < 1e-10);
            for _ in 0..200 {
                let rho = ginibre_mixed(&mut gen, dim, dim).unwrap();
                let eig = eig_hermitian(rho.matrix(), Tolerance::default()).unwrap();
                assert!(eig.values.iter().all(|&l| l >= -1e-12));
            }
        }
        assert_eq!(
            ginibre_mixed(&mut gen, 4, 0).unwrap_err(),
            Error::InvalidRank { rank: 0, dim: 4 }
        );
        assert_eq!(
            ginibre_mixed(&mut gen, 4, 5).unwrap_err(),
            Error::InvalidRank { rank: 5, dim: 4 }
        );
    }

    #[test]
    fn product_state_factors() {
        let mut gen = SeededGenerator::new(14, 0);
        for _ in 0..100 {
            let rho = product_state(&mut gen).unwrap();
            let a = partial_trace(&rho, &[0]).unwrap();
            let b = partial_trace(&rho, &[1]).unwrap();
            let rebuilt = a.matrix().kron(b.matrix()).unwrap();
            assert!(rebuilt.max_abs_diff(rho.matrix()) < 1e-12);
        }
    }

    #[test]
    fn bloch_ball_variances() {
        let mut gen = SeededGenerator::new(15, 0);
        for _ in 0..1000 {
            let rho = bloch_ball(&mut gen).unwrap();
            let b = bloch(&rho).unwrap();
            assert!(b.length() <= 1.0 + 1e-12);
            for (axis, comp) in [
                (PauliAxis::X, b.sx),
                (PauliAxis::Y, b.sy),
                (PauliAxis::Z, b.sz),
            ] {
                let v = variance(&rho, &pauli(axis)).unwrap();
                assert!((v - (1.0 - comp * comp)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn random_hermitian_is_hermitian() {
        let mut gen = SeededGenerator::new(16, 0);
        for dim in SUPPORTED_DIMS {
            let a = random_hermitian(&mut gen, dim).unwrap();
            assert!(a.max_abs_diff(&a.adjoint()) <= 1e-14);
        }
        assert!(random_hermitian(&mut gen, 3).is_err());
    }

    #[test]
    fn sample_spec_validation() {
        assert!(SampleSpec::new(0, 2, SampleKind::HaarPure).is_err());
        assert!(SampleSpec::new(5, 4, SampleKind::GinibreMixed { rank: 7 }).is_err());
        assert!(SampleSpec::new(5, 2, SampleKind::Product).is_err());
        let spec = SampleSpec::new(5, 4, SampleKind::GinibreMixed { rank: 2 }).unwrap();
        let mut a = SeededGenerator::new(1, 1);
        let mut b = SeededGenerator::new(1, 1);
        let xs = spec.sample(&mut a).unwrap();
        let ys = spec.sample(&mut b).unwrap();
        assert_eq!(xs.len(), 5);
        assert!(xs.iter().zip(&ys).all(|(x, y)| x.matrix() == y.matrix()));
    }
}
