//! Density operators and the moment-level quantities built on them:
//! expectations, variances, symmetrized covariances, Bloch vectors,
//! reduced states, correlation tables, post-selection and the uncertainty
//! relation checkers.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{commutator, eig_hermitian, ComplexMatrix, StateVector, Tolerance, C64};
use crate::operators::{k_operator, local_pauli, pauli, KLabel, PauliAxis};
use crate::sampling::bloch_matrix;

/// Hermitian, unit-trace, positive semidefinite matrix of dimension 2, 4 or 8.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    tol: Tolerance,
}

impl DensityOperator {
    /// Validates `matrix`. The error names the first invariant that fails,
    /// checked in the order Hermiticity, trace, positivity.
    pub fn new(matrix: ComplexMatrix, tol: Tolerance) -> Result<Self> {
        let deviation = matrix.hermitian_deviation();
        if deviation > tol.eps() {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = matrix.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > tol.eps() {
            return Err(Error::InvalidTrace {
                re: tr.re,
                im: tr.im,
            });
        }
        let min_eigenvalue = eig_hermitian(&matrix, tol)?.values[0];
        if min_eigenvalue < -tol.eps() {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
            tol,
        })
    }

    /// `|v><v|` for a unit vector.
    pub fn from_pure(v: &StateVector, tol: Tolerance) -> Result<Self> {
        let norm = v.norm();
        if (norm - 1.0).abs() > tol.eps() {
            return Err(Error::NotNormalized { norm });
        }
        Self::new(v.outer(), tol)
    }

    /// `½(I + r·σ)`.
    pub fn from_bloch(r: [f64; 3]) -> Result<Self> {
        Self::new(bloch_matrix(r), Tolerance::default())
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        let id = ComplexMatrix::identity(dim)?;
        Self::new(id.scale_re(1.0 / dim as f64), Tolerance::default())
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tol
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        // Tr(ρρ) = Σ |ρ_rc|² for Hermitian ρ
        self.matrix.entries().iter().map(|z| z.norm_sqr()).sum()
    }

    /// `ρ₁ ⊗ ρ₂`.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        Self::new(self.matrix.kron(&other.matrix)?, self.tol)
    }
}

/// `⟨σ_x⟩, ⟨σ_y⟩, ⟨σ_z⟩` of a qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochVector {
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
}

impl BlochVector {
    pub fn component(&self, axis: PauliAxis) -> f64 {
        match axis {
            PauliAxis::X => self.sx,
            PauliAxis::Y => self.sy,
            PauliAxis::Z => self.sz,
            PauliAxis::Identity => 1.0,
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.sx, self.sy, self.sz]
    }

    pub fn length(&self) -> f64 {
        (self.sx * self.sx + self.sy * self.sy + self.sz * self.sz).sqrt()
    }
}

/// First and second moments of a two-qubit state.
///
/// `k[j][k] = ⟨σ_j ⊗ σ_k⟩` and `m[j][k] = k[j][k] - bloch1_j bloch2_k`, with
/// indices in `x, y, z` order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentTable {
    pub bloch1: BlochVector,
    pub bloch2: BlochVector,
    pub k: [[f64; 3]; 3],
    pub m: [[f64; 3]; 3],
}

impl MomentTable {
    pub fn correlation(&self, j: PauliAxis, k: PauliAxis) -> Option<f64> {
        Some(self.k[j.index()?][k.index()?])
    }

    pub fn covariance(&self, j: PauliAxis, k: PauliAxis) -> Option<f64> {
        Some(self.m[j.index()?][k.index()?])
    }
}

/// Both sides of `Δ²A₁ Δ²A₂ ≥ |⟨B⟩|² + χ²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UncertaintyReport {
    pub lhs: f64,
    pub commutator_term: f64,
    pub covariance_term: f64,
    pub margin: f64,
}

impl UncertaintyReport {
    pub fn new(lhs: f64, commutator_term: f64, covariance_term: f64) -> Self {
        Self {
            lhs,
            commutator_term,
            covariance_term,
            margin: lhs - commutator_term - covariance_term,
        }
    }

    /// Slack against the commutator-only bound; never below `margin`.
    pub fn robertson_margin(&self) -> f64 {
        self.lhs - self.commutator_term
    }
}

fn check_observable(rho: &DensityOperator, obs: &ComplexMatrix) -> Result<()> {
    if rho.dim() != obs.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: obs.dim(),
        });
    }
    let deviation = obs.hermitian_deviation();
    if deviation > rho.tol.eps() {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

/// `Tr(ρ A) = Σ_rc ρ_rc A_cr`, no product matrix formed.
fn trace_product(rho: &ComplexMatrix, obs: &ComplexMatrix) -> C64 {
    let n = rho.dim();
    let mut acc = C64::new(0.0, 0.0);
    for r in 0..n {
        for c in 0..n {
            acc += rho[(r, c)] * obs[(c, r)];
        }
    }
    acc
}

fn real_expectation(rho: &DensityOperator, obs: &ComplexMatrix) -> Result<f64> {
    let value = trace_product(&rho.matrix, obs);
    let scale = 1.0 + obs.max_abs();
    if value.im.abs() > 1e-10 * scale {
        return Err(Error::ComplexExpectation(value.im));
    }
    Ok(value.re)
}

/// `⟨A⟩ = Tr(ρ A)` for Hermitian `A`.
pub fn expectation(rho: &DensityOperator, obs: &ComplexMatrix) -> Result<f64> {
    check_observable(rho, obs)?;
    real_expectation(rho, obs)
}

/// `δA = A - ⟨A⟩·1`.
fn deviation_operator(rho: &DensityOperator, obs: &ComplexMatrix) -> Result<ComplexMatrix> {
    let mean = real_expectation(rho, obs)?;
    obs.sub(&ComplexMatrix::identity(obs.dim())?.scale_re(mean))
}

/// `(ΔA)² = ⟨(δA)²⟩`. Roundoff in `(-eps, 0)` is clamped to zero.
pub fn variance(rho: &DensityOperator, obs: &ComplexMatrix) -> Result<f64> {
    check_observable(rho, obs)?;
    let delta = deviation_operator(rho, obs)?;
    let v = real_expectation(rho, &delta.matmul(&delta)?)?;
    if v >= 0.0 {
        Ok(v)
    } else if v >= -rho.tol.eps() {
        Ok(0.0)
    } else {
        Err(Error::NegativeVariance(v))
    }
}

/// Symmetrized covariance `½⟨δA₁δA₂ + δA₂δA₁⟩`.
pub fn covariance_sym(
    rho: &DensityOperator,
    a1: &ComplexMatrix,
    a2: &ComplexMatrix,
) -> Result<f64> {
    check_observable(rho, a1)?;
    check_observable(rho, a2)?;
    let d1 = deviation_operator(rho, a1)?;
    let d2 = deviation_operator(rho, a2)?;
    let product = d1.matmul(&d2)?;
    // ½⟨d1 d2 + d2 d1⟩ = Re⟨d1 d2⟩ for Hermitian d1, d2
    Ok(trace_product(&rho.matrix, &product).re)
}

/// The general relation for an arbitrary Hermitian pair, with
/// `B = [A₁, A₂] / 2i`.
pub fn schroedinger_report(
    rho: &DensityOperator,
    a1: &ComplexMatrix,
    a2: &ComplexMatrix,
) -> Result<UncertaintyReport> {
    let lhs = variance(rho, a1)? * variance(rho, a2)?;
    let b = commutator(a1, a2)?.scale(C64::new(0.0, -0.5));
    let mean_b = real_expectation(rho, &b)?;
    let chi = covariance_sym(rho, a1, a2)?;
    Ok(UncertaintyReport::new(lhs, mean_b * mean_b, chi * chi))
}

fn pauli_axis(axis: PauliAxis, role: &str) -> Result<usize> {
    axis.index()
        .ok_or_else(|| Error::InvalidAxes(format!("{role} axis must be x, y or z")))
}

fn require_dim(rho: &DensityOperator, dim: usize) -> Result<()> {
    if rho.dim() == dim {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: dim,
        })
    }
}

/// Single-qubit relation from the Bloch vector alone:
/// `(1 - σ_j²)(1 - σ_k²) ≥ σ_l² + σ_j² σ_k²`.
pub fn single_qubit_relation(
    rho: &DensityOperator,
    j: PauliAxis,
    k: PauliAxis,
) -> Result<UncertaintyReport> {
    require_dim(rho, 2)?;
    pauli_axis(j, "first")?;
    pauli_axis(k, "second")?;
    let (l, _) = j
        .complement(k)
        .ok_or_else(|| Error::InvalidAxes(format!("axes must differ, got {j} twice")))?;
    let b = bloch(rho)?;
    let (sj, sk, sl) = (b.component(j), b.component(k), b.component(l));
    Ok(UncertaintyReport::new(
        (1.0 - sj * sj) * (1.0 - sk * sk),
        sl * sl,
        sj * sj * sk * sk,
    ))
}

pub fn bloch(rho: &DensityOperator) -> Result<BlochVector> {
    require_dim(rho, 2)?;
    let component = |axis| real_expectation(rho, &pauli(axis));
    Ok(BlochVector {
        sx: component(PauliAxis::X)?,
        sy: component(PauliAxis::Y)?,
        sz: component(PauliAxis::Z)?,
    })
}

/// Reduced state on the qubits listed in `keep` (0-based, qubit 0 is the
/// outermost Kronecker factor). `keep` must be a strictly increasing,
/// non-empty proper subset of the register.
pub fn partial_trace(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    let n = rho.n_qubits();
    if n < 2 {
        return Err(Error::InvalidSelector("need at least two qubits".into()));
    }
    if keep.is_empty() || keep.len() >= n {
        return Err(Error::InvalidSelector(format!(
            "must keep between 1 and {} of {n} qubits, got {keep:?}",
            n - 1
        )));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&q| q >= n) {
        return Err(Error::InvalidSelector(format!(
            "qubit list {keep:?} must be increasing and below {n}"
        )));
    }
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();

    // bit of qubit q in a full index is at position n-1-q
    let compose = |kept_bits: usize, traced_bits: usize| -> usize {
        let mut idx = 0;
        for (i, &q) in keep.iter().enumerate() {
            let bit = (kept_bits >> (keep.len() - 1 - i)) & 1;
            idx |= bit << (n - 1 - q);
        }
        for (i, &q) in traced.iter().enumerate() {
            let bit = (traced_bits >> (traced.len() - 1 - i)) & 1;
            idx |= bit << (n - 1 - q);
        }
        idx
    };

    let out_dim = 1 << keep.len();
    let env_dim = 1 << traced.len();
    let reduced = ComplexMatrix::from_fn(out_dim, |r, c| {
        (0..env_dim)
            .map(|t| rho.matrix[(compose(r, t), compose(c, t))])
            .sum()
    })?;
    DensityOperator::new(reduced, rho.tol)
}

pub fn moment_table(rho: &DensityOperator) -> Result<MomentTable> {
    require_dim(rho, 4)?;
    let local = |axis, qubit| real_expectation(rho, &local_pauli(axis, qubit, 2));
    let [x, y, z] = PauliAxis::XYZ;
    let bloch1 = BlochVector {
        sx: local(x, 0)?,
        sy: local(y, 0)?,
        sz: local(z, 0)?,
    };
    let bloch2 = BlochVector {
        sx: local(x, 1)?,
        sy: local(y, 1)?,
        sz: local(z, 1)?,
    };
    let mut k = [[0.0; 3]; 3];
    let mut m = [[0.0; 3]; 3];
    for (a, &ja) in PauliAxis::XYZ.iter().enumerate() {
        for (b, &kb) in PauliAxis::XYZ.iter().enumerate() {
            k[a][b] = real_expectation(rho, &k_operator(KLabel::new(ja, kb)))?;
            m[a][b] = k[a][b] - bloch1.component(ja) * bloch2.component(kb);
        }
    }
    Ok(MomentTable {
        bloch1,
        bloch2,
        k,
        m,
    })
}

/// Inter-subsystem relation `Δ²σ_j⁽¹⁾ Δ²σ_k⁽²⁾ ≥ |M_jk|²`.
///
/// The local observables commute, so `commutator_term` is always zero. The
/// covariance is evaluated from its operator definition, not from the
/// moment table.
pub fn intersubsystem_relation(
    rho: &DensityOperator,
    j: PauliAxis,
    k: PauliAxis,
) -> Result<UncertaintyReport> {
    require_dim(rho, 4)?;
    pauli_axis(j, "first")?;
    pauli_axis(k, "second")?;
    let a1 = local_pauli(j, 0, 2);
    let a2 = local_pauli(k, 1, 2);
    let lhs = variance(rho, &a1)? * variance(rho, &a2)?;
    let m = covariance_sym(rho, &a1, &a2)?;
    Ok(UncertaintyReport::new(lhs, 0.0, m * m))
}

/// Conditional state `ΠρΠ/p` and outcome probability `p = Tr(Πρ)`.
pub fn post_select(
    rho: &DensityOperator,
    projector: &ComplexMatrix,
) -> Result<(DensityOperator, f64)> {
    check_observable(rho, projector)?;
    let deviation = projector.matmul(projector)?.max_abs_diff(projector);
    if deviation > rho.tol.eps() {
        return Err(Error::NotProjector { deviation });
    }
    let probability = real_expectation(rho, projector)?;
    if probability < rho.tol.eps() {
        return Err(Error::ZeroProbability { probability });
    }
    let projected = projector.matmul(&rho.matrix)?.matmul(projector)?;
    let conditional = DensityOperator::new(projected.scale_re(1.0 / probability), rho.tol)?;
    Ok((conditional, probability))
}
