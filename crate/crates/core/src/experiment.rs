//! Which-path scenarios: fringe scans, visibility, distinguishability,
//! marker erasure and the Bell-pair marker on three qubits.
//!
//! Subsystem 1 is the path qubit (`|+z>` and `|-z>` are the two paths). The
//! screen observable is the `|+x>` projector on subsystem 1, so
//! `P0(φ) = ½(1 + ⟨σ_x⁽¹⁾⟩)`.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, StateVector, Tolerance, C64};
use crate::operators::{
    bell_phi_plus, bell_psi_plus, cnot, embed_operator, partial_marker, pauli, phase_state,
    x_basis_states, z_state, PauliAxis, PhaseAngle,
};
use crate::states::{partial_trace, post_select, DensityOperator};

pub const DEFAULT_GRID: usize = 64;
pub const MIN_GRID: usize = 4;

/// How the path qubit gets marked.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "theta")]
pub enum Marker {
    /// Marker qubit stays in `|-z>` for both paths.
    None,
    Cnot,
    /// [`partial_marker`] with the given angle.
    Partial(f64),
    /// Marker is the `(2,3)` pair prepared in Φ+, coupled by CNOT on (1,2).
    BellPair,
}

impl fmt::Display for Marker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Marker::None => f.write_str("none"),
            Marker::Cnot => f.write_str("cnot"),
            Marker::Partial(theta) => write!(f, "partial={theta}"),
            Marker::BellPair => f.write_str("bell_pair"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ErasureSign {
    Plus,
    Minus,
}

impl ErasureSign {
    pub fn symbol(self) -> char {
        match self {
            ErasureSign::Plus => '+',
            ErasureSign::Minus => '-',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Scenario {
    marker: Marker,
    grid: usize,
}

impl Scenario {
    pub fn new(marker: Marker, grid: usize) -> Result<Self> {
        if grid < MIN_GRID {
            return Err(Error::InvalidScenario(format!(
                "phase grid needs at least {MIN_GRID} points, got {grid}"
            )));
        }
        if let Marker::Partial(theta) = marker {
            if !theta.is_finite() {
                return Err(Error::InvalidScenario(format!(
                    "marker angle {theta} is not finite"
                )));
            }
        }
        Ok(Self { marker, grid })
    }

    pub fn marker(&self) -> Marker {
        self.marker
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    /// `2πi/n` for `i = 0..n`; contains `0` and, for even `n`, exactly `π`.
    pub fn phases(&self) -> Vec<PhaseAngle> {
        (0..self.grid)
            .map(|i| PhaseAngle::new(TAU * i as f64 / self.grid as f64).expect("finite"))
            .collect()
    }

    /// Joint path+marker state after marking, for path phase `phi`.
    /// Dimension 4, or 8 for [`Marker::BellPair`].
    pub fn joint_state(&self, phi: PhaseAngle) -> StateVector {
        let path = phase_state(phi);
        let marked = |gate: crate::linalg::ComplexMatrix| {
            let input = path.kron(&z_state(false)).expect("dim 4");
            gate.apply(&input).expect("dim 4")
        };
        match self.marker {
            Marker::None => path.kron(&z_state(false)).expect("dim 4"),
            Marker::Cnot => marked(cnot()),
            Marker::Partial(theta) => marked(partial_marker(theta)),
            Marker::BellPair => triple_state(phi),
        }
    }
}

/// Screen probabilities `P0(φ)` over a phase grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FringeScan {
    pub phases: Vec<PhaseAngle>,
    pub p0: Vec<f64>,
    /// Post-selection probability per point, for conditional scans.
    pub p_select: Option<Vec<f64>>,
    /// Describes the post-selection, if any.
    pub condition: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualityReport {
    pub visibility: f64,
    pub distinguishability: f64,
    pub duality_sum: f64,
}

fn tol() -> Tolerance {
    Tolerance::default()
}

/// `½(1 + ⟨σ_x⟩)` of the path qubit of `joint`.
fn screen_probability(joint: &DensityOperator) -> Result<f64> {
    let path = if joint.n_qubits() == 1 {
        joint.clone()
    } else {
        partial_trace(joint, &[0])?
    };
    let sx = crate::states::expectation(&path, &pauli(PauliAxis::X))?;
    Ok(0.5 * (1.0 + sx))
}

pub fn fringe_scan(scenario: &Scenario) -> Result<FringeScan> {
    let phases = scenario.phases();
    let p0 = phases
        .iter()
        .map(|&phi| {
            let joint = DensityOperator::from_pure(&scenario.joint_state(phi), tol())?;
            screen_probability(&joint)
        })
        .collect::<Result<_>>()?;
    Ok(FringeScan {
        phases,
        p0,
        p_select: None,
        condition: None,
    })
}

/// `(max − min)/(max + min)` of the scan; `0` when `max + min` vanishes.
pub fn visibility(scan: &FringeScan) -> Result<f64> {
    if scan.p0.len() < MIN_GRID {
        return Err(Error::InvalidScenario(format!(
            "visibility needs at least {MIN_GRID} samples, got {}",
            scan.p0.len()
        )));
    }
    let max = scan.p0.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = scan.p0.iter().copied().fold(f64::INFINITY, f64::min);
    if max + min < Tolerance::DEFAULT_EPS {
        return Ok(0.0);
    }
    Ok((max - min) / (max + min))
}

/// `2|ρ₁₀₁|` of the reduced path state, the fringe contrast obtained in
/// closed form instead of from a scan.
pub fn path_coherence(joint: &DensityOperator) -> Result<f64> {
    let path = partial_trace(joint, &[0])?;
    Ok(2.0 * path.matrix()[(0, 1)].norm())
}

/// Which-path distinguishability `D = Tr|p₊ρ₊ − p₋ρ₋|`, where `ρ±` is the
/// marker state conditioned on path `±z` and `p±` its probability. For
/// equal weights this is the trace distance of the two marker states.
/// Returns `0` when one path carries (numerically) no weight.
pub fn distinguishability(joint: &DensityOperator) -> Result<f64> {
    let n = joint.n_qubits();
    if n < 2 {
        return Err(Error::DimensionMismatch {
            left: joint.dim(),
            right: 4,
        });
    }
    let marker_qubits: Vec<usize> = (1..n).collect();
    let mut weighted = Vec::with_capacity(2);
    for plus in [true, false] {
        let projector = embed_operator(&z_state(plus).outer(), 0, n)?;
        match post_select(joint, &projector) {
            Ok((conditional, p)) => {
                let marker = partial_trace(&conditional, &marker_qubits)?;
                weighted.push(marker.matrix().scale_re(p));
            }
            Err(Error::ZeroProbability { .. }) => return Ok(0.0),
            Err(e) => return Err(e),
        }
    }
    let difference = weighted[0].sub(&weighted[1])?;
    let eig = eig_hermitian(&difference, joint.tolerance())?;
    Ok(eig.values.iter().map(|l| l.abs()).sum())
}

/// Visibility from a grid scan and distinguishability from the marker
/// states at `φ = 0`.
pub fn duality(scenario: &Scenario) -> Result<DualityReport> {
    let v = visibility(&fringe_scan(scenario)?)?;
    let phi0 = PhaseAngle::new(0.0).expect("finite");
    let joint = DensityOperator::from_pure(&scenario.joint_state(phi0), tol())?;
    let d = distinguishability(&joint)?;
    Ok(DualityReport {
        visibility: v,
        distinguishability: d,
        duality_sum: v * v + d * d,
    })
}

/// Post-selects marker qubit 2 of a two-qubit joint state on `|±x>`.
/// Returns the conditional joint state and the selection probability.
pub fn erase_pair_state(
    joint: &DensityOperator,
    sign: ErasureSign,
) -> Result<(DensityOperator, f64)> {
    if joint.dim() != 4 {
        return Err(Error::DimensionMismatch {
            left: joint.dim(),
            right: 4,
        });
    }
    let (plus_x, minus_x) = x_basis_states();
    let ket = match sign {
        ErasureSign::Plus => plus_x,
        ErasureSign::Minus => minus_x,
    };
    post_select(joint, &embed_operator(&ket.outer(), 1, 2)?)
}

/// Erasure basis of the Bell-pair marker: `(Ψ+ ± Φ+)/√2` on qubits 2 and 3.
///
/// Path `+z` is tagged by Ψ+ and path `-z` by Φ+ after marking, so these are
/// the x-basis states of that effective two-level marker. They coincide with
/// `|+x,+x>` and `-|-x,-x>`.
pub fn bell_doublet_state(sign: ErasureSign) -> StateVector {
    let s = match sign {
        ErasureSign::Plus => 1.0,
        ErasureSign::Minus => -1.0,
    };
    bell_psi_plus()
        .add(&bell_phi_plus().scale(C64::new(s, 0.0)))
        .expect("dim 4")
        .scale(C64::new(FRAC_1_SQRT_2, 0.0))
}

pub const BELL_DOUBLET_DESCRIPTION: &str = "markers (2,3) projected on (Psi+ +/- Phi+)/sqrt2";

/// Post-selects the Bell-pair marker of a three-qubit state on
/// [`bell_doublet_state`]. Returns the conditional joint state and the
/// selection probability.
pub fn erase_triple_state(
    joint: &DensityOperator,
    sign: ErasureSign,
) -> Result<(DensityOperator, f64)> {
    if joint.dim() != 8 {
        return Err(Error::DimensionMismatch {
            left: joint.dim(),
            right: 8,
        });
    }
    let projector = embed_operator(&bell_doublet_state(sign).outer(), 1, 3)?;
    post_select(joint, &projector)
}

fn conditional_scan(
    scenario: &Scenario,
    condition: String,
    select: impl Fn(&DensityOperator) -> Result<(DensityOperator, f64)>,
) -> Result<FringeScan> {
    let phases = scenario.phases();
    let mut p0 = Vec::with_capacity(phases.len());
    let mut p_select = Vec::with_capacity(phases.len());
    for &phi in &phases {
        let joint = DensityOperator::from_pure(&scenario.joint_state(phi), tol())?;
        let (conditional, p) = select(&joint)?;
        p0.push(screen_probability(&conditional)?);
        p_select.push(p);
    }
    Ok(FringeScan {
        phases,
        p0,
        p_select: Some(p_select),
        condition: Some(condition),
    })
}

/// Conditional fringes after post-selecting the marker in its x basis.
pub fn erase(scenario: &Scenario, sign: ErasureSign) -> Result<FringeScan> {
    match scenario.marker() {
        Marker::None => Err(Error::InvalidScenario(
            "erasure needs a marked scenario".into(),
        )),
        Marker::BellPair => bell_erasure(scenario.grid(), sign),
        Marker::Cnot | Marker::Partial(_) => conditional_scan(
            scenario,
            format!("marker qubit 2 projected on |{}x>", sign.symbol()),
            |joint| erase_pair_state(joint, sign),
        ),
    }
}

/// Conditional fringes of the three-qubit scenario after Bell-doublet
/// erasure, over a `grid`-point phase scan.
pub fn bell_erasure(grid: usize, sign: ErasureSign) -> Result<FringeScan> {
    let scenario = Scenario::new(Marker::BellPair, grid)?;
    conditional_scan(
        &scenario,
        format!("{BELL_DOUBLET_DESCRIPTION}, outcome {}", sign.symbol()),
        |joint| erase_triple_state(joint, sign),
    )
}

/// `φ`-superposed path qubit marked by a Bell pair:
/// `cnot₁₂ (|φ> ⊗ Φ+₂₃)`.
pub fn triple_state(phi: PhaseAngle) -> StateVector {
    let input = phase_state(phi).kron(&bell_phi_plus()).expect("dim 8");
    let gate = cnot().kron(&pauli(PauliAxis::Identity)).expect("dim 8");
    gate.apply(&input).expect("dim 8")
}

/// Marker states of the three-qubit scenario, conditioned on each path.
#[derive(Debug, Clone)]
pub struct TripleDiagnostics {
    /// Probabilities of paths `+z`, `-z`.
    pub path_probability: [f64; 2],
    /// Reduced state of qubit 2 for paths `+z`, `-z`.
    pub marker2: [DensityOperator; 2],
    /// Reduced state of qubit 3 for paths `+z`, `-z`.
    pub marker3: [DensityOperator; 2],
}

#[derive(Debug, Clone)]
pub struct TripleScenario {
    pub state: StateVector,
    pub diagnostics: TripleDiagnostics,
}

pub fn triple_scenario(phi: PhaseAngle) -> Result<TripleScenario> {
    let state = triple_state(phi);
    let joint = DensityOperator::from_pure(&state, tol())?;
    let mut probs = [0.0; 2];
    let mut m2 = Vec::with_capacity(2);
    let mut m3 = Vec::with_capacity(2);
    for (i, plus) in [true, false].into_iter().enumerate() {
        let projector = embed_operator(&z_state(plus).outer(), 0, 3)?;
        let (conditional, p) = post_select(&joint, &projector)?;
        probs[i] = p;
        m2.push(partial_trace(&conditional, &[1])?);
        m3.push(partial_trace(&conditional, &[2])?);
    }
    let pair =
        |v: Vec<DensityOperator>| -> [DensityOperator; 2] { v.try_into().expect("two paths") };
    Ok(TripleScenario {
        state,
        diagnostics: TripleDiagnostics {
            path_probability: probs,
            marker2: pair(m2),
            marker3: pair(m3),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{trace_distance, ComplexMatrix};
    use crate::operators::local_pauli;
    use crate::states::{moment_table, variance};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn scenario(marker: Marker) -> Scenario {
        Scenario::new(marker, DEFAULT_GRID).unwrap()
    }

    fn phase(phi: f64) -> PhaseAngle {
        PhaseAngle::new(phi).unwrap()
    }

    fn joint(marker: Marker, phi: f64) -> DensityOperator {
        DensityOperator::from_pure(&scenario(marker).joint_state(phase(phi)), tol()).unwrap()
    }

    #[test]
    fn scenario_validation() {
        assert!(Scenario::new(Marker::Cnot, 3).is_err());
        assert!(Scenario::new(Marker::Partial(f64::NAN), 64).is_err());
        let phases = scenario(Marker::None).phases();
        assert_eq!(phases.len(), 64);
        assert_eq!(phases[0].radians(), 0.0);
        assert_eq!(phases[32].radians(), PI);
    }

    #[test]
    fn unmarked_fringes() {
        let scan = fringe_scan(&scenario(Marker::None)).unwrap();
        for (phi, p) in scan.phases.iter().zip(&scan.p0) {
            assert!((p - 0.5 * (1.0 + phi.radians().cos())).abs() <= 1e-12);
        }
        assert!((visibility(&scan).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn cnot_marked_fringes_are_flat() {
        let scan = fringe_scan(&scenario(Marker::Cnot)).unwrap();
        assert!(scan.p0.iter().all(|p| (p - 0.5).abs() <= 1e-12));
        assert!(visibility(&scan).unwrap() <= 1e-12);
    }

    #[test]
    fn partial_marker_fringes() {
        let scan = fringe_scan(&scenario(Marker::Partial(FRAC_PI_2))).unwrap();
        let c = FRAC_PI_4.cos();
        for (phi, p) in scan.phases.iter().zip(&scan.p0) {
            assert!((p - 0.5 * (1.0 + c * phi.radians().cos())).abs() <= 1e-12);
        }
        assert!((visibility(&scan).unwrap() - c).abs() <= 1e-12);
    }

    #[test]
    fn visibility_edge_cases() {
        let mut scan = fringe_scan(&scenario(Marker::None)).unwrap();
        scan.p0 = vec![0.0; 8];
        assert_eq!(visibility(&scan).unwrap(), 0.0);
        scan.p0.truncate(3);
        assert!(visibility(&scan).is_err());
        scan.p0.clear();
        assert!(visibility(&scan).is_err());
    }

    #[test]
    fn distinguishability_examples() {
        assert!(distinguishability(&joint(Marker::None, 0.3)).unwrap() <= 1e-12);
        for i in 0..8 {
            let phi = 0.8 * i as f64;
            assert!((distinguishability(&joint(Marker::Cnot, phi)).unwrap() - 1.0).abs() <= 1e-12);
        }
        for i in 1..20 {
            let theta = PI * i as f64 / 20.0;
            let d = distinguishability(&joint(Marker::Partial(theta), 0.0)).unwrap();
            assert!((d - (theta / 2.0).sin()).abs() <= 1e-12);
        }
        // single path: no which-path question
        let single =
            DensityOperator::from_pure(&z_state(true).kron(&z_state(true)).unwrap(), tol())
                .unwrap();
        assert_eq!(distinguishability(&single).unwrap(), 0.0);
        let qubit = DensityOperator::from_pure(&z_state(true), tol()).unwrap();
        assert!(distinguishability(&qubit).is_err());
    }

    #[test]
    fn distinguishability_is_trace_distance_for_equal_paths() {
        let rho = joint(Marker::Partial(1.1), 0.4);
        let mut markers = Vec::new();
        for plus in [true, false] {
            let projector = embed_operator(&z_state(plus).outer(), 0, 2).unwrap();
            let (cond, p) = post_select(&rho, &projector).unwrap();
            assert!((p - 0.5).abs() < 1e-14);
            markers.push(partial_trace(&cond, &[1]).unwrap());
        }
        let td = trace_distance(markers[0].matrix(), markers[1].matrix(), tol()).unwrap();
        assert!((distinguishability(&rho).unwrap() - td).abs() < 1e-14);
    }

    #[test]
    fn duality_identity_along_partial_family() {
        let mut last = DualityReport {
            visibility: 0.0,
            distinguishability: 2.0,
            duality_sum: 0.0,
        };
        for i in 1..100 {
            // decreasing θ towards the unresolved (Feynman) limit
            let theta = PI * (100 - i) as f64 / 100.0;
            let r = duality(&scenario(Marker::Partial(theta))).unwrap();
            assert!((r.duality_sum - 1.0).abs() <= 1e-9, "θ = {theta}: {r:?}");
            assert!(r.distinguishability < last.distinguishability);
            assert!(r.visibility > last.visibility);
            last = r;
        }
        for marker in [Marker::None, Marker::Cnot, Marker::BellPair] {
            let r = duality(&scenario(marker)).unwrap();
            assert!((r.duality_sum - 1.0).abs() <= 1e-9, "{marker}: {r:?}");
        }
    }

    #[test]
    fn grid_visibility_matches_closed_form_coherence() {
        for marker in [
            Marker::None,
            Marker::Cnot,
            Marker::Partial(0.7),
            Marker::Partial(2.9),
        ] {
            let v = visibility(&fringe_scan(&scenario(marker)).unwrap()).unwrap();
            let c = path_coherence(&joint(marker, 0.0)).unwrap();
            assert!((v - c).abs() <= 1e-12, "{marker}");
        }
    }

    #[test]
    fn pair_erasure_recovers_fringes() {
        let s = scenario(Marker::Cnot);
        let plus = erase(&s, ErasureSign::Plus).unwrap();
        let minus = erase(&s, ErasureSign::Minus).unwrap();
        let (pp, pm) = (
            plus.p_select.as_ref().unwrap(),
            minus.p_select.as_ref().unwrap(),
        );
        for i in 0..plus.phases.len() {
            let c = plus.phases[i].radians().cos();
            assert!((plus.p0[i] - 0.5 * (1.0 + c)).abs() <= 1e-12);
            assert!((minus.p0[i] - 0.5 * (1.0 - c)).abs() <= 1e-12);
            let mixture = pp[i] * plus.p0[i] + pm[i] * minus.p0[i];
            assert!((mixture - 0.5).abs() <= 1e-12);
            assert!((pp[i] + pm[i] - 1.0).abs() <= 1e-12);
        }
        assert!((visibility(&plus).unwrap() - 1.0).abs() <= 1e-12);
        assert!((visibility(&minus).unwrap() - 1.0).abs() <= 1e-12);
        assert!(erase(&scenario(Marker::None), ErasureSign::Plus).is_err());
    }

    #[test]
    fn erased_state_is_a_coherent_product() {
        for sign in [ErasureSign::Plus, ErasureSign::Minus] {
            let (cond, p) = erase_pair_state(&joint(Marker::Cnot, 0.0), sign).unwrap();
            assert!((p - 0.5).abs() < 1e-14);
            let sx1 = local_pauli(PauliAxis::X, 0, 2);
            let sx2 = local_pauli(PauliAxis::X, 1, 2);
            assert!(variance(&cond, &sx1).unwrap() <= 1e-10);
            assert!(variance(&cond, &sx2).unwrap() <= 1e-10);
            assert!(moment_table(&cond).unwrap().m[0][0].abs() <= 1e-10);
        }
    }

    fn displayed_triple_state() -> StateVector {
        // ½(|+z⟩(|-z,+z⟩ + |+z,-z⟩) + |-z⟩(|+z,+z⟩ + |-z,-z⟩)), index 4a + 2b + c
        let mut amps = vec![C64::new(0.0, 0.0); 8];
        for idx in [0b010, 0b001, 0b100, 0b111] {
            amps[idx] = C64::new(0.5, 0.0);
        }
        StateVector::new(amps).unwrap()
    }

    #[test]
    fn triple_state_matches_displayed_form() {
        let t = triple_scenario(phase(0.0)).unwrap();
        assert!((t.state.overlap(&displayed_triple_state()).unwrap() - 1.0).abs() <= 1e-12);
        let half = ComplexMatrix::identity(2).unwrap().scale_re(0.5);
        for i in 0..2 {
            assert!((t.diagnostics.path_probability[i] - 0.5).abs() <= 1e-12);
            assert!(t.diagnostics.marker2[i].matrix().max_abs_diff(&half) <= 1e-12);
            assert!(t.diagnostics.marker3[i].matrix().max_abs_diff(&half) <= 1e-12);
        }
        let reduced =
            partial_trace(&DensityOperator::from_pure(&t.state, tol()).unwrap(), &[0]).unwrap();
        assert!(reduced.matrix().max_abs_diff(&half) <= 1e-12);
    }

    #[test]
    fn triple_scenario_has_no_fringes() {
        let scan = fringe_scan(&scenario(Marker::BellPair)).unwrap();
        assert!(visibility(&scan).unwrap() <= 1e-12);
        let d = distinguishability(&joint(Marker::BellPair, 1.0)).unwrap();
        assert!((d - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn bell_doublet_basis() {
        let (plus_x, minus_x) = x_basis_states();
        let pp = plus_x.kron(&plus_x).unwrap();
        let mm = minus_x.kron(&minus_x).unwrap();
        assert!(
            bell_doublet_state(ErasureSign::Plus).max_abs_diff_scaled(&pp, C64::new(1.0, 0.0))
                < 1e-15
        );
        assert!(
            bell_doublet_state(ErasureSign::Minus).max_abs_diff_scaled(&mm, C64::new(-1.0, 0.0))
                < 1e-15
        );
    }

    #[test]
    fn bell_erasure_recovers_fringes() {
        let plus = bell_erasure(DEFAULT_GRID, ErasureSign::Plus).unwrap();
        let minus = erase(&scenario(Marker::BellPair), ErasureSign::Minus).unwrap();
        let (pp, pm) = (
            plus.p_select.as_ref().unwrap(),
            minus.p_select.as_ref().unwrap(),
        );
        for i in 0..plus.phases.len() {
            let c = plus.phases[i].radians().cos();
            assert!((plus.p0[i] - 0.5 * (1.0 + c)).abs() <= 1e-12);
            assert!((minus.p0[i] - 0.5 * (1.0 - c)).abs() <= 1e-12);
            assert!((pp[i] * plus.p0[i] + pm[i] * minus.p0[i] - 0.5).abs() <= 1e-12);
        }
        assert!((visibility(&plus).unwrap() - 1.0).abs() <= 1e-9);
        assert!((visibility(&minus).unwrap() - 1.0).abs() <= 1e-9);
        assert!(plus.condition.as_deref().unwrap().contains("Psi+"));
    }
}
