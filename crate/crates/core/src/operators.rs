//! Named operators and states of the which-path model.
//!
//! Basis convention: `|+z>` is index 0, `|-z>` index 1, and the first
//! subsystem is the outer Kronecker factor.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use serde::Serialize;

use crate::linalg::{ComplexMatrix, StateVector, C64};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PauliAxis {
    Identity,
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const XYZ: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    /// Single-character label; `0` for the identity.
    pub fn label(self) -> &'static str {
        match self {
            PauliAxis::Identity => "0",
            PauliAxis::X => "x",
            PauliAxis::Y => "y",
            PauliAxis::Z => "z",
        }
    }

    /// Position in `x, y, z` order, `None` for the identity.
    pub fn index(self) -> Option<usize> {
        match self {
            PauliAxis::Identity => None,
            PauliAxis::X => Some(0),
            PauliAxis::Y => Some(1),
            PauliAxis::Z => Some(2),
        }
    }

    /// The axis completing `{self, other}` to `{x, y, z}`, with the sign of
    /// the Levi-Civita symbol `ε_{self,other,third}`.
    pub fn complement(self, other: PauliAxis) -> Option<(PauliAxis, f64)> {
        let (a, b) = (self.index()?, other.index()?);
        if a == b {
            return None;
        }
        let c = 3 - a - b;
        let sign = if (b + 3 - a) % 3 == 1 { 1.0 } else { -1.0 };
        Some((PauliAxis::XYZ[c], sign))
    }
}

impl fmt::Display for PauliAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Index pair `(j, k)` of the two-particle operator `σ_j ⊗ σ_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct KLabel {
    pub j: PauliAxis,
    pub k: PauliAxis,
}

impl KLabel {
    pub fn new(j: PauliAxis, k: PauliAxis) -> Self {
        Self { j, k }
    }
}

/// Phase `φ` of the path superposition, in radians.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct PhaseAngle(f64);

impl PhaseAngle {
    /// `None` for non-finite input.
    pub fn new(phi: f64) -> Option<Self> {
        phi.is_finite().then_some(Self(phi))
    }

    pub fn radians(self) -> f64 {
        self.0
    }
}

pub fn pauli(axis: PauliAxis) -> ComplexMatrix {
    let entries = match axis {
        PauliAxis::Identity => [ONE, ZERO, ZERO, ONE],
        PauliAxis::X => [ZERO, ONE, ONE, ZERO],
        PauliAxis::Y => [ZERO, -I, I, ZERO],
        PauliAxis::Z => [ONE, ZERO, ZERO, -ONE],
    };
    ComplexMatrix::from_row_major(2, entries.to_vec()).expect("2x2 Pauli")
}

/// `σ_j ⊗ σ_k`; `(Identity, Identity)` is the 4×4 identity.
pub fn k_operator(label: KLabel) -> ComplexMatrix {
    pauli(label.j).kron(&pauli(label.k)).expect("4x4 product")
}

/// Operator `σ_axis` acting on qubit `qubit` of an `n_qubits` register.
pub fn local_pauli(axis: PauliAxis, qubit: usize, n_qubits: usize) -> ComplexMatrix {
    assert!(qubit < n_qubits && (1..=3).contains(&n_qubits));
    let mut op = if qubit == 0 {
        pauli(axis)
    } else {
        pauli(PauliAxis::Identity)
    };
    for q in 1..n_qubits {
        let factor = if q == qubit {
            pauli(axis)
        } else {
            pauli(PauliAxis::Identity)
        };
        op = op.kron(&factor).expect("at most three qubits");
    }
    op
}

/// Places `op`, acting on `log2(op.dim())` consecutive qubits starting at
/// `first_qubit`, into an `n_qubits` register padded with identities.
pub fn embed_operator(
    op: &ComplexMatrix,
    first_qubit: usize,
    n_qubits: usize,
) -> crate::error::Result<ComplexMatrix> {
    let width = op.dim().trailing_zeros() as usize;
    if first_qubit + width > n_qubits {
        return Err(crate::error::Error::InvalidSelector(format!(
            "operator on qubits {first_qubit}..{} exceeds a {n_qubits}-qubit register",
            first_qubit + width
        )));
    }
    let id = pauli(PauliAxis::Identity);
    let mut out: Option<ComplexMatrix> = None;
    let mut q = 0;
    while q < n_qubits {
        let factor = if q == first_qubit { op } else { &id };
        out = Some(match out {
            None => factor.clone(),
            Some(acc) => acc.kron(factor)?,
        });
        q += if q == first_qubit { width } else { 1 };
    }
    Ok(out.expect("n_qubits >= 1"))
}

/// Marking gate: flips subsystem 2 when subsystem 1 is `|+z>`.
///
/// `|+z,+z> -> |+z,-z>`, `|+z,-z> -> |+z,+z>`, and the `|-z>` block is left
/// alone. All non-zero entries are `+1`.
pub fn cnot() -> ComplexMatrix {
    let perm = [1usize, 0, 2, 3];
    ComplexMatrix::from_fn(4, |r, c| if perm[c] == r { ONE } else { ZERO }).expect("4x4")
}

/// Controlled x-rotation of the marker by `theta` when subsystem 1 is
/// `|+z>`. `theta = 0` is no marking; `theta = π` is [`cnot`] with a phase
/// `-i` on the controlled block.
pub fn partial_marker(theta: f64) -> ComplexMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    let block = [C64::new(c, 0.0), -I * s, -I * s, C64::new(c, 0.0)];
    ComplexMatrix::from_fn(4, |r, col| match (r / 2, col / 2) {
        (0, 0) => block[2 * (r % 2) + col % 2],
        (1, 1) if r == col => ONE,
        _ => ZERO,
    })
    .expect("4x4")
}

/// `(|+z> + e^{iφ}|-z>)/√2`.
pub fn phase_state(phi: PhaseAngle) -> StateVector {
    let amp = C64::from_polar(FRAC_1_SQRT_2, phi.radians());
    StateVector::new(vec![C64::new(FRAC_1_SQRT_2, 0.0), amp]).expect("dim 2")
}

/// `(|+z,+z> + |-z,-z>)/√2`.
pub fn bell_phi_plus() -> StateVector {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    StateVector::new(vec![h, ZERO, ZERO, h]).expect("dim 4")
}

/// `(|+z,-z> + |-z,+z>)/√2`.
pub fn bell_psi_plus() -> StateVector {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    StateVector::new(vec![ZERO, h, h, ZERO]).expect("dim 4")
}

/// `(|+x>, |-x>)` with `|±x> = (|+z> ± |-z>)/√2`.
pub fn x_basis_states() -> (StateVector, StateVector) {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    (
        StateVector::new(vec![h, h]).expect("dim 2"),
        StateVector::new(vec![h, -h]).expect("dim 2"),
    )
}

/// `|+z>` or `|-z>`.
pub fn z_state(plus: bool) -> StateVector {
    StateVector::basis(2, if plus { 0 } else { 1 }).expect("dim 2")
}
