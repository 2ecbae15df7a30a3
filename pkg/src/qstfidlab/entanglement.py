"""Entanglement monotones and invariant polynomials for 2- and 3-qubit states.

Index convention, fixed once here: qubits (1, 2, 3) = (A, B, C), and the
pair-concurrence/invariant correspondence is C_BC^2 = 4 J1, C_AC^2 = 4 J2,
C_AB^2 = 4 J3 (the invariant index is the qubit NOT in the pair).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .qstate import DensityMatrix, PureState, density_from_pure, make_pure_state, partial_trace

CLAMP_ATOL = 1e-9  # negative round-off below this magnitude is an error, not noise

_SY = np.array([[0.0, -1j], [1j, 0.0]])
_YY = np.kron(_SY, _SY)

# invariant index i <-> pair jk with i not in {j,k}; see module docstring
PAIR_OF_INVARIANT = {1: (2, 3), 2: (1, 3), 3: (1, 2)}


@dataclass(frozen=True)
class CanonicalState:
    """Five-coefficient canonical form of a 3-qubit pure state.

    Coefficients lam[0..4] are non-negative with sum of squares 1; the single
    phase phi in [0, pi] multiplies the lam[1] term.
    """

    lams: np.ndarray
    phi: float

    def __post_init__(self):
        lam = np.asarray(self.lams, dtype=float).reshape(-1).copy()
        if lam.size != 5:
            raise ValueError(f"canonical form needs 5 coefficients, got {lam.size}")
        if np.min(lam) < 0.0:
            raise ValueError("canonical coefficients must be non-negative")
        if abs(np.sum(lam**2) - 1.0) > 1e-12:
            raise ValueError("canonical coefficients must have unit square-sum")
        if not 0.0 <= self.phi <= np.pi:
            raise ValueError(f"phase {self.phi} outside [0, pi]")
        lam.setflags(write=False)
        object.__setattr__(self, "lams", lam)
        object.__setattr__(self, "phi", float(self.phi))

    @classmethod
    def from_json_dict(cls, doc: dict) -> "CanonicalState":
        try:
            lam = np.asarray(doc["lambda"], dtype=float)
            phi = float(doc.get("phi", 0.0))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed canonical-state document: {exc}") from exc
        norm = np.linalg.norm(lam)
        if norm < 1e-300:
            raise ValueError("canonical coefficients are all zero")
        return cls(lams=lam / norm, phi=phi)

    @classmethod
    def load(cls, path) -> "CanonicalState":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))


@dataclass(frozen=True)
class InvariantSet:
    """The five local-unitary invariant polynomials J1..J5."""

    J1: float
    J2: float
    J3: float
    J4: float
    J5: float

    def as_array(self) -> np.ndarray:
        return np.array([self.J1, self.J2, self.J3, self.J4, self.J5])


@dataclass(frozen=True)
class MeasureSet:
    """Pairwise squared concurrences, squared three-tangle, GME concurrence."""

    C_AB: float
    C_AC: float
    C_BC: float
    tau3_sq: float
    C_GME: float


def _clamp0(x: float, atol: float = CLAMP_ATOL) -> float:
    if x < -atol:
        raise ValueError(f"negative value {x} exceeds round-off tolerance {atol}")
    return max(0.0, x)


def schmidt_state_2q(s: float) -> PureState:
    """Two-qubit Schmidt state sqrt((1+s)/2)|00> + sqrt((1-s)/2)|11>.

    Its concurrence is sqrt(1 - s^2), so s sweeps product (s = +-1) to Bell
    (s = 0).
    """
    if not -1.0 <= s <= 1.0:
        raise ValueError(f"Schmidt parameter {s} outside [-1, 1]")
    a = np.zeros(4, dtype=np.complex128)
    a[0] = np.sqrt((1.0 + s) / 2.0)
    a[3] = np.sqrt((1.0 - s) / 2.0)
    return make_pure_state(a)


def concurrence_pure_2q(psi: PureState) -> float:
    """Concurrence 2 |a0 a3 - a1 a2| of a two-qubit pure state."""
    if psi.n_qubits != 2:
        raise ValueError(f"need a 2-qubit state, got {psi.n_qubits} qubits")
    a = psi.amplitudes
    c = 2.0 * abs(a[0] * a[3] - a[1] * a[2])
    return float(min(c, 1.0))


def concurrence_mixed_2q(rho: DensityMatrix) -> float:
    """Wootters concurrence of a two-qubit density matrix."""
    if rho.n_qubits != 2:
        raise ValueError(f"need a 2-qubit density matrix, got {rho.n_qubits} qubits")
    m = rho.entries
    rt = m @ _YY @ m.conj() @ _YY
    evals = np.linalg.eigvals(rt)
    # eigenvalues are >= 0 up to round-off; tiny negatives/imaginaries are noise
    re = np.real(evals)
    for x in re:
        _clamp0(float(x))
    mu = np.sqrt(np.clip(re, 0.0, None))
    mu.sort()
    return float(max(0.0, mu[3] - mu[2] - mu[1] - mu[0]))


def one_tangle(psi: PureState, cut: int) -> float:
    """Entanglement 4 det(rho_cut) of one qubit with the rest (3-qubit state)."""
    if psi.n_qubits != 3:
        raise ValueError(f"need a 3-qubit state, got {psi.n_qubits} qubits")
    rho = partial_trace(density_from_pure(psi), {cut})
    m = rho.entries
    det = np.real(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    return float(min(_clamp0(4.0 * det), 1.0))


def _pair_concurrences(psi: PureState) -> tuple[float, float, float]:
    rho = density_from_pure(psi)
    c_ab = concurrence_mixed_2q(partial_trace(rho, {1, 2}))
    c_ac = concurrence_mixed_2q(partial_trace(rho, {1, 3}))
    c_bc = concurrence_mixed_2q(partial_trace(rho, {2, 3}))
    return c_ab, c_ac, c_bc


def three_tangle_sq(psi: PureState) -> float:
    """Squared three-tangle via the monogamy residual of qubit A."""
    if psi.n_qubits != 3:
        raise ValueError(f"need a 3-qubit state, got {psi.n_qubits} qubits")
    c_ab, c_ac, _ = _pair_concurrences(psi)
    resid = one_tangle(psi, 1) - c_ab**2 - c_ac**2
    return float(min(_clamp0(resid), 1.0))


def measures_from_state(psi: PureState) -> MeasureSet:
    """All pairwise concurrences plus tau3^2 and C_GME of a 3-qubit pure state."""
    if psi.n_qubits != 3:
        raise ValueError(f"need a 3-qubit state, got {psi.n_qubits} qubits")
    c_ab, c_ac, c_bc = _pair_concurrences(psi)
    tau2 = float(min(_clamp0(one_tangle(psi, 1) - c_ab**2 - c_ac**2), 1.0))
    j1, j2, j3 = c_bc**2 / 4.0, c_ac**2 / 4.0, c_ab**2 / 4.0
    gme = 4.0 * (min(j2 + j3, j1 + j3, j1 + j2) + tau2 / 4.0)
    return MeasureSet(C_AB=c_ab, C_AC=c_ac, C_BC=c_bc, tau3_sq=tau2, C_GME=float(min(gme, 1.0)))


def invariants_from_canonical(c: CanonicalState) -> InvariantSet:
    """The five invariant polynomials evaluated on canonical coefficients."""
    l0, l1, l2, l3, l4 = c.lams
    j1 = abs(l1 * l4 * np.exp(1j * c.phi) - l2 * l3) ** 2
    j2 = l0**2 * l2**2
    j3 = l0**2 * l3**2
    j4 = l0**2 * l4**2
    j5 = l0**2 * (j1 + l2**2 * l3**2 - l1**2 * l4**2)
    return InvariantSet(J1=float(j1), J2=float(j2), J3=float(j3), J4=float(j4), J5=float(j5))


def canonical_to_state(c: CanonicalState) -> PureState:
    """Expand the canonical form into amplitudes: indices 0, 4, 5, 6, 7."""
    a = np.zeros(8, dtype=np.complex128)
    l0, l1, l2, l3, l4 = c.lams
    a[0b000] = l0
    a[0b100] = l1 * np.exp(1j * c.phi)
    a[0b101] = l2
    a[0b110] = l3
    a[0b111] = l4
    return make_pure_state(a)


def gme_concurrence(J: InvariantSet) -> float:
    """GME concurrence 4 (min{J2+J3, J1+J3, J1+J2} + J4)."""
    return 4.0 * (min(J.J2 + J.J3, J.J1 + J.J3, J.J1 + J.J2) + J.J4)
