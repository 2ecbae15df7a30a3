"""Dense state and operator representation for small qubit registers.

Basis convention: qubit 1 is the most significant bit of the computational
basis index, so for three qubits |110> sits at index 6.  Qubit labels are
1-based everywhere in the public API.

All values are immutable after construction (arrays are locked read-only)
and safe to share across threads.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np

NORM_ATOL = 1e-12
HERM_ATOL = 1e-12
TRACE_ATOL = 1e-12
EIG_ATOL = 1e-10

_DEFAULT_MAX_QUBITS = 8
_MAX_QUBITS_ENV = "QSTFIDLAB_MAX_QUBITS"


def max_qubits() -> int:
    """Dimension cap for dense representations (env-overridable)."""
    raw = os.environ.get(_MAX_QUBITS_ENV)
    if raw is None:
        return _DEFAULT_MAX_QUBITS
    cap = int(raw)
    if cap < 1:
        raise ValueError(f"{_MAX_QUBITS_ENV} must be >= 1, got {cap}")
    return cap


def _check_qubit_count(n: int) -> None:
    cap = max_qubits()
    if n > cap:
        raise ValueError(
            f"{n} qubits exceeds the dense-representation cap of {cap} "
            f"(override with {_MAX_QUBITS_ENV})"
        )


def _lock(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class PureState:
    """Normalized pure state on ``n_qubits`` qubits.

    ``amplitudes`` holds the 2**n complex coefficients in big-endian basis
    order (qubit 1 = most significant bit).
    """

    n_qubits: int
    amplitudes: np.ndarray

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite operator."""

    n_qubits: int
    entries: np.ndarray

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits


def make_pure_state(amplitudes) -> PureState:
    """Build a normalized :class:`PureState` from a complex coefficient list.

    The length must be a power of two and the vector must not be (numerically)
    zero; the returned amplitudes are rescaled to unit norm.
    """
    a = np.asarray(amplitudes, dtype=np.complex128).reshape(-1).copy()
    dim = a.size
    if dim < 2 or dim & (dim - 1):
        raise ValueError(f"amplitude count must be a power of two >= 2, got {dim}")
    n = dim.bit_length() - 1
    _check_qubit_count(n)
    norm = np.linalg.norm(a)
    if norm < 1e-300:
        raise ValueError("cannot normalize an all-zero amplitude vector")
    a /= norm
    return PureState(n_qubits=n, amplitudes=_lock(a))


def validate_density(rho: DensityMatrix) -> None:
    """Raise if ``rho`` violates Hermiticity, unit trace, or positivity."""
    m = rho.entries
    if np.max(np.abs(m - m.conj().T)) > HERM_ATOL:
        raise ValueError("density matrix is not Hermitian within tolerance")
    if abs(np.trace(m).real - 1.0) > TRACE_ATOL or abs(np.trace(m).imag) > TRACE_ATOL:
        raise ValueError("density matrix trace differs from 1 beyond tolerance")
    if np.min(np.linalg.eigvalsh((m + m.conj().T) / 2.0)) < -EIG_ATOL:
        raise ValueError("density matrix has an eigenvalue below -1e-10")


def make_density(entries, *, check: bool = True) -> DensityMatrix:
    """Wrap a 2**n x 2**n matrix as a :class:`DensityMatrix`."""
    m = np.asarray(entries, dtype=np.complex128).copy()
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {m.shape}")
    dim = m.shape[0]
    if dim < 2 or dim & (dim - 1):
        raise ValueError(f"density matrix dimension must be a power of two, got {dim}")
    n = dim.bit_length() - 1
    _check_qubit_count(n)
    rho = DensityMatrix(n_qubits=n, entries=_lock(m))
    if check:
        validate_density(rho)
    return rho


def density_from_pure(psi: PureState) -> DensityMatrix:
    """Rank-one projector |psi><psi|."""
    m = np.outer(psi.amplitudes, psi.amplitudes.conj())
    return DensityMatrix(n_qubits=psi.n_qubits, entries=_lock(m))


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Reduced density matrix on the kept qubits (1-based labels).

    The kept qubits retain their relative big-endian order.
    """
    keep = sorted(set(int(q) for q in keep))
    n = rho.n_qubits
    if not keep:
        raise IndexError("keep set must not be empty")
    if keep[0] < 1 or keep[-1] > n:
        raise IndexError(f"keep set {keep} out of range for {n} qubits")

    t = rho.entries.reshape((2,) * (2 * n))
    traced = 0
    for q in range(n, 0, -1):  # trace high labels first so lower axes keep positions
        if q in keep:
            continue
        ax = q - 1
        half = (2 * n - 2 * traced) // 2
        t = np.trace(t, axis1=ax, axis2=ax + half)
        traced += 1
    k = len(keep)
    out = t.reshape(1 << k, 1 << k).copy()
    return DensityMatrix(n_qubits=k, entries=_lock(out))


def purity(rho: DensityMatrix) -> float:
    """Tr rho^2, in [1/2**n, 1]."""
    m = rho.entries
    return float(np.real(np.sum(m * m.T.conj())))


# ---------------------------------------------------------------------------
# JSON state files: {"n_qubits": k, "amplitudes": [[re, im], ...]}
# Floats are emitted with 17 significant digits so values round-trip bit-exactly.
# ---------------------------------------------------------------------------

def _f17(x: float) -> float:
    return float(format(float(x), ".17g"))


def state_to_json_dict(psi: PureState) -> dict:
    return {
        "n_qubits": psi.n_qubits,
        "amplitudes": [[_f17(z.real), _f17(z.imag)] for z in psi.amplitudes],
    }


def state_from_json_dict(doc: dict) -> PureState:
    try:
        n = int(doc["n_qubits"])
        pairs = doc["amplitudes"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed state document: {exc}") from exc
    if len(pairs) != (1 << n):
        raise ValueError(
            f"state file claims {n} qubits but carries {len(pairs)} amplitudes"
        )
    amps = np.array([complex(re, im) for re, im in pairs], dtype=np.complex128)
    return make_pure_state(amps)


def save_state(psi: PureState, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(state_to_json_dict(psi), fh)
        fh.write("\n")


def load_state(path) -> PureState:
    with open(path, "r", encoding="utf-8") as fh:
        return state_from_json_dict(json.load(fh))


def density_to_json_dict(rho: DensityMatrix) -> dict:
    flat = rho.entries.reshape(-1)
    return {
        "n_qubits": rho.n_qubits,
        "entries": [[_f17(z.real), _f17(z.imag)] for z in flat],
    }
