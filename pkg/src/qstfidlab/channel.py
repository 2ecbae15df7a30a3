"""Single-qubit excitation-preserving channel and its parallel n-qubit action.

The single-qubit map is parameterized by one complex transition amplitude
f = |f| e^{i phi}: populations damp toward |0><0| with weight 1-|f|^2 while
coherences pick up the factor f (resp. its conjugate).  |f| = 1 is a perfect
(SWAP-like) transfer; |f| = 0 resets every input to |0><0|.

A spin-chain provider computes f as a matrix element of the single-excitation
propagator of an XX chain (tridiagonal block: hopping 2*J_i from the Pauli
form of the couplings, diagonal 2*h_i - sum(h) from the fields).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .qstate import DensityMatrix, _lock

MAG_ATOL = 1e-10  # |f| overshoot clamp / CPTP tolerance
CHOI_ATOL = 1e-10
TP_ATOL = 1e-10


@dataclass(frozen=True)
class TransitionAmplitude:
    """Excitation transition amplitude with |f| in [0, 1]."""

    magnitude: float
    phase: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.magnitude) or not np.isfinite(self.phase):
            raise ValueError("transition amplitude must be finite")
        if self.magnitude < 0.0 or self.magnitude > 1.0:
            raise ValueError(
                f"transition amplitude magnitude {self.magnitude} outside [0, 1]"
            )
        object.__setattr__(self, "phase", float(np.mod(self.phase, 2.0 * np.pi)))
        object.__setattr__(self, "magnitude", float(self.magnitude))

    @property
    def value(self) -> complex:
        return self.magnitude * np.exp(1j * self.phase)

    @classmethod
    def from_complex(cls, f: complex, *, clamp_atol: float = MAG_ATOL) -> "TransitionAmplitude":
        mag = abs(f)
        if mag > 1.0:
            if mag > 1.0 + clamp_atol:
                raise ValueError(f"|f| = {mag} exceeds 1 beyond tolerance")
            mag = 1.0
        return cls(magnitude=mag, phase=float(np.angle(f)))


@dataclass(frozen=True)
class SingleQubitMap:
    """4x4 superoperator acting on vectorized (rho00, rho01, rho10, rho11)."""

    matrix: np.ndarray


@dataclass(frozen=True)
class ChainSpec:
    """Open chain of N sites with couplings J_1..J_{N-1} and fields h_1..h_N."""

    couplings: np.ndarray
    fields: np.ndarray

    def __post_init__(self):
        J = np.asarray(self.couplings, dtype=float).reshape(-1).copy()
        h = np.asarray(self.fields, dtype=float).reshape(-1).copy()
        if h.size < 1:
            raise ValueError("chain needs at least one site")
        if J.size != h.size - 1:
            raise ValueError(
                f"need N-1 couplings for N={h.size} sites, got {J.size}"
            )
        if J.size and np.min(J) <= 0.0:
            raise ValueError("couplings must be strictly positive")
        object.__setattr__(self, "couplings", _lock(J))
        object.__setattr__(self, "fields", _lock(h))

    @property
    def length(self) -> int:
        return self.fields.size

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ChainSpec":
        try:
            n = int(doc["N"])
            J = doc.get("J", [])
            h = doc.get("h", [0.0] * n)
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed chain document: {exc}") from exc
        if len(h) != n:
            raise ValueError(f"chain claims N={n} but carries {len(h)} fields")
        return cls(couplings=np.asarray(J, float), fields=np.asarray(h, float))

    @classmethod
    def load(cls, path) -> "ChainSpec":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))


def single_qubit_superoperator(f: TransitionAmplitude) -> SingleQubitMap:
    """Superoperator matrix of the excitation-preserving map for amplitude f."""
    fc = f.value
    mag2 = f.magnitude**2
    m = np.array(
        [
            [1.0, 0.0, 0.0, 1.0 - mag2],
            [0.0, fc, 0.0, 0.0],
            [0.0, 0.0, np.conj(fc), 0.0],
            [0.0, 0.0, 0.0, mag2],
        ],
        dtype=np.complex128,
    )
    return SingleQubitMap(matrix=_lock(m))


def _as_transition(f) -> TransitionAmplitude:
    if isinstance(f, TransitionAmplitude):
        return f
    return TransitionAmplitude.from_complex(complex(f))


def apply_parallel_channels(rho: DensityMatrix, fs) -> DensityMatrix:
    """Push rho through n independent single-qubit maps, one per qubit.

    ``fs`` lists one transition amplitude per qubit (qubit 1 first).  The
    composite map is applied qubit by qubit on the 2n-index tensor; the full
    4**n transfer tensor is never materialized.
    """
    n = rho.n_qubits
    amps = [_as_transition(f) for f in fs]
    if len(amps) != n:
        raise ValueError(f"need {n} transition amplitudes, got {len(amps)}")

    t = rho.entries.reshape((2,) * (2 * n))
    for k, f in enumerate(amps):
        fc = f.value
        mag2 = f.magnitude**2
        tt = np.moveaxis(t, (k, n + k), (0, 1))
        out = np.empty_like(tt)
        out[0, 0] = tt[0, 0] + (1.0 - mag2) * tt[1, 1]
        out[0, 1] = fc * tt[0, 1]
        out[1, 0] = np.conj(fc) * tt[1, 0]
        out[1, 1] = mag2 * tt[1, 1]
        t = np.moveaxis(out, (0, 1), (k, n + k))
    m = t.reshape(rho.dim, rho.dim)
    m = (m + m.conj().T) / 2.0  # exact Hermitian symmetrization
    return DensityMatrix(n_qubits=n, entries=_lock(m))


def apply_single_qubit_map(rho: DensityMatrix, m: SingleQubitMap, qubit: int) -> DensityMatrix:
    """Apply a raw 4x4 superoperator to one qubit (1-based) of rho."""
    n = rho.n_qubits
    if qubit < 1 or qubit > n:
        raise IndexError(f"qubit {qubit} out of range 1..{n}")
    S = m.matrix.reshape(2, 2, 2, 2)  # S[i, j, p, q] for (i,j) <- (p,q)
    k = qubit - 1
    t = rho.entries.reshape((2,) * (2 * n))
    t = np.moveaxis(t, (k, n + k), (0, 1))
    t = np.einsum("ijpq,pq...->ij...", S, t)
    t = np.moveaxis(t, (0, 1), (k, n + k))
    return DensityMatrix(n_qubits=n, entries=_lock(t.reshape(rho.dim, rho.dim).copy()))


def choi_matrix(m: SingleQubitMap) -> np.ndarray:
    """Choi matrix sum_ij |i><j| (x) Phi(|i><j|) of a single-qubit map."""
    S = m.matrix.reshape(2, 2, 2, 2)
    choi = np.zeros((4, 4), dtype=np.complex128)
    for p in range(2):
        for q in range(2):
            block = S[:, :, p, q]  # Phi(|p><q|)
            choi[2 * p: 2 * p + 2, 2 * q: 2 * q + 2] = block
    return choi


def is_cptp(m: SingleQubitMap, *, tp_atol: float = TP_ATOL, choi_atol: float = CHOI_ATOL) -> bool:
    """True iff the map is trace-preserving and completely positive."""
    S = m.matrix.reshape(2, 2, 2, 2)
    for p in range(2):
        for q in range(2):
            tr = S[0, 0, p, q] + S[1, 1, p, q]
            want = 1.0 if p == q else 0.0
            if abs(tr - want) > tp_atol:
                return False
    choi = choi_matrix(m)
    evals = np.linalg.eigvalsh((choi + choi.conj().T) / 2.0)
    return bool(evals.min() >= -choi_atol)


def excitation_hopping_matrix(spec: ChainSpec) -> np.ndarray:
    """Single-excitation block of the chain Hamiltonian (N x N, real symmetric)."""
    N = spec.length
    H = np.zeros((N, N))
    for i in range(N - 1):
        H[i, i + 1] = H[i + 1, i] = 2.0 * spec.couplings[i]
    hsum = float(np.sum(spec.fields))
    for i in range(N):
        H[i, i] = 2.0 * spec.fields[i] - hsum
    return H


def chain_transition_amplitude(spec: ChainSpec, sender: int, receiver: int, t: float) -> TransitionAmplitude:
    """Transition amplitude [e^{-iHt}]_{receiver, sender} in the one-excitation sector.

    Sites are 1-based; |f| <= 1 is guaranteed up to round-off and clamped
    within 1e-10.
    """
    N = spec.length
    if sender < 1 or sender > N or receiver < 1 or receiver > N:
        raise IndexError(f"sender/receiver must lie in 1..{N}")
    if t < 0.0:
        raise ValueError("time must be non-negative")
    H = excitation_hopping_matrix(spec)
    w, V = np.linalg.eigh(H)
    phases = np.exp(-1j * w * t)
    f = complex(V[receiver - 1] @ (phases * V[sender - 1].conj()))
    return TransitionAmplitude.from_complex(f)
