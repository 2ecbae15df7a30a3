"""Closed-form average fidelities and reduction factors.

Everything here is a pure scalar function.  The single-qubit average fidelity
F1 = 1/3 + |1+f|^2 / 6 is the common currency: the n-qubit averages decompose
as F1^n minus an entanglement weight times a reduction factor R_n.
"""

from __future__ import annotations

import numpy as np

from .entanglement import InvariantSet, MeasureSet
from .qstate import DensityMatrix, PureState

THREE_QUBIT_TAGS = ("c1", "c2a", "c2b", "c3a", "c3b", "c4a", "c4b", "c4c", "c4d")
FOUR_QUBIT_TAGS = ("GHZ4", "Cl4", "X4", "B2", "W4")

# class-averaged reduction coefficients: <F_class> = F1^3 - coeff * R3
CLASS_AVG_COEFF = {
    "c1": 0.0,
    "c2a": 1.0 / 3.0,
    "c2b": 1.0,
    "c3a": 1.0,
    "c3b": 4.0 / 3.0,
    "c4a": 1.0,
    "c4b": 5.0 / 3.0,
    "c4c": 2.0,
    "c4d": 2.0,
}

REDUCTION_KINDS = ("R2", "R3", "R4a", "R4b")


def fidelity(psi: PureState, rho: DensityMatrix) -> float:
    """Overlap <psi| rho |psi>, clamped to [0, 1] against round-off."""
    if psi.n_qubits != rho.n_qubits:
        raise ValueError(
            f"dimension mismatch: state on {psi.n_qubits} qubits, "
            f"operator on {rho.n_qubits}"
        )
    a = psi.amplitudes
    val = float(np.real(a.conj() @ rho.entries @ a))
    if val < -1e-12 or val > 1.0 + 1e-12:
        raise ValueError(f"fidelity {val} outside [0, 1] beyond round-off")
    return min(max(val, 0.0), 1.0)


def _as_complex_amplitude(f) -> complex:
    value = getattr(f, "value", None)
    if value is not None:
        return complex(value)
    return complex(f)


def avg_fidelity_single(f) -> float:
    """Single-qubit average fidelity 1/3 + |1+f|^2 / 6.

    For real f this is (3 + 2|f| + |f|^2)/6; the worst phase (f = -1)
    gives 1/3.
    """
    fc = _as_complex_amplitude(f)
    return 1.0 / 3.0 + abs(1.0 + fc) ** 2 / 6.0


def avg_fidelity_haar_closed(n: int, f) -> float:
    """Average fidelity over all n-qubit pure states (closed form).

    1/(2^n + 1) + |1 + f|^{2n} / (2^n (2^n + 1)).
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    fc = _as_complex_amplitude(f)
    d = float(1 << n)
    return 1.0 / (d + 1.0) + abs(1.0 + fc) ** (2 * n) / (d * (d + 1.0))


def _check_f1(f1: float) -> float:
    f1 = float(f1)
    if not 0.5 - 1e-12 <= f1 <= 1.0 + 1e-12:
        raise ValueError(f"single-qubit average fidelity {f1} outside [1/2, 1]")
    return min(max(f1, 0.5), 1.0)


def reduction_factor(kind: str, f1: float) -> float:
    """Reduction factor R2, R3, R4a, or R4b at single-qubit fidelity f1.

    R2  = (F1 - 1/2)(1 - F1)
    R3  = F1 (F1 - 1/2)(1 - F1)
    R4a = F1 (F1 - 1/2)(1 - F1)(1 - 3 F1 + 4 F1^2)
    R4b = F1^2 (F1 - 1/2)(1 - F1)

    All vanish at both ends of [1/2, 1] and are non-negative inside.
    """
    f1 = _check_f1(f1)
    base = (f1 - 0.5) * (1.0 - f1)
    if kind == "R2":
        return base
    if kind == "R3":
        return f1 * base
    if kind == "R4a":
        return f1 * base * (1.0 - 3.0 * f1 + 4.0 * f1 * f1)
    if kind == "R4b":
        return f1 * f1 * base
    raise ValueError(f"unknown reduction kind {kind!r}; expected one of {REDUCTION_KINDS}")


def avg_fidelity_2q_fixed_concurrence(f1: float, concurrence: float) -> float:
    """Two-qubit average at fixed concurrence: F1^2 - 2 R2 C^2."""
    if not 0.0 <= concurrence <= 1.0:
        raise ValueError(f"concurrence {concurrence} outside [0, 1]")
    f1 = _check_f1(f1)
    return f1 * f1 - 2.0 * reduction_factor("R2", f1) * concurrence**2


def avg_fidelity_3q_fixed_invariants(f1: float, J: InvariantSet) -> float:
    """Three-qubit average at fixed invariants: F1^3 - 8 R3 (J1+J2+J3+(3/2)J4)."""
    for name, val in (("J1", J.J1), ("J2", J.J2), ("J3", J.J3), ("J4", J.J4)):
        if not -1e-12 <= val <= 0.25 + 1e-12:
            raise ValueError(f"{name} = {val} outside [0, 1/4]")
    f1 = _check_f1(f1)
    weight = J.J1 + J.J2 + J.J3 + 1.5 * J.J4
    return f1**3 - 8.0 * reduction_factor("R3", f1) * weight


def class_entanglement_weight(tag: str, measures: MeasureSet) -> float:
    """Entanglement weight w in <F_class> = F1^3 - R3 w, from class-relevant measures.

    Per class only the measures its states can carry are read: pair
    concurrences for the W-type and biseparable classes, tau3^2 for the
    GHZ-type ones.  On-class this reduces to the per-class expressions
    (e.g. 2 C_jk^2 for a biseparable state entangled in pair jk).
    """
    if tag not in THREE_QUBIT_TAGS:
        raise ValueError(f"unknown 3-qubit class tag {tag!r}")
    for name in ("C_AB", "C_AC", "C_BC", "tau3_sq"):
        val = getattr(measures, name)
        if not -1e-12 <= val <= 1.0 + 1e-12:
            raise ValueError(f"{name} = {val} outside [0, 1]")
    csum = measures.C_AB**2 + measures.C_AC**2 + measures.C_BC**2
    if tag == "c1":
        return 0.0
    if tag == "c2a":
        return 2.0 * csum
    if tag == "c2b":
        return 3.0 * measures.tau3_sq
    if tag in ("c3a", "c4a"):
        return 2.0 * csum
    # GHZ-type classes with both pair and genuinely tripartite content
    return 2.0 * csum + 3.0 * measures.tau3_sq


def class_fixed_entanglement_fidelity(tag: str, f1: float, measures: MeasureSet) -> float:
    """Three-qubit class average at fixed entanglement: F1^3 - R3 w(class)."""
    f1 = _check_f1(f1)
    w = class_entanglement_weight(tag, measures)
    return f1**3 - reduction_factor("R3", f1) * w


def class_avg_fidelity(tag: str, f1: float) -> float:
    """Class-averaged three-qubit fidelity F1^3 - coeff(class) * R3."""
    if tag not in CLASS_AVG_COEFF:
        raise ValueError(f"unknown 3-qubit class tag {tag!r}")
    f1 = _check_f1(f1)
    return f1**3 - CLASS_AVG_COEFF[tag] * reduction_factor("R3", f1)


def haar_avg_fidelity_3q(f1: float) -> float:
    """Full three-qubit average F1^3 - 2 R3 (all classes pooled)."""
    f1 = _check_f1(f1)
    return f1**3 - 2.0 * reduction_factor("R3", f1)


def four_qubit_avg_fidelity(tag: str, f1: float) -> float:
    """Local-unitary averages of the five named four-qubit states.

    GHZ4/B2: F1^4 - 2 R4a;  Cl4/X4: F1^4 - 4 R4b;  W4: F1^4 - 3 R4b.

    Note: for GHZ4/B2 this carries the extra F1 weight of R4a in its
    reduction term.  Monte-Carlo verification singles out the unweighted
    variant (:func:`four_qubit_orbit_fidelity`) as the form the channel
    average actually realizes; this function keeps the documented interface.
    """
    f1 = _check_f1(f1)
    if tag in ("GHZ4", "B2"):
        return f1**4 - 2.0 * reduction_factor("R4a", f1)
    if tag in ("Cl4", "X4"):
        return f1**4 - 4.0 * reduction_factor("R4b", f1)
    if tag == "W4":
        return f1**4 - 3.0 * reduction_factor("R4b", f1)
    raise ValueError(f"unknown 4-qubit tag {tag!r}; expected one of {FOUR_QUBIT_TAGS}")


def four_qubit_orbit_fidelity(tag: str, f1: float) -> float:
    """Exact local-unitary orbit averages of the named four-qubit states.

    Derived from the correlation-weight decomposition of each state: with
    g = 2 F1 - 1,  <F> = (1/16) sum_s W_s g^s  where W_s is the squared
    correlation weight on supports of size s.  For Cl4, X4 and W4 this
    coincides with :func:`four_qubit_avg_fidelity`; for GHZ4/B2 the reduction
    term is 2 (F1 - 1/2)(1 - F1)(1 - 3 F1 + 4 F1^2), without the extra F1
    factor (equivalently <F_B2> = <F_Bell>^2).
    """
    f1 = _check_f1(f1)
    if tag in ("GHZ4", "B2"):
        return f1**4 - 2.0 * (f1 - 0.5) * (1.0 - f1) * (1.0 - 3.0 * f1 + 4.0 * f1 * f1)
    return four_qubit_avg_fidelity(tag, f1)
