"""Minimal dense statevector simulator.

Exactly the primitives the search circuit needs: Hadamard, the (1,-1)
phase gate, value-conditioned multi-controlled flips and phase flips,
the inversion-about-average operator, marginal measurement, and state
comparison modulo global phase.

Conventions: qubit q is bit q of the basis-state integer index
(least-significant-bit first).  In any ordered qubit list paired with a
value or a bit pattern, bit b of the value corresponds to the b-th
qubit in the list.  Gates mutate the state in place and return it.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import CapacityError, DomainError

DEFAULT_QUBIT_CAP = 24
QUBIT_CAP_ENV_VAR = "PARITYSEARCH_QUBIT_CAP"

# Comparison tolerances: probabilities and norms are tight, fidelities get
# headroom for rounding across ~1e3 gate applications.
NORM_ATOL = 1e-12
FIDELITY_ATOL = 1e-10

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


def qubit_cap() -> int:
    """Effective qubit cap: the override env var, else the default of 24."""
    raw = os.environ.get(QUBIT_CAP_ENV_VAR)
    if raw is None:
        return DEFAULT_QUBIT_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise DomainError(f"{QUBIT_CAP_ENV_VAR} must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise DomainError(f"{QUBIT_CAP_ENV_VAR} must be >= 1, got {cap}")
    return cap


@dataclass(frozen=True)
class RegisterLayout:
    """Qubit map for the search circuit on item_bits*n_samples + N + 1 qubits.

    Sample register i (1-based) sits at qubits (i-1)*item_bits .. i*item_bits-1,
    incidence qubit j (1-based) at item_bits*n_samples + j - 1, and the
    ancilla is the final qubit.
    """

    item_bits: int
    n_samples: int
    n_items: int
    total_qubits: int = field(init=False)

    def __post_init__(self) -> None:
        if self.item_bits < 1 or self.n_items != 1 << self.item_bits:
            raise DomainError(
                f"item count {self.n_items} is not 2**{self.item_bits}"
            )
        if self.n_samples < 1:
            raise DomainError(f"sample count must be >= 1, got {self.n_samples}")
        object.__setattr__(
            self, "total_qubits", self.item_bits * self.n_samples + self.n_items + 1
        )

    def sample_qubits(self, i: int) -> tuple[int, ...]:
        """Qubits of sample register i, least significant first."""
        if not 1 <= i <= self.n_samples:
            raise DomainError(f"register index {i} outside 1..{self.n_samples}")
        start = (i - 1) * self.item_bits
        return tuple(range(start, start + self.item_bits))

    def all_sample_qubits(self) -> tuple[int, ...]:
        return tuple(range(self.item_bits * self.n_samples))

    def incidence_qubit(self, j: int) -> int:
        if not 1 <= j <= self.n_items:
            raise DomainError(f"item {j} outside 1..{self.n_items}")
        return self.item_bits * self.n_samples + j - 1

    def incidence_qubits(self) -> tuple[int, ...]:
        start = self.item_bits * self.n_samples
        return tuple(range(start, start + self.n_items))

    @property
    def ancilla_qubit(self) -> int:
        return self.item_bits * self.n_samples + self.n_items


class StateVector:
    """Dense complex amplitudes over n_qubits qubits."""

    __slots__ = ("n_qubits", "amplitudes")

    def __init__(self, n_qubits: int, amplitudes: np.ndarray):
        if amplitudes.shape != (1 << n_qubits,):
            raise DomainError(
                f"amplitude vector of length {amplitudes.shape} does not match {n_qubits} qubits"
            )
        self.n_qubits = n_qubits
        self.amplitudes = amplitudes

    def copy(self) -> StateVector:
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def zero_state(n_qubits: int, cap: int | None = None) -> StateVector:
    """The all-zero basis state, refusing to allocate above the qubit cap."""
    cap = qubit_cap() if cap is None else cap
    if n_qubits < 1:
        raise DomainError(f"qubit count must be >= 1, got {n_qubits}")
    if n_qubits > cap:
        raise CapacityError(f"{n_qubits} qubits requested, above the cap of {cap}")
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(n_qubits, amps)


def _check_qubit(state: StateVector, qubit: int) -> None:
    if not 0 <= qubit < state.n_qubits:
        raise DomainError(f"qubit {qubit} outside 0..{state.n_qubits - 1}")


def apply_hadamard(state: StateVector, qubit: int) -> StateVector:
    """Apply the 2x2 Hadamard on one qubit."""
    _check_qubit(state, qubit)
    v = state.amplitudes.reshape(-1, 2, 1 << qubit)
    lo = v[:, 0, :].copy()
    hi = v[:, 1, :]
    v[:, 0, :] = (lo + hi) * _INV_SQRT2
    v[:, 1, :] = (lo - hi) * _INV_SQRT2
    return state


def apply_sigma_z(state: StateVector, qubit: int) -> StateVector:
    """Negate amplitudes of basis states with the qubit set."""
    _check_qubit(state, qubit)
    v = state.amplitudes.reshape(-1, 2, 1 << qubit)
    v[:, 1, :] *= -1.0
    return state


def _validate_controls(state: StateVector, controls: Sequence[int], value: int) -> None:
    for q in controls:
        _check_qubit(state, q)
    if len(set(controls)) != len(controls):
        raise DomainError(f"duplicate control qubits in {tuple(controls)}")
    if value < 0 or value >> len(controls):
        raise DomainError(f"control value {value} does not fit {len(controls)} controls")


def _matching_indices(n_qubits: int, controls: Sequence[int], value: int, skip: int | None = None) -> np.ndarray:
    """Basis indices whose control bits spell `value` (and bit `skip` is 0).

    Built by depositing the free bits around the fixed ones, so the
    allocation is proportional to the number of matching states.
    """
    fixed = set(controls) | ({skip} if skip is not None else set())
    base = 0
    for b, q in enumerate(controls):
        base |= ((value >> b) & 1) << q
    free = [q for q in range(n_qubits) if q not in fixed]
    idx = np.full(1 << len(free), base, dtype=np.int64)
    enum = np.arange(1 << len(free), dtype=np.int64)
    for b, q in enumerate(free):
        idx |= ((enum >> b) & 1) << q
    return idx


def apply_value_controlled_flip(
    state: StateVector, controls: Sequence[int], value: int, target: int
) -> StateVector:
    """Flip the target bit on basis states whose control bits spell `value`."""
    _check_qubit(state, target)
    _validate_controls(state, controls, value)
    if target in controls:
        raise DomainError(f"target qubit {target} overlaps the controls")
    i0 = _matching_indices(state.n_qubits, controls, value, skip=target)
    i1 = i0 | (1 << target)
    amps = state.amplitudes
    tmp = amps[i0].copy()
    amps[i0] = amps[i1]
    amps[i1] = tmp
    return state


def apply_value_controlled_phase(
    state: StateVector, controls: Sequence[int], value: int
) -> StateVector:
    """Multiply by -1 the amplitudes whose control bits spell `value`."""
    _validate_controls(state, controls, value)
    idx = _matching_indices(state.n_qubits, controls, value)
    state.amplitudes[idx] *= -1.0
    return state


def apply_inversion_about_average(
    state: StateVector, register_qubits: Sequence[int]
) -> StateVector:
    """Apply H...H * diag(-1,1,...,1) * H...H on the register.

    Equals I - 2|s><s| on the register (|s> the uniform state): the
    textbook diffusion times a global phase of -1.
    """
    for q in register_qubits:
        apply_hadamard(state, q)
    apply_value_controlled_phase(state, register_qubits, 0)
    for q in register_qubits:
        apply_hadamard(state, q)
    return state


def marginal_distribution(state: StateVector, qubits: Sequence[int]) -> np.ndarray:
    """Probabilities of each bit pattern on the qubit subset.

    Bit b of the returned pattern index corresponds to qubits[b].
    """
    if len(set(qubits)) != len(qubits):
        raise DomainError(f"duplicate qubits in {tuple(qubits)}")
    for q in qubits:
        _check_qubit(state, q)
    n = state.n_qubits
    probs = state.probabilities().reshape([2] * n)
    keep = {n - 1 - q for q in qubits}
    drop = tuple(a for a in range(n) if a not in keep)
    reduced = probs.sum(axis=drop) if drop else probs
    # Remaining axes run over descending qubit number; reorder so that the
    # flattened index follows the requested qubit order.
    remaining = sorted(keep)
    perm = [remaining.index(n - 1 - q) for q in reversed(qubits)]
    return reduced.transpose(perm).reshape(-1)


def fidelity_mod_phase(a: StateVector, b: StateVector) -> float:
    """|<a|b>|, the overlap magnitude (global-phase invariant)."""
    if a.n_qubits != b.n_qubits:
        raise DomainError(f"dimension mismatch: {a.n_qubits} vs {b.n_qubits} qubits")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)))
