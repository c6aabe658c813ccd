"""Truncated bosonic operators and the four-mode circuit Hamiltonian.

The device is modeled as four Kerr oscillators: two fixed-frequency
transmon qubits exchange-coupled to a bus resonator (above the qubits in
frequency) and to a flux-tunable transmon coupler (below).  Operators
live on the tensor product of truncated Fock spaces with the fixed mode
ordering (Q1, Q2, bus, tunable coupler).

All frequencies are stored as angular rates (rad/s).  File and CLI
boundaries speak GHz/MHz and convert with an explicit factor of 2*pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import reduce

import numpy as np

TWO_PI = 2.0 * math.pi

#: Default Fock truncation (Q1, Q2, bus, coupler).  Four levels per
#: transmon-like mode and three for the linear bus are enough for the
#: fourth-order ZZ physics; see the convergence check in `spectrum`.
DEFAULT_DIMS = (4, 4, 3, 4)


class Mode(Enum):
    """Labels for the four circuit modes."""

    Q1 = "q1"
    Q2 = "q2"
    BUS_PLUS = "bus_plus"
    COUPLER_MINUS = "coupler_minus"

    @property
    def is_qubit(self) -> bool:
        return self in (Mode.Q1, Mode.Q2)


QUBITS = (Mode.Q1, Mode.Q2)
COUPLERS = (Mode.BUS_PLUS, Mode.COUPLER_MINUS)
MODE_ORDER = (Mode.Q1, Mode.Q2, Mode.BUS_PLUS, Mode.COUPLER_MINUS)


@dataclass(frozen=True)
class ModeSpec:
    """A single mode and its Fock truncation (number of retained levels)."""

    label: Mode
    dim: int

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError(f"mode {self.label.value}: dim must be >= 2, got {self.dim}")


@dataclass(frozen=True)
class HilbertSpace:
    """An ordered set of truncated modes.

    Mode order is significant: tensor embeddings follow it, and the four
    device modes must appear in the canonical order (Q1, Q2, bus, coupler)
    so that bare occupation tuples read (n1, n2, n+, n-).
    """

    modes: tuple[ModeSpec, ...]

    def __post_init__(self):
        labels = [m.label for m in self.modes]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate mode labels in space: {labels}")
        canon = [MODE_ORDER.index(lbl) for lbl in labels]
        if canon != sorted(canon):
            raise ValueError(f"modes must follow the order {[m.value for m in MODE_ORDER]}")

    @classmethod
    def default(cls, dims: tuple[int, ...] = DEFAULT_DIMS) -> "HilbertSpace":
        """The full four-mode space with the given per-mode truncations."""
        if len(dims) != 4:
            raise ValueError(f"need 4 dims (q1, q2, bus, coupler), got {dims}")
        return cls(tuple(ModeSpec(lbl, d) for lbl, d in zip(MODE_ORDER, dims)))

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(m.dim for m in self.modes)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims))

    def has(self, mode: Mode) -> bool:
        return any(m.label is mode for m in self.modes)

    def axis(self, mode: Mode) -> int:
        for i, m in enumerate(self.modes):
            if m.label is mode:
                return i
        raise ValueError(f"mode {mode.value} not in space")

    def dim_of(self, mode: Mode) -> int:
        return self.modes[self.axis(mode)].dim

    def basis_index(self, occupation: tuple[int, ...]) -> int:
        """Flat index of the bare Fock state with the given occupations."""
        if len(occupation) != len(self.modes):
            raise ValueError(
                f"occupation {occupation} does not match {len(self.modes)} modes"
            )
        idx = 0
        for n, spec in zip(occupation, self.modes):
            if not 0 <= n < spec.dim:
                raise ValueError(f"occupation {n} out of range for {spec.label.value}")
            idx = idx * spec.dim + n
        return idx

    def occupation_of(self, index: int) -> tuple[int, ...]:
        """Inverse of `basis_index`."""
        occ = []
        for d in reversed(self.dims):
            occ.append(index % d)
            index //= d
        return tuple(reversed(occ))


@dataclass(frozen=True)
class DeviceParams:
    """Static circuit parameters.

    Angular units (rad/s) throughout; seconds for coherence times.  The
    tunable coupler's instantaneous frequency is not stored here, only
    its flux-sweet-spot maximum -- Hamiltonian builders take the current
    coupler frequency as an explicit argument.
    """

    name: str
    omega1: float
    omega2: float
    omega_plus: float
    omega_minus_max: float
    alpha1: float
    alpha2: float
    alpha_plus: float
    alpha_minus: float
    g1_plus: float
    g2_plus: float
    g1_minus: float
    g2_minus: float
    t1_1: float
    t1_2: float
    t2_1: float
    t2_2: float
    flux_quantum: float = 1.0

    def __post_init__(self):
        for field in ("omega1", "omega2", "omega_plus", "omega_minus_max", "flux_quantum"):
            if not getattr(self, field) > 0:
                raise ValueError(f"{field} must be positive, got {getattr(self, field)}")
        for field in ("alpha1", "alpha2", "alpha_plus", "alpha_minus",
                      "g1_plus", "g2_plus", "g1_minus", "g2_minus"):
            if getattr(self, field) < 0:
                raise ValueError(f"{field} must be non-negative, got {getattr(self, field)}")
        for field in ("t1_1", "t1_2", "t2_1", "t2_2"):
            if not getattr(self, field) > 0:
                raise ValueError(f"{field} must be positive, got {getattr(self, field)}")
        if self.t2_1 > 2.0 * self.t1_1:
            raise ValueError(f"qubit 1: t2 ({self.t2_1}) exceeds 2*t1 ({2 * self.t1_1})")
        if self.t2_2 > 2.0 * self.t1_2:
            raise ValueError(f"qubit 2: t2 ({self.t2_2}) exceeds 2*t1 ({2 * self.t1_2})")

    def omega_of(self, mode: Mode) -> float:
        if mode is Mode.Q1:
            return self.omega1
        if mode is Mode.Q2:
            return self.omega2
        if mode is Mode.BUS_PLUS:
            return self.omega_plus
        raise ValueError(
            "the tunable coupler has no fixed frequency; use omega_minus_max "
            "or pass the current bias frequency explicitly"
        )

    def alpha_of(self, mode: Mode) -> float:
        return {
            Mode.Q1: self.alpha1,
            Mode.Q2: self.alpha2,
            Mode.BUS_PLUS: self.alpha_plus,
            Mode.COUPLER_MINUS: self.alpha_minus,
        }[mode]

    def g_of(self, qubit: Mode, coupler: Mode) -> float:
        key = (qubit, coupler)
        table = {
            (Mode.Q1, Mode.BUS_PLUS): self.g1_plus,
            (Mode.Q2, Mode.BUS_PLUS): self.g2_plus,
            (Mode.Q1, Mode.COUPLER_MINUS): self.g1_minus,
            (Mode.Q2, Mode.COUPLER_MINUS): self.g2_minus,
        }
        if key not in table:
            raise ValueError(f"no coupling between {qubit.value} and {coupler.value}")
        return table[key]

    def t1_of(self, qubit: Mode) -> float:
        if qubit is Mode.Q1:
            return self.t1_1
        if qubit is Mode.Q2:
            return self.t1_2
        raise ValueError(f"{qubit.value} is not a qubit")

    def t2_of(self, qubit: Mode) -> float:
        if qubit is Mode.Q1:
            return self.t2_1
        if qubit is Mode.Q2:
            return self.t2_2
        raise ValueError(f"{qubit.value} is not a qubit")


@dataclass(frozen=True)
class Operator:
    """A dense operator tied to the space it acts on."""

    space: HilbertSpace
    matrix: np.ndarray

    def __post_init__(self):
        n = self.space.total_dim
        if self.matrix.shape != (n, n):
            raise ValueError(f"matrix shape {self.matrix.shape} does not match space dim {n}")

    def dagger(self) -> "Operator":
        return Operator(self.space, self.matrix.conj().T)


def _lowering(dim: int) -> np.ndarray:
    # <n-1|a|n> = sqrt(n) on the superdiagonal
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)


def _embed(space: HilbertSpace, mode: Mode, single: np.ndarray) -> np.ndarray:
    factors = [
        single if spec.label is mode else np.eye(spec.dim, dtype=complex)
        for spec in space.modes
    ]
    return reduce(np.kron, factors)


def annihilation(space: HilbertSpace, mode: Mode) -> Operator:
    """Lowering operator for `mode`, identity on the other modes."""
    axis = space.axis(mode)  # raises for modes not in the space
    return Operator(space, _embed(space, mode, _lowering(space.modes[axis].dim)))


def creation(space: HilbertSpace, mode: Mode) -> Operator:
    """Raising operator, the adjoint of `annihilation`."""
    return annihilation(space, mode).dagger()


def number(space: HilbertSpace, mode: Mode) -> Operator:
    """Occupation-number operator a_dag a for `mode`.

    Built directly as the exact integer diagonal diag(0..dim-1) on the
    target factor; agrees with the matrix product a_dag @ a to rounding.
    """
    axis = space.axis(mode)
    dim = space.modes[axis].dim
    single = np.diag(np.arange(dim, dtype=float)).astype(complex)
    return Operator(space, _embed(space, mode, single))


def total_number(space: HilbertSpace) -> Operator:
    """Total excitation number summed over all modes in the space."""
    total = np.zeros((space.total_dim, space.total_dim), dtype=complex)
    for spec in space.modes:
        total += number(space, spec.label).matrix
    return Operator(space, total)


def _kerr(space: HilbertSpace, mode: Mode) -> np.ndarray:
    # a_dag a_dag a a = n (n - 1), exact integer diagonal
    dim = space.dim_of(mode)
    n = np.arange(dim, dtype=float)
    return _embed(space, mode, np.diag(n * (n - 1.0)).astype(complex))


def build_hamiltonian(params: DeviceParams, space: HilbertSpace, omega_minus: float) -> Operator:
    """Assemble H/hbar on `space` for the coupler biased at `omega_minus`.

    H/hbar = sum_i [omega_i n_i - (alpha_i/2) adag_i adag_i a_i a_i]
             + sum_{i in qubits, j in couplers} g_ij (adag_i a_j + a_i adag_j)

    Parameters
    ----------
    params : DeviceParams
        Mode frequencies, anharmonicities and couplings (rad/s).
    space : HilbertSpace
        Must contain all four device modes.
    omega_minus : float
        Tunable-coupler frequency at the current flux bias (rad/s); it
        replaces the coupler entry that `params` intentionally lacks.

    Returns
    -------
    Operator
        Hermitian matrix on the full space, in rad/s.
    """
    missing = [m.value for m in MODE_ORDER if not space.has(m)]
    if missing:
        raise ValueError(f"space is missing modes required by the Hamiltonian: {missing}")
    if not omega_minus > 0:
        raise ValueError(f"omega_minus must be positive, got {omega_minus}")

    def mode_omega(mode: Mode) -> float:
        return omega_minus if mode is Mode.COUPLER_MINUS else params.omega_of(mode)

    h = np.zeros((space.total_dim, space.total_dim), dtype=complex)
    for spec in space.modes:
        h += mode_omega(spec.label) * number(space, spec.label).matrix
        h -= 0.5 * params.alpha_of(spec.label) * _kerr(space, spec.label)

    lowering = {m: annihilation(space, m).matrix for m in MODE_ORDER}
    for qubit in QUBITS:
        for coupler in COUPLERS:
            g = params.g_of(qubit, coupler)
            if g == 0.0:
                continue
            exchange = lowering[qubit].conj().T @ lowering[coupler]
            h += g * (exchange + exchange.conj().T)

    return Operator(space, h)
