"""Density-matrix channels and the randomized-benchmarking engine.

Each pulse slot of a benchmarking sequence applies, in order: the ideal
single-qubit unitaries on both qubits, the two-qubit ZZ phase accumulated
over the pulse duration, then amplitude and phase damping on each qubit.

Sequences follow standard Clifford benchmarking on the primary pulse set:
each of the 24 single-qubit Cliffords is compiled into its shortest word
of primary pulses (45/24 = 1.875 pulses per Clifford on average), random
Cliffords are applied with the two qubits aligned slot-by-slot (shorter
words padded with identity pulses), and the sequence is closed by the
inverse Clifford.  The fitted per-Clifford decay is converted to a
primary-pulse fidelity by dividing the Clifford error by the average
compiled word length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import curve_fit

from .errors import ChannelInvariantError, RBFitError
from .hilbert import DeviceParams, Mode

TRACE_TOL = 1e-10
HERM_TOL = 1e-10
PSD_TOL = -1e-9
UNITARY_TOL = 1e-10

#: Single-qubit gate duration used for the benchmarking engine.
DEFAULT_GATE_TIME = 22e-9

DEFAULT_LENGTHS = (2, 4, 8, 16, 32, 64, 128, 256, 512)
DEFAULT_TRIALS = 100


def _rot(axis: np.ndarray, angle: float) -> np.ndarray:
    return math.cos(angle / 2) * np.eye(2) - 1j * math.sin(angle / 2) * axis


_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class GateLabel(Enum):
    """The primary single-qubit gate set."""

    I = "i"
    X_PLUS_90 = "x+90"
    X_MINUS_90 = "x-90"
    Y_PLUS_90 = "y+90"
    Y_MINUS_90 = "y-90"
    X_180 = "x180"
    Y_180 = "y180"

    @property
    def unitary(self) -> np.ndarray:
        return _GATE_UNITARIES[self]


_GATE_UNITARIES = {
    GateLabel.I: np.eye(2, dtype=complex),
    GateLabel.X_PLUS_90: _rot(_X, math.pi / 2),
    GateLabel.X_MINUS_90: _rot(_X, -math.pi / 2),
    GateLabel.Y_PLUS_90: _rot(_Y, math.pi / 2),
    GateLabel.Y_MINUS_90: _rot(_Y, -math.pi / 2),
    GateLabel.X_180: _rot(_X, math.pi),
    GateLabel.Y_180: _rot(_Y, math.pi),
}

PRIMARY_GATES = tuple(GateLabel)


class RBMode(Enum):
    INDIVIDUAL_Q1 = "individual_q1"
    INDIVIDUAL_Q2 = "individual_q2"
    SIMULTANEOUS = "simultaneous"

    @property
    def active_qubits(self) -> tuple[Mode, ...]:
        return {
            RBMode.INDIVIDUAL_Q1: (Mode.Q1,),
            RBMode.INDIVIDUAL_Q2: (Mode.Q2,),
            RBMode.SIMULTANEOUS: (Mode.Q1, Mode.Q2),
        }[self]


@dataclass(frozen=True)
class NoiseParams:
    """Relaxation/coherence times and the gate duration they act over."""

    t1: float
    t2: float
    gate_time: float

    def __post_init__(self):
        if not self.t1 > 0 or not self.t2 > 0:
            raise ValueError(f"t1 and t2 must be positive, got {self.t1}, {self.t2}")
        if self.t2 > 2.0 * self.t1:
            raise ValueError(f"t2 ({self.t2}) exceeds the 2*t1 bound ({2 * self.t1})")
        if not self.gate_time > 0:
            raise ValueError(f"gate_time must be positive, got {self.gate_time}")

    @classmethod
    def for_qubit(
        cls, params: DeviceParams, qubit: Mode, gate_time: float = DEFAULT_GATE_TIME
    ) -> "NoiseParams":
        return cls(t1=params.t1_of(qubit), t2=params.t2_of(qubit), gate_time=gate_time)


@dataclass(frozen=True)
class DensityMatrix:
    """Validated density matrix: Hermitian, unit trace, PSD within tolerance."""

    matrix: np.ndarray

    def __post_init__(self):
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        validate_state(m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_vector(cls, psi: np.ndarray) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))

    @classmethod
    def ground(cls, n_qubits: int) -> "DensityMatrix":
        psi = np.zeros(2**n_qubits, dtype=complex)
        psi[0] = 1.0
        return cls(np.outer(psi, psi.conj()))


def validate_state(rho: np.ndarray, *, check_psd: bool = True) -> None:
    """Raise ChannelInvariantError on trace/Hermiticity/PSD violations."""
    if abs(np.trace(rho).real - 1.0) > 1e-9 or abs(np.trace(rho).imag) > 1e-9:
        raise ChannelInvariantError(f"trace is {np.trace(rho)}, expected 1")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-9:
        raise ChannelInvariantError("state is not Hermitian within tolerance")
    if check_psd and np.linalg.eigvalsh(rho).min() < PSD_TOL:
        raise ChannelInvariantError(
            f"state has negative eigenvalue {np.linalg.eigvalsh(rho).min():.3g}"
        )


def _as_matrix(rho) -> np.ndarray:
    return rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)


def apply_gate(rho, u: np.ndarray) -> DensityMatrix:
    """Conjugate the state by a unitary: U rho U^dag."""
    m = _as_matrix(rho)
    u = np.asarray(u, dtype=complex)
    if u.shape != m.shape:
        raise ValueError(f"gate shape {u.shape} does not match state shape {m.shape}")
    if np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) > UNITARY_TOL:
        raise ValueError("gate is not unitary within tolerance")
    return DensityMatrix(u @ m @ u.conj().T)


def zz_unitary(zeta: float, t: float) -> np.ndarray:
    """diag(1, 1, 1, e^{-i zeta t}) in the |q1 q2> product basis."""
    return np.diag([1.0, 1.0, 1.0, np.exp(-1j * zeta * t)]).astype(complex)


def apply_zz(rho, zeta: float, t: float) -> DensityMatrix:
    """Accumulate the conditional phase zeta*t on the doubly excited state."""
    m = _as_matrix(rho)
    if m.shape != (4, 4):
        raise ValueError(f"ZZ channel needs a two-qubit state, got shape {m.shape}")
    u = zz_unitary(zeta, t)
    return DensityMatrix(u @ m @ u.conj().T)


def _decohere_1q(rho: np.ndarray, noise: NoiseParams) -> np.ndarray:
    # dephasing mixture plus amplitude terms, written out as printed:
    #   (1-e2)/2 Z.rho.Z + (1+e2)/2 rho
    #   + (1-e1) |0><1| rho |1><0|  -  (1-e1) |1><1| rho |1><1|
    e1 = math.exp(-noise.gate_time / noise.t1)
    e2 = math.exp(-noise.gate_time / noise.t2)
    out = 0.5 * (1.0 - e2) * (_Z @ rho @ _Z) + 0.5 * (1.0 + e2) * rho
    flip = np.zeros_like(rho)
    flip[0, 0] = rho[1, 1]
    keep = np.zeros_like(rho)
    keep[1, 1] = rho[1, 1]
    return out + (1.0 - e1) * (flip - keep)


def apply_decoherence(rho, noise: NoiseParams) -> DensityMatrix:
    """Single-qubit amplitude and phase damping over one gate time.

    Excited population decays by e^{-t/T1}; coherences by e^{-t/T2}.
    The map is completely positive exactly when t2 <= 2*t1, which
    NoiseParams enforces; the output is nevertheless re-validated and a
    violation raises ChannelInvariantError rather than being projected
    away.
    """
    m = _as_matrix(rho)
    if m.shape != (2, 2):
        raise ValueError(f"decoherence channel is single-qubit, got shape {m.shape}")
    out = _decohere_1q(m, noise)
    validate_state(out)
    return DensityMatrix(out)


def _decohere_on(rho4: np.ndarray, noise: NoiseParams, qubit: Mode) -> np.ndarray:
    # apply the single-qubit map to one tensor factor of a 2-qubit state
    r = rho4.reshape(2, 2, 2, 2)
    out = np.zeros_like(r)
    if qubit is Mode.Q1:
        for j in range(2):
            for jp in range(2):
                out[:, j, :, jp] = _decohere_1q(r[:, j, :, jp], noise)
    else:
        for i in range(2):
            for ip in range(2):
                out[i, :, ip, :] = _decohere_1q(r[i, :, ip, :], noise)
    return out.reshape(4, 4)


def rb_step(
    rho,
    gates: tuple,
    zeta: float,
    noise1: NoiseParams,
    noise2: NoiseParams,
) -> DensityMatrix:
    """One benchmarking slot: gates, then ZZ, then per-qubit decoherence.

    ``gates`` holds one entry per qubit, each either a GateLabel or an
    explicit 2x2 unitary (the recovery gate is a Clifford-group product
    supplied as a matrix).
    """
    if noise1.gate_time != noise2.gate_time:
        raise ValueError("both qubits must share one gate duration per slot")
    m = _as_matrix(rho)
    if m.shape != (4, 4):
        raise ValueError(f"rb_step needs a two-qubit state, got shape {m.shape}")
    u1, u2 = (g.unitary if isinstance(g, GateLabel) else np.asarray(g, dtype=complex)
              for g in gates)
    u = np.kron(u1, u2)
    out = u @ m @ u.conj().T
    uzz = zz_unitary(zeta, noise1.gate_time)
    out = uzz @ out @ uzz.conj().T
    out = _decohere_on(out, noise2, Mode.Q2)
    out = _decohere_on(out, noise1, Mode.Q1)
    return DensityMatrix(out)


def ground_population(rho, qubit: Mode) -> float:
    """Marginal probability of |0> for one qubit of a two-qubit state."""
    m = _as_matrix(rho)
    if qubit is Mode.Q1:
        return float((m[0, 0] + m[1, 1]).real)
    if qubit is Mode.Q2:
        return float((m[0, 0] + m[2, 2]).real)
    raise ValueError(f"{qubit.value} is not a qubit")


# ---------------------------------------------------------------------------
# Clifford compilation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CliffordElement:
    """A single-qubit Clifford and its compiled primary-pulse word."""

    unitary: np.ndarray
    word: tuple[GateLabel, ...]


def _phase_key(u: np.ndarray) -> bytes:
    """Canonical byte key for a 2x2 unitary modulo global phase."""
    mags = np.abs(u)
    anchor = int(np.argmax(mags > mags.max() - 1e-9))
    z = u.flat[anchor]
    v = u * (abs(z) / z)
    return (np.round(v.real, 6) + 0.0).tobytes() + (np.round(v.imag, 6) + 0.0).tobytes()


def _build_clifford_table() -> tuple[tuple[CliffordElement, ...], dict]:
    # breadth-first closure of the non-identity primaries gives shortest
    # words; the identity Clifford is spelled as one explicit I pulse
    generators = [g for g in PRIMARY_GATES if g is not GateLabel.I]
    eye = np.eye(2, dtype=complex)
    found = {_phase_key(eye): (eye, (GateLabel.I,))}
    frontier = [(eye, ())]
    while frontier:
        next_frontier = []
        for u, word in frontier:
            for g in generators:
                v = g.unitary @ u
                k = _phase_key(v)
                if k not in found:
                    found[k] = (v, word + (g,))
                    next_frontier.append((v, word + (g,)))
        frontier = next_frontier
    elements = tuple(
        CliffordElement(unitary=u, word=w)
        for u, w in sorted(
            found.values(), key=lambda t: (len(t[1]), [g.value for g in t[1]])
        )
    )
    index = {_phase_key(el.unitary): i for i, el in enumerate(elements)}
    return elements, index


_CLIFFORD_TABLE: tuple[tuple[CliffordElement, ...], dict] | None = None


def clifford_group() -> tuple[CliffordElement, ...]:
    """The 24 single-qubit Cliffords with shortest primary-pulse words."""
    global _CLIFFORD_TABLE
    if _CLIFFORD_TABLE is None:
        _CLIFFORD_TABLE = _build_clifford_table()
    return _CLIFFORD_TABLE[0]


def clifford_index(u: np.ndarray) -> int:
    """Index of the Clifford equal to `u` up to global phase."""
    clifford_group()
    try:
        return _CLIFFORD_TABLE[1][_phase_key(np.asarray(u, dtype=complex))]
    except KeyError:
        raise ValueError("matrix is not an element of the single-qubit Clifford group")


def average_pulses_per_clifford() -> float:
    return float(np.mean([len(el.word) for el in clifford_group()]))


@dataclass(frozen=True)
class RBResult:
    """Decay curves and fitted per-qubit primary-gate fidelities.

    `mean_p0`, `sem_p0`, `fit` and `fidelity` are keyed by the active
    qubit Mode; `fit` holds (A, p, B) of the per-Clifford decay and the
    fidelity is per primary pulse.
    """

    mode: RBMode
    lengths: tuple[int, ...]
    mean_p0: dict
    sem_p0: dict
    fit: dict
    fidelity: dict
    trials: int
    seed: int
    zeta: float
    gate_time: float
    pulses_per_clifford: float


def _fit_decay(lengths, means) -> tuple[float, float, float]:
    lengths = np.asarray(lengths, dtype=float)
    means = np.asarray(means, dtype=float)
    if means.max() - means.min() < 1e-12:
        # flat curve: indistinguishable from p = 1 (noiseless limit)
        return 0.0, 1.0, float(means.mean())

    def model(m, a, p, b):
        return a * p**m + b

    try:
        (a, p, b), _ = curve_fit(
            model, lengths, means, p0=(0.5, 0.99, 0.5), maxfev=20000
        )
    except RuntimeError as err:
        raise RBFitError(f"decay fit did not converge: {err}", lengths, means) from err
    if not 0.0 < p <= 1.0:
        raise RBFitError(f"fitted decay p = {p:.6f} is unphysical", lengths, means)
    return float(a), float(p), float(b)


def _slot_superoperator(zeta: float, noise1: NoiseParams, noise2: NoiseParams) -> np.ndarray:
    """16x16 matrix applying ZZ then both decoherence maps to vec(rho)."""
    uzz = zz_unitary(zeta, noise1.gate_time)
    s = np.empty((16, 16), dtype=complex)
    for k in range(16):
        basis = np.zeros((4, 4), dtype=complex)
        basis.flat[k] = 1.0
        out = uzz @ basis @ uzz.conj().T
        out = _decohere_on(out, noise2, Mode.Q2)
        out = _decohere_on(out, noise1, Mode.Q1)
        s[:, k] = out.reshape(16)
    return s


def _apply_word_slots(rho, slots, post_gate):
    # one pulse slot = exact gate conjugation + the fixed post channel
    for u1, u2 in slots:
        u = np.kron(u1, u2)
        rho = u @ rho @ u.conj().T
        rho = (post_gate @ rho.reshape(16)).reshape(4, 4)
    return rho


def _padded_slots(words: dict) -> list:
    width = max(len(w) for w in words.values())
    eye = np.eye(2, dtype=complex)
    slots = []
    for s in range(width):
        u1 = words[Mode.Q1][s].unitary if Mode.Q1 in words and s < len(words[Mode.Q1]) else eye
        u2 = words[Mode.Q2][s].unitary if Mode.Q2 in words and s < len(words[Mode.Q2]) else eye
        slots.append((u1, u2))
    return slots


def run_rb(
    mode: RBMode,
    params: DeviceParams,
    zeta: float,
    lengths: tuple[int, ...] = DEFAULT_LENGTHS,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    *,
    gate_time: float = DEFAULT_GATE_TIME,
) -> RBResult:
    """Simulate randomized benchmarking and fit the decay per qubit.

    For each trial and sequence length m, the active qubit(s) receive m
    uniformly random Cliffords compiled into primary pulses, followed by
    the compiled inverse Clifford; within each Clifford slot the two
    qubits are aligned pulse-by-pulse, shorter words padded with
    identities.  Idle qubits receive identity pulses throughout but still
    experience ZZ and decoherence.  Ground-state populations of the
    active qubit(s) after the recovery are averaged over trials, fitted
    to A p^m + B in the Clifford count m, and converted to a
    primary-pulse fidelity 1 - (1 - p) / (2 * pulses_per_clifford).

    Trials use independently spawned seed streams, so results are
    deterministic for a given seed and unaffected by any parallel
    scheduling of trials.
    """
    if not lengths:
        raise ValueError("need at least one sequence length")
    if trials < 1:
        raise ValueError("need at least one trial")
    mode = RBMode(mode)
    active = mode.active_qubits
    noise1 = NoiseParams.for_qubit(params, Mode.Q1, gate_time)
    noise2 = NoiseParams.for_qubit(params, Mode.Q2, gate_time)
    rho0 = DensityMatrix.ground(2).matrix
    post_gate = _slot_superoperator(zeta, noise1, noise2)
    cliffords = clifford_group()

    populations = {q: np.zeros((trials, len(lengths))) for q in active}
    streams = np.random.SeedSequence(seed).spawn(trials)
    for t_idx, stream in enumerate(streams):
        rng = np.random.default_rng(stream)
        for m_idx, m in enumerate(lengths):
            draws = {q: rng.integers(0, len(cliffords), size=m) for q in active}
            rho = rho0
            composed = {q: np.eye(2, dtype=complex) for q in active}
            for k in range(m):
                words = {}
                for q in active:
                    element = cliffords[int(draws[q][k])]
                    composed[q] = element.unitary @ composed[q]
                    words[q] = element.word
                rho = _apply_word_slots(rho, _padded_slots(words), post_gate)
            recovery_words = {
                q: cliffords[clifford_index(composed[q].conj().T)].word for q in active
            }
            rho = _apply_word_slots(rho, _padded_slots(recovery_words), post_gate)
            validate_state(rho)
            for q in active:
                populations[q][t_idx, m_idx] = ground_population(rho, q)

    mean_p0 = {q: populations[q].mean(axis=0) for q in active}
    sem_p0 = {
        q: populations[q].std(axis=0, ddof=1) / math.sqrt(trials) if trials > 1
        else np.zeros(len(lengths))
        for q in active
    }
    pulses = average_pulses_per_clifford()
    fit = {}
    fidelity = {}
    for q in active:
        a, p, b = _fit_decay(lengths, mean_p0[q])
        fit[q] = (a, p, b)
        fidelity[q] = 1.0 - (1.0 - p) / (2.0 * pulses)
    return RBResult(
        mode=mode,
        lengths=tuple(lengths),
        mean_p0=mean_p0,
        sem_p0=sem_p0,
        fit=fit,
        fidelity=fidelity,
        trials=trials,
        seed=seed,
        zeta=zeta,
        gate_time=gate_time,
        pulses_per_clifford=pulses,
    )
