"""Readout correction, state/process tomography, and thermal gate model.

Covers the post-processing stack for the parametric two-qubit gate:
confusion-matrix readout correction, projection of measured states onto
the physical set, concurrence, Pauli transfer matrices with the standard
gate-fidelity and nonphysical-error figures, and a finite-temperature
model of the half-swap gate where an excited coupler applies a fractional
power of the ideal unitary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Callable

import numpy as np
from scipy.constants import hbar as HBAR
from scipy.constants import k as K_BOLTZMANN
from scipy.special import expit

from .channels import DensityMatrix, NoiseParams, _decohere_on, validate_state
from .errors import ReadoutCorrectionError
from .hilbert import DeviceParams, Mode

CONDITION_LIMIT = 1e6

#: Duration of the parametric half-swap gate.
DEFAULT_ISWAP_TIME = 95e-9

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)

PAULI_1Q = {"I": _I2, "X": _X, "Y": _Y, "Z": _Z}

#: Two-qubit Pauli ordering used everywhere: II, IX, IY, IZ, XI, ..., ZZ.
PAULI_LABELS_2Q = tuple(a + b for a, b in product("IXYZ", repeat=2))
PAULIS_2Q = tuple(np.kron(PAULI_1Q[l[0]], PAULI_1Q[l[1]]) for l in PAULI_LABELS_2Q)

SQRT_ISWAP = np.array(
    [
        [1, 0, 0, 0],
        [0, 1 / math.sqrt(2), 1j / math.sqrt(2), 0],
        [0, 1j / math.sqrt(2), 1 / math.sqrt(2), 0],
        [0, 0, 0, 1],
    ],
    dtype=complex,
)


# ---------------------------------------------------------------------------
# readout correction
# ---------------------------------------------------------------------------

def _check_column_stochastic(m: np.ndarray, name: str) -> None:
    if np.any(m < -1e-9) or np.any(m > 1.0 + 1e-9):
        raise ValueError(f"{name}: entries must lie in [0, 1]")
    if np.max(np.abs(m.sum(axis=0) - 1.0)) > 1e-9:
        raise ValueError(f"{name}: columns must sum to 1")


@dataclass(frozen=True)
class ReadoutCalibration:
    """Single-qubit confusion matrices plus the two-qubit crosstalk matrix.

    Columns are indexed by the true state, rows by the reported outcome,
    so each matrix is column-stochastic with diagonal 1 - error.
    """

    c1: np.ndarray
    c2: np.ndarray
    cct: np.ndarray

    def __post_init__(self):
        if self.c1.shape != (2, 2) or self.c2.shape != (2, 2):
            raise ValueError("single-qubit confusion matrices must be 2x2")
        if self.cct.shape != (4, 4):
            raise ValueError("crosstalk confusion matrix must be 4x4")
        _check_column_stochastic(self.c1, "c1")
        _check_column_stochastic(self.c2, "c2")
        _check_column_stochastic(self.cct, "cct")

    @classmethod
    def ideal(cls) -> "ReadoutCalibration":
        return cls(np.eye(2), np.eye(2), np.eye(4))

    @classmethod
    def from_error_rates(
        cls,
        q1_errors: tuple[float, float],
        q2_errors: tuple[float, float],
        cct: np.ndarray | None = None,
    ) -> "ReadoutCalibration":
        """Build from (|0>-error, |1>-error) pairs; identity crosstalk."""

        def single(e0, e1):
            return np.array([[1 - e0, e1], [e0, 1 - e1]], dtype=float)

        return cls(
            single(*q1_errors),
            single(*q2_errors),
            np.eye(4) if cct is None else np.asarray(cct, dtype=float),
        )

    def combined(self) -> np.ndarray:
        """Full correction matrix C_ct (C1 kron C2)."""
        return self.cct @ np.kron(self.c1, self.c2)

    def condition_number(self) -> float:
        return float(np.linalg.cond(self.combined()))


def correct_readout(
    measured: np.ndarray, cal: ReadoutCalibration, *, clip: bool = False
) -> np.ndarray:
    """Invert the combined confusion matrix on a measured outcome vector.

    The corrected vector is reported raw; inversion noise can push
    entries slightly outside [0, 1] unless `clip` is set.
    """
    v = np.asarray(measured, dtype=float)
    if v.shape != (4,):
        raise ValueError(f"measured vector must have 4 entries, got shape {v.shape}")
    if abs(v.sum() - 1.0) > 1e-6:
        raise ValueError(f"measured frequencies must sum to 1, got {v.sum():.6f}")
    cond = cal.condition_number()
    if cond > CONDITION_LIMIT:
        raise ReadoutCorrectionError(cond, CONDITION_LIMIT)
    corrected = np.linalg.solve(cal.combined(), v)
    if clip:
        corrected = np.clip(corrected, 0.0, 1.0)
    return corrected


# ---------------------------------------------------------------------------
# state post-processing
# ---------------------------------------------------------------------------

def project_physical(rho_measured: np.ndarray) -> tuple[np.ndarray, float]:
    """Nearest unit-trace PSD matrix in Frobenius norm, plus the distance.

    Symmetrizes the input, rescales to unit trace if needed, then clips
    eigenvalues: working down from the largest, the negative tail is
    zeroed and its weight redistributed uniformly over the remaining
    levels so the trace is preserved.  Returns (rho_physical, D) with
    D = Tr[(rho_p - rho_m)^2] against the symmetrized input.
    """
    m = np.asarray(rho_measured, dtype=complex)
    sym = 0.5 * (m + m.conj().T)
    trace = float(np.trace(sym).real)
    if trace <= 0:
        raise ValueError(f"measured matrix has non-positive trace {trace:.3g}")
    work = sym / trace
    evals, evecs = np.linalg.eigh(work)
    if evals[0] >= 0:
        rho_p = work
    else:
        clipped = np.zeros_like(evals)
        spill = 0.0
        keep = len(evals)
        # eigh sorts ascending; walk the negative tail from the bottom
        for i in range(len(evals)):
            if evals[i] + spill / (len(evals) - i) < 0:
                spill += evals[i]
                keep = len(evals) - i - 1
            else:
                break
        start = len(evals) - keep
        clipped[start:] = evals[start:] + spill / keep
        rho_p = (evecs * clipped) @ evecs.conj().T
        rho_p = 0.5 * (rho_p + rho_p.conj().T)
    distance = float(np.trace((rho_p - sym) @ (rho_p - sym)).real)
    return rho_p, distance


def concurrence(rho_2q: np.ndarray) -> float:
    """Two-qubit entanglement monotone: 0 for separable, 1 for Bell states.

    C = max(0, l1 - l2 - l3 - l4) with l_i the decreasing square roots of
    the eigenvalues of rho (Y kron Y) rho* (Y kron Y).
    """
    m = _as_state(rho_2q)
    if m.shape != (4, 4):
        raise ValueError(f"concurrence is defined for two qubits, got {m.shape}")
    validate_state(m)
    yy = np.kron(_Y, _Y)
    lam = np.linalg.eigvals(m @ yy @ m.conj() @ yy)
    lam = np.sqrt(np.clip(lam.real, 0.0, None))
    lam = np.sort(lam)[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def _as_state(rho) -> np.ndarray:
    return rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)


def state_fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2."""
    a = _psd_sqrt(_as_state(rho))
    inner = a @ _as_state(sigma) @ a
    evals = np.linalg.eigvalsh(0.5 * (inner + inner.conj().T))
    return float(np.sqrt(np.clip(evals, 0.0, None)).sum() ** 2)


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    evals, evecs = np.linalg.eigh(0.5 * (m + m.conj().T))
    return (evecs * np.sqrt(np.clip(evals, 0.0, None))) @ evecs.conj().T


# ---------------------------------------------------------------------------
# process tomography
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PauliTransferMatrix:
    """16x16 real channel representation in the two-qubit Pauli basis."""

    r: np.ndarray

    def __post_init__(self):
        if self.r.shape != (16, 16):
            raise ValueError(f"expected a 16x16 matrix, got {self.r.shape}")

    def is_trace_preserving(self, tol: float = 1e-9) -> bool:
        first = np.zeros(16)
        first[0] = 1.0
        return bool(np.max(np.abs(self.r[0] - first)) <= tol)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.r, dtype=dtype)


def ptm_from_channel(channel: Callable[[np.ndarray], np.ndarray]) -> PauliTransferMatrix:
    """R_ij = Tr[P_i channel(P_j)] / 4 over the 16 two-qubit Paulis."""
    r = np.empty((16, 16))
    outputs = [np.asarray(channel(p)) for p in PAULIS_2Q]
    for i, pi in enumerate(PAULIS_2Q):
        for j in range(16):
            r[i, j] = np.trace(pi @ outputs[j]).real / 4.0
    return PauliTransferMatrix(r)


def ptm_of_unitary(u: np.ndarray) -> PauliTransferMatrix:
    u = np.asarray(u, dtype=complex)
    return ptm_from_channel(lambda rho: u @ rho @ u.conj().T)


def _as_ptm(r) -> np.ndarray:
    return r.r if isinstance(r, PauliTransferMatrix) else np.asarray(r, dtype=float)


def gate_fidelity(r_exp, r_ideal, n_qubits: int) -> float:
    """Average gate fidelity from two transfer matrices.

    F = (Tr[R_ideal^T R_exp] + 2n) / (4 n^2 + 2n) with n the qubit count;
    equals 1 when the maps coincide and are trace preserving.
    """
    a = _as_ptm(r_exp)
    b = _as_ptm(r_ideal)
    if a.shape != b.shape:
        raise ValueError(f"transfer matrix shapes differ: {a.shape} vs {b.shape}")
    return float(
        (np.trace(b.T @ a) + 2.0 * n_qubits) / (4.0 * n_qubits**2 + 2.0 * n_qubits)
    )


def nonphysical_error(r_raw, r_fit, n_qubits: int) -> float:
    """Spectral-norm mismatch 0.5 ||R_raw - R_fit||_2 / (2n)."""
    a = _as_ptm(r_raw)
    b = _as_ptm(r_fit)
    if a.shape != b.shape:
        raise ValueError(f"transfer matrix shapes differ: {a.shape} vs {b.shape}")
    return float(0.5 * np.linalg.norm(a - b, ord=2) / (2.0 * n_qubits))


def process_tomography_inputs() -> tuple[np.ndarray, ...]:
    """The 16 product input states {|0>, |1>, |+>, |+i>} x {same}.

    Pure, unit trace, and linearly independent: they span the two-qubit
    operator space, so process reconstruction from them is well posed.
    """
    kets = (
        np.array([1, 0], dtype=complex),
        np.array([0, 1], dtype=complex),
        np.array([1, 1], dtype=complex) / math.sqrt(2),
        np.array([1, 1j], dtype=complex) / math.sqrt(2),
    )
    states = []
    for k1, k2 in product(kets, repeat=2):
        psi = np.kron(k1, k2)
        states.append(np.outer(psi, psi.conj()))
    return tuple(states)


# ---------------------------------------------------------------------------
# thermal gate model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ThermalGateModel:
    """Finite-temperature description of the parametric half-swap.

    With probability ``p`` the coupler starts excited and the flux
    modulation generates only a fractional gate U^(1/alpha_exponent),
    since the excited-coupler exchange strength is suppressed by
    destructive interference.
    """

    p: float
    alpha_exponent: float
    gate_time: float = DEFAULT_ISWAP_TIME

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"thermal population must lie in [0, 1], got {self.p}")
        if not self.alpha_exponent > 0:
            raise ValueError(f"alpha_exponent must be positive, got {self.alpha_exponent}")
        if not self.gate_time > 0:
            raise ValueError(f"gate_time must be positive, got {self.gate_time}")


def unitary_root(u: np.ndarray, alpha: float) -> np.ndarray:
    """Principal matrix power U^(1/alpha) via eigendecomposition.

    Eigenphases are taken on the principal branch (-pi, pi]; for the
    half-swap unitary the spectrum is {1, 1, e^{+i pi/4}, e^{-i pi/4}},
    so the branch choice is unambiguous.
    """
    u = np.asarray(u, dtype=complex)
    evals, evecs = np.linalg.eig(u)
    phases = np.angle(evals)
    root_evals = np.exp(1j * phases / alpha)
    return evecs @ np.diag(root_evals) @ np.linalg.inv(evecs)


def flux_modulation_channel(
    p: float, alpha_exponent: float
) -> Callable[[np.ndarray], np.ndarray]:
    """Mixture channel: ideal half-swap with weight 1-p, fractional gate with p."""
    u0 = SQRT_ISWAP
    u1 = unitary_root(SQRT_ISWAP, alpha_exponent)

    def channel(rho: np.ndarray) -> np.ndarray:
        return (1.0 - p) * (u0 @ rho @ u0.conj().T) + p * (u1 @ rho @ u1.conj().T)

    return channel


def decohered_sqrt_iswap_channel(
    params: DeviceParams,
    *,
    gate_time: float = DEFAULT_ISWAP_TIME,
    thermal_p: float = 0.0,
    alpha_exponent: float = 1.0,
) -> Callable[[np.ndarray], np.ndarray]:
    """Half-swap followed by per-qubit decoherence over the gate duration."""
    noise1 = NoiseParams.for_qubit(params, Mode.Q1, gate_time)
    noise2 = NoiseParams.for_qubit(params, Mode.Q2, gate_time)
    fm = flux_modulation_channel(thermal_p, alpha_exponent)

    def channel(rho: np.ndarray) -> np.ndarray:
        out = fm(np.asarray(rho, dtype=complex))
        out = _decohere_on(out, noise2, Mode.Q2)
        out = _decohere_on(out, noise1, Mode.Q1)
        return out

    return channel


def thermal_iswap_fidelity(params: DeviceParams, model: ThermalGateModel) -> float:
    """Average state fidelity of the thermal half-swap over 16 input states.

    Each tomography input is pushed through the thermal gate channel
    followed by both qubits' decoherence, and compared with the ideal
    half-swap output; the 16 fidelities are averaged uniformly.
    """
    channel = decohered_sqrt_iswap_channel(
        params,
        gate_time=model.gate_time,
        thermal_p=model.p,
        alpha_exponent=model.alpha_exponent,
    )
    total = 0.0
    for rho_in in process_tomography_inputs():
        ideal = SQRT_ISWAP @ rho_in @ SQRT_ISWAP.conj().T
        total += state_fidelity(channel(rho_in), ideal)
    return total / 16.0


def thermal_population(omega: float, temperature: float) -> float:
    """Two-level Boltzmann occupancy 1 / (1 + e^{hbar omega / k T})."""
    if temperature < 0:
        raise ValueError(f"temperature must be >= 0, got {temperature}")
    if temperature == 0.0:
        return 0.0
    return float(expit(-HBAR * omega / (K_BOLTZMANN * temperature)))
