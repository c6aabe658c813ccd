"""Closed-form dispersive-regime quantities.

Fourth-order ZZ rate, the coupler-mediated exchange coupling J and its
flux derivative, the parametric-gate coupling strengths for a ground or
excited coupler, and the operating-regime predicate (coupler below both
qubits, bus above, qubits inside each other's straddling window).

Everything here is algebra on bare detunings; no matrices.  Use the
`spectrum` module for the exact (diagonalization) counterpart of the ZZ
rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import PoleError
from .hilbert import DeviceParams, TWO_PI

#: Denominators closer to zero than this (rad/s) raise PoleError; far
#: below any physical detuning, so only genuine blow-ups are caught.
POLE_EPS = TWO_PI * 1e3


def _guard(value: float, name: str) -> float:
    if abs(value) < POLE_EPS:
        raise PoleError(name, value)
    return value


@dataclass(frozen=True)
class DetuningSet:
    """Bare single-excitation detunings delta_ij = w_i - w_j (rad/s)."""

    d12: float
    d1_plus: float
    d2_plus: float
    d1_minus: float
    d2_minus: float

    @property
    def d21(self) -> float:
        return -self.d12

    def delta(self, i: str, j: str) -> float:
        """Accessor with antisymmetry: delta('+','1') == -delta('1','+')."""
        table = {
            ("1", "2"): self.d12,
            ("1", "+"): self.d1_plus,
            ("2", "+"): self.d2_plus,
            ("1", "-"): self.d1_minus,
            ("2", "-"): self.d2_minus,
        }
        if (i, j) in table:
            return table[(i, j)]
        if (j, i) in table:
            return -table[(j, i)]
        raise KeyError(f"no detuning defined between '{i}' and '{j}'")


def detunings(params: DeviceParams, omega_minus: float) -> DetuningSet:
    """All pairwise bare detunings at the given coupler frequency."""
    return DetuningSet(
        d12=params.omega1 - params.omega2,
        d1_plus=params.omega1 - params.omega_plus,
        d2_plus=params.omega2 - params.omega_plus,
        d1_minus=params.omega1 - omega_minus,
        d2_minus=params.omega2 - omega_minus,
    )


def zeta_perturbative_terms(params: DeviceParams, omega_minus: float) -> dict[str, float]:
    """The fourth-order ZZ rate, split into its seven closed-form terms.

    Keys (values in rad/s):

    - ``two_photon_bus`` / ``two_photon_coupler``: virtual double
      occupation of the bus / tunable coupler, weighted by that mode's
      anharmonicity.
    - ``anharm_q2`` / ``anharm_q1``: exchange paths bouncing off the
      second excited level of qubit 2 / qubit 1.
    - ``mixed_path``: interference of the one-photon-in-each-coupler
      path.
    - ``norm_q1`` / ``norm_q2``: negative normalization corrections.

    Terms with a vanishing coupling prefactor are exactly zero and skip
    their denominator checks, so absent couplers (g = 0) are harmless.
    Any live denominator within POLE_EPS of zero raises PoleError.
    """
    d = detunings(params, omega_minus)
    g1p, g2p = params.g1_plus, params.g2_plus
    g1m, g2m = params.g1_minus, params.g2_minus
    bus_on = g1p * g2p != 0.0
    coupler_on = g1m * g2m != 0.0
    q1_bus, q2_bus = g1p != 0.0, g2p != 0.0
    q1_cpl, q2_cpl = g1m != 0.0, g2m != 0.0

    d1p = _guard(d.d1_plus, "delta_1+") if q1_bus else d.d1_plus
    d2p = _guard(d.d2_plus, "delta_2+") if q2_bus else d.d2_plus
    d1m = _guard(d.d1_minus, "delta_1-") if q1_cpl else d.d1_minus
    d2m = _guard(d.d2_minus, "delta_2-") if q2_cpl else d.d2_minus

    terms = dict.fromkeys(
        ("two_photon_bus", "two_photon_coupler", "anharm_q2", "anharm_q1",
         "mixed_path", "norm_q1", "norm_q2"),
        0.0,
    )

    if bus_on:
        den = _guard(d1p + d2p + params.alpha_plus, "delta_1+ + delta_2+ + alpha_+")
        terms["two_photon_bus"] = (
            2.0 * g1p**2 * g2p**2 / den * (1.0 / d1p + 1.0 / d2p) ** 2
        )
    if coupler_on:
        den = _guard(d1m + d2m + params.alpha_minus, "delta_1- + delta_2- + alpha_-")
        terms["two_photon_coupler"] = (
            2.0 * g1m**2 * g2m**2 / den * (1.0 / d1m + 1.0 / d2m) ** 2
        )

    if bus_on or coupler_on:
        d12 = _guard(d.d12, "delta_12")
        d21 = -d12
        bracket1 = (g1p * g2p / d1p if bus_on else 0.0) + (
            g1m * g2m / d1m if coupler_on else 0.0
        )
        bracket2 = (g1p * g2p / d2p if bus_on else 0.0) + (
            g1m * g2m / d2m if coupler_on else 0.0
        )
        terms["anharm_q2"] = bracket1**2 * (
            2.0 / _guard(d12 + params.alpha2, "delta_12 + alpha_2") - 1.0 / d12
        )
        terms["anharm_q1"] = bracket2**2 * (
            2.0 / _guard(d21 + params.alpha1, "delta_21 + alpha_1") - 1.0 / d21
        )

    cross_a = g1p * g2m != 0.0
    cross_b = g1m * g2p != 0.0
    if cross_a or cross_b:
        mixed = (g1p * g2m * (1.0 / d1p + 1.0 / d2m) if cross_a else 0.0) + (
            g1m * g2p * (1.0 / d1m + 1.0 / d2p) if cross_b else 0.0
        )
        if mixed != 0.0:
            terms["mixed_path"] = mixed**2 / _guard(d1p + d2m, "delta_1+ + delta_2-")

    q1_weight = (g1p**2 / d1p**2 if q1_bus else 0.0) + (g1m**2 / d1m**2 if q1_cpl else 0.0)
    q2_shift = (g2p**2 / d2p if q2_bus else 0.0) + (g2m**2 / d2m if q2_cpl else 0.0)
    q2_weight = (g2p**2 / d2p**2 if q2_bus else 0.0) + (g2m**2 / d2m**2 if q2_cpl else 0.0)
    q1_shift = (g1p**2 / d1p if q1_bus else 0.0) + (g1m**2 / d1m if q1_cpl else 0.0)
    terms["norm_q1"] = -q1_weight * q2_shift
    terms["norm_q2"] = -q2_weight * q1_shift

    return terms


def zeta_perturbative(params: DeviceParams, omega_minus: float) -> float:
    """Fourth-order ZZ rate (rad/s); sum of `zeta_perturbative_terms`."""
    return math.fsum(zeta_perturbative_terms(params, omega_minus).values())


@dataclass(frozen=True)
class StraddlingReport:
    """Outcome of the zero-ZZ operating-regime predicate."""

    ok: bool
    violations: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.ok


def straddling_ok(params: DeviceParams, omega_minus: float) -> StraddlingReport:
    """Check coupler below both qubits, bus above, qubits straddling.

    All inequalities are strict; boundary cases fail.
    """
    violations = []
    if not omega_minus < params.omega1:
        violations.append("coupler frequency is not below qubit 1")
    if not omega_minus < params.omega2:
        violations.append("coupler frequency is not below qubit 2")
    if not params.omega1 < params.omega_plus:
        violations.append("bus frequency is not above qubit 1")
    if not params.omega2 < params.omega_plus:
        violations.append("bus frequency is not above qubit 2")
    if not abs(params.omega1 - params.omega2) < min(params.alpha1, params.alpha2):
        violations.append(
            "qubit-qubit detuning is not inside the straddling window "
            "(|w1 - w2| must be below both anharmonicities)"
        )
    return StraddlingReport(ok=not violations, violations=tuple(violations))


def exchange_J(params: DeviceParams, omega_minus: float) -> float:
    """Coupler-mediated qubit-qubit exchange coupling J (rad/s).

    J = sum over couplers of (g1 g2 / 2)(1/delta_1 + 1/delta_2).
    """
    d = detunings(params, omega_minus)
    j = 0.0
    if params.g1_plus * params.g2_plus != 0.0:
        d1p = _guard(d.d1_plus, "delta_1+")
        d2p = _guard(d.d2_plus, "delta_2+")
        j += 0.5 * params.g1_plus * params.g2_plus * (1.0 / d1p + 1.0 / d2p)
    if params.g1_minus * params.g2_minus != 0.0:
        d1m = _guard(d.d1_minus, "delta_1-")
        d2m = _guard(d.d2_minus, "delta_2-")
        j += 0.5 * params.g1_minus * params.g2_minus * (1.0 / d1m + 1.0 / d2m)
    return j


def exchange_J_slope(params: DeviceParams, omega_minus: float) -> float:
    """Analytic dJ/d(omega_minus); only the tunable-coupler term moves."""
    if params.g1_minus * params.g2_minus == 0.0:
        return 0.0
    d = detunings(params, omega_minus)
    d1m = _guard(d.d1_minus, "delta_1-")
    d2m = _guard(d.d2_minus, "delta_2-")
    return 0.5 * params.g1_minus * params.g2_minus * (1.0 / d1m**2 + 1.0 / d2m**2)


class IswapStrengths(NamedTuple):
    j0: float
    j1: float


def iswap_strengths(params: DeviceParams, omega_minus: float) -> IswapStrengths:
    """Effective exchange strengths for the coupler in |0> vs |1>.

    j0 equals `exchange_J`.  j1 replaces the tunable-coupler path by the
    excited-coupler one, picking up anharmonicity-shifted denominators:

        j1 = j_bus + g1- g2- [ 2/(d1- + a-) + 2/(d2- + a-) - 1/d1- - 1/d2- ] / 2

    With a- = 0 the extra terms cancel pairwise and j1 == j0.
    """
    j0 = exchange_J(params, omega_minus)
    if params.g1_minus * params.g2_minus == 0.0:
        return IswapStrengths(j0=j0, j1=j0)
    d = detunings(params, omega_minus)
    d1m = _guard(d.d1_minus, "delta_1-")
    d2m = _guard(d.d2_minus, "delta_2-")
    d1ma = _guard(d1m + params.alpha_minus, "delta_1- + alpha_-")
    d2ma = _guard(d2m + params.alpha_minus, "delta_2- + alpha_-")
    gg = params.g1_minus * params.g2_minus
    j1 = (
        j0
        + 0.5 * gg * (2.0 / d1ma + 2.0 / d2ma)
        - gg * (1.0 / d1m + 1.0 / d2m)
    )
    return IswapStrengths(j0=j0, j1=j1)


def iswap_derivative_ratio(params: DeviceParams, omega_minus: float) -> float:
    """|dJ0/dPhi| / |dJ1/dPhi| at the given coupler bias.

    The flux-map slope and the coupling product cancel, leaving

        ratio = | (1/d1-^2 + 1/d2-^2)
                  / (2/(d1- + a-)^2 + 2/(d2- + a-)^2 - 1/d1-^2 - 1/d2-^2) |

    A vanishing denominator is physical (the excited-coupler strength is
    flux-insensitive there) and raises PoleError.
    """
    d = detunings(params, omega_minus)
    d1m = _guard(d.d1_minus, "delta_1-")
    d2m = _guard(d.d2_minus, "delta_2-")
    d1ma = _guard(d1m + params.alpha_minus, "delta_1- + alpha_-")
    d2ma = _guard(d2m + params.alpha_minus, "delta_2- + alpha_-")
    num = 1.0 / d1m**2 + 1.0 / d2m**2
    den = 2.0 / d1ma**2 + 2.0 / d2ma**2 - num
    if abs(den) < 1e-12 * num:
        raise PoleError("dJ1/dPhi", den)
    return abs(num / den)


def effective_exchange_populations(
    j_eff: float, t: float, initial: str = "10", phase: float = 0.0
) -> dict[str, float]:
    """Computational-state populations under the parametric exchange.

    The flux-modulation drive reduces, in the rotating frame, to a
    resonant exchange of strength ``j_eff`` between |10> and |01>; |00>
    and |11> are stationary.  Starting from |10> the populations evolve
    as cos^2(j_eff t) / sin^2(j_eff t).  The drive phase only rotates the
    transferred amplitude and never shows up in populations, but it is
    accepted for interface completeness.

    Parameters
    ----------
    j_eff : float
        Effective exchange rate (rad/s), i.e. (delta/2) dJ/dPhi.
    t : float
        Modulation duration (s).
    initial : str
        One of "00", "01", "10", "11".
    phase : float
        Drive phase (rad); no effect on populations.
    """
    del phase
    if initial not in ("00", "01", "10", "11"):
        raise ValueError(f"initial state must be a two-bit label, got {initial!r}")
    if initial in ("00", "11"):
        pops = {"00": 0.0, "01": 0.0, "10": 0.0, "11": 0.0}
        pops[initial] = 1.0
        return pops
    stay = math.cos(j_eff * t) ** 2
    swap = math.sin(j_eff * t) ** 2
    other = "01" if initial == "10" else "10"
    return {"00": 0.0, "11": 0.0, initial: stay, other: swap}
