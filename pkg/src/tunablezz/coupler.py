"""Flux-to-frequency map of the SQUID coupler and zero-ZZ root finding.

The coupler follows the symmetric-SQUID transmon approximation

    w_-(Phi) = w_-^max sqrt(|cos(pi Phi / Phi0)|),

periodic in the flux quantum with its maximum at zero flux.  Published
operating points are quoted in frequency (or detuning) space; flux is a
convenience coordinate derived through this map.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import HybridizationError, PoleError
from .hilbert import DeviceParams, HilbertSpace, TWO_PI
from .perturbation import exchange_J_slope, zeta_perturbative
from .spectrum import zeta_exact

#: Roots are refined until |zeta| falls below this (rad/s), i.e. 100 Hz.
ROOT_TOLERANCE = TWO_PI * 100.0

DEFAULT_GRID_POINTS = 200

#: Default search window below the lower qubit, in rad/s relative offsets.
_DEFAULT_WINDOW_LO = TWO_PI * 2.4e9
_DEFAULT_WINDOW_HI = TWO_PI * 0.25e9


@dataclass(frozen=True)
class FluxPoint:
    """A coupler bias: flux (units of the flux quantum) and frequency."""

    phi: float
    omega_minus: float


@dataclass(frozen=True)
class ModulationDrive:
    """Sinusoidal flux drive Phi(t) = theta + delta cos(w_phi t + phase).

    The excursion [theta - delta, theta + delta] must stay on a single
    monotone branch of the flux map (no extremum of w_-(Phi) inside it).
    """

    theta: float
    delta: float
    omega_phi: float
    phase_phi: float = 0.0
    flux_quantum: float = 1.0

    def __post_init__(self):
        if self.delta < 0:
            raise ValueError(f"modulation amplitude must be >= 0, got {self.delta}")
        if self.delta > 0:
            # extrema of w_-(Phi) sit at integer multiples of Phi0/2; the
            # excursion must not contain one in its interior
            half = 0.5 * self.flux_quantum
            lo = (self.theta - self.delta) / half
            hi = (self.theta + self.delta) / half
            if math.ceil(hi - 1e-12) - math.floor(lo + 1e-12) > 1:
                raise ValueError(
                    f"modulation excursion [{self.theta - self.delta}, "
                    f"{self.theta + self.delta}] crosses a flux-map extremum"
                )


def omega_minus_of_flux(params: DeviceParams, phi: float) -> float:
    """Coupler frequency at flux `phi` (same units as params.flux_quantum)."""
    if not math.isfinite(phi):
        raise ValueError(f"flux must be finite, got {phi}")
    x = math.pi * phi / params.flux_quantum
    return params.omega_minus_max * math.sqrt(abs(math.cos(x)))


def flux_slope(params: DeviceParams, phi: float) -> float:
    """Analytic d(omega_minus)/d(Phi) of the flux map (rad/s per Phi0).

    Diverges at odd multiples of Phi0/2 where the map touches zero.
    """
    x = math.pi * phi / params.flux_quantum
    c = math.cos(x)
    if c == 0.0:
        raise PoleError("sqrt|cos| cusp at Phi0/2", 0.0)
    return (
        -params.omega_minus_max
        * math.pi
        / params.flux_quantum
        * math.sin(x)
        * math.copysign(1.0, c)
        / (2.0 * math.sqrt(abs(c)))
    )


def flux_of_omega_minus(params: DeviceParams, omega_minus: float) -> float:
    """Flux on the principal branch [0, Phi0/2) giving `omega_minus`."""
    if not 0.0 < omega_minus <= params.omega_minus_max:
        raise ValueError(
            f"omega_minus must lie in (0, omega_minus_max], got "
            f"{omega_minus / TWO_PI / 1e9:.4f} GHz vs max "
            f"{params.omega_minus_max / TWO_PI / 1e9:.4f} GHz"
        )
    ratio = (omega_minus / params.omega_minus_max) ** 2
    return params.flux_quantum * math.acos(min(ratio, 1.0)) / math.pi


@dataclass(frozen=True)
class ZeroZetaRoot:
    """A refined zero crossing of the ZZ rate."""

    omega_minus: float
    phi: float
    zeta: float
    method: str


def _zeta_evaluator(params, method, space):
    if method in ("exact",):
        return lambda w: zeta_exact(params, w, space)
    if method in ("perturbative", "pert"):
        return lambda w: zeta_perturbative(params, w)
    raise ValueError(f"method must be 'exact' or 'perturbative', got {method!r}")


def find_zero_zeta(
    params: DeviceParams,
    method: str = "exact",
    search_interval: tuple[float, float] | None = None,
    *,
    space: HilbertSpace | None = None,
    grid_points: int = DEFAULT_GRID_POINTS,
    tolerance: float = ROOT_TOLERANCE,
) -> list[ZeroZetaRoot]:
    """Locate all zero crossings of zeta(omega_minus) in an interval.

    The interval is sampled on a uniform grid; sign changes between
    adjacent valid samples are bracketed and refined by bisection until
    |zeta| < `tolerance`.  Grid points where the exact method fails from
    state hybridization (or the perturbative method from a pole) are
    skipped with a warning, and no bracket is formed across a skipped
    point (those gaps hide resonances, not roots).  A sign change whose
    refinement collapses onto a divergence instead of a zero is likewise
    discarded.  Zero, one or two roots are all normal outcomes; an empty
    list is not an error.

    Parameters
    ----------
    search_interval : (float, float), optional
        omega_minus bounds in rad/s.  Defaults to a window below the
        lower qubit, clamped to (0, omega_minus_max].
    """
    if search_interval is None:
        lower_qubit = min(params.omega1, params.omega2)
        search_interval = (lower_qubit - _DEFAULT_WINDOW_LO, lower_qubit - _DEFAULT_WINDOW_HI)
    lo, hi = search_interval
    lo = max(lo, TWO_PI * 1e6)
    hi = min(hi, params.omega_minus_max)
    if not lo < hi:
        raise ValueError(f"empty search interval after clamping: ({lo}, {hi})")
    if grid_points < 2:
        raise ValueError("grid must have at least 2 points")

    evaluate = _zeta_evaluator(params, method, space)
    step = (hi - lo) / (grid_points - 1)

    roots: list[ZeroZetaRoot] = []
    prev: tuple[float, float] | None = None  # last valid (omega, zeta)
    prev_index = -2
    for i in range(grid_points):
        w = lo + i * step
        try:
            z = evaluate(w)
        except (HybridizationError, PoleError) as err:
            warnings.warn(
                f"skipping grid point omega_minus = {w / TWO_PI / 1e9:.4f} GHz: {err}",
                stacklevel=2,
            )
            continue
        if prev is not None and prev_index == i - 1:
            w0, z0 = prev
            if z0 == 0.0:
                roots.append(_as_root(params, w0, z0, method))
            elif z0 * z < 0.0:
                root = _bisect(params, evaluate, w0, z0, w, z, tolerance, method)
                if root is not None:
                    roots.append(root)
        prev = (w, z)
        prev_index = i
    if prev is not None and prev[1] == 0.0:
        roots.append(_as_root(params, prev[0], prev[1], method))
    return roots


def _as_root(params, w, z, method) -> ZeroZetaRoot:
    return ZeroZetaRoot(
        omega_minus=w, phi=flux_of_omega_minus(params, w), zeta=z, method=method
    )


def _bisect(params, evaluate, a, fa, b, fb, tolerance, method) -> ZeroZetaRoot | None:
    # A pole also flips the sign; it reveals itself when the bracket
    # collapses while |zeta| refuses to shrink (or evaluation blows up).
    for _ in range(200):
        mid = 0.5 * (a + b)
        try:
            fm = evaluate(mid)
        except (HybridizationError, PoleError):
            return None
        if abs(fm) < tolerance:
            return _as_root(params, mid, fm, method)
        if b - a < 1e-3 and abs(fm) > max(abs(fa), abs(fb)):
            return None
        if fa * fm < 0.0:
            b, fb = mid, fm
        else:
            a, fa = mid, fm
    if b - a < 1e-3:
        return None
    raise RuntimeError(
        f"bisection did not reach |zeta| < {tolerance / TWO_PI:.0f} Hz in "
        f"[{a / TWO_PI / 1e9:.6f}, {b / TWO_PI / 1e9:.6f}] GHz"
    )


def zeta_slope(
    params: DeviceParams,
    omega_minus: float,
    method: str = "exact",
    *,
    space: HilbertSpace | None = None,
    step: float = TWO_PI * 1e6,
) -> float:
    """Centered finite-difference d(zeta)/d(omega_minus)."""
    evaluate = _zeta_evaluator(params, method, space)
    return (evaluate(omega_minus + step) - evaluate(omega_minus - step)) / (2.0 * step)


def default_operating_point(
    params: DeviceParams,
    roots: list[ZeroZetaRoot],
    *,
    space: HilbertSpace | None = None,
) -> ZeroZetaRoot:
    """Pick the root where zeta is least sensitive to the coupler bias.

    With several zero crossings available the gate bias defaults to the
    one with the smallest |d(zeta)/d(omega_minus)|.
    """
    if not roots:
        raise ValueError("no zero-ZZ roots to choose from")
    slopes = [
        abs(zeta_slope(params, r.omega_minus, r.method, space=space)) for r in roots
    ]
    return roots[slopes.index(min(slopes))]


def effective_drive_strength(params: DeviceParams, drive: ModulationDrive) -> float:
    """Resonant exchange rate (delta/2) dJ/dPhi at the drive's DC bias.

    Chain rule through the flux map: dJ/dPhi = (dJ/dw_-)(dw_-/dPhi),
    both factors analytic.  Zero at the flux sweet spot regardless of
    the modulation amplitude.
    """
    omega_at_bias = omega_minus_of_flux(params, drive.theta)
    dj_domega = exchange_J_slope(params, omega_at_bias)
    x = math.pi * drive.theta / params.flux_quantum
    if math.cos(x) == 0.0:
        raise PoleError("flux map cusp at bias", 0.0)
    if math.sin(x) == 0.0:
        return 0.0
    return 0.5 * drive.delta * dj_domega * flux_slope(params, drive.theta)


def modulation_amplitude_for(
    params: DeviceParams, theta: float, j_eff: float
) -> float:
    """Invert `effective_drive_strength`: the delta giving rate `j_eff`."""
    omega_at_bias = omega_minus_of_flux(params, theta)
    product = 0.5 * exchange_J_slope(params, omega_at_bias) * flux_slope(params, theta)
    if abs(product) < 1e-300 or product == 0.0:
        raise PoleError("dJ/dPhi at bias", product)
    return j_eff / product
