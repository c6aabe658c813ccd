"""Exact diagonalization, bare-state labeling, and the exact ZZ rate.

The ZZ rate is read off the dressed spectrum as

    zeta = w(1100) - w(1000) - w(0100),

with every dressed frequency measured relative to the dressed ground
state.  Dressed levels are identified with bare Fock states by a global
greedy maximum-overlap assignment, which stays well defined up to (but
not through) avoided crossings.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import HybridizationError
from .hilbert import DEFAULT_DIMS, DeviceParams, HilbertSpace, Operator, build_hamiltonian

#: Relative Frobenius tolerance accepted by `diagonalize`.
HERMITICITY_RTOL = 1e-9

#: Assignments with squared overlap below this are flagged hybridized.
HYBRIDIZATION_THRESHOLD = 0.5

GROUND = (0, 0, 0, 0)
Q1_EXCITED = (1, 0, 0, 0)
Q2_EXCITED = (0, 1, 0, 0)
BOTH_EXCITED = (1, 1, 0, 0)
COMPUTATIONAL_STATES = (GROUND, Q1_EXCITED, Q2_EXCITED, BOTH_EXCITED)


def diagonalize(op: Operator | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Full Hermitian eigendecomposition, eigenvalues ascending.

    Accepts an Operator or a bare matrix.  Raises ValueError if the input
    deviates from Hermiticity by more than HERMITICITY_RTOL in relative
    Frobenius norm.
    """
    h = op.matrix if isinstance(op, Operator) else np.asarray(op)
    scale = np.linalg.norm(h)
    deviation = np.linalg.norm(h - h.conj().T)
    if scale > 0 and deviation > HERMITICITY_RTOL * scale:
        raise ValueError(
            f"matrix is not Hermitian: relative deviation {deviation / scale:.3g}"
        )
    return np.linalg.eigh(h)


@dataclass(frozen=True)
class LabeledSpectrum:
    """Dressed spectrum with bare-state labels.

    ``labels`` maps bare occupation tuples to eigenvector indices and
    ``overlaps`` records the squared overlap of each assignment.  The
    assignment is injective by construction; low-overlap entries are kept
    but flagged via `is_hybridized`.
    """

    space: HilbertSpace
    eigenvalues: np.ndarray
    labels: dict
    overlaps: dict

    def eigenvalue(self, bare: tuple[int, ...]) -> float:
        return float(self.eigenvalues[self.labels[bare]])

    def overlap(self, bare: tuple[int, ...]) -> float:
        return float(self.overlaps[bare])

    def is_hybridized(self, bare: tuple[int, ...]) -> bool:
        return self.overlaps[bare] < HYBRIDIZATION_THRESHOLD

    def relative_frequency(self, bare: tuple[int, ...]) -> float:
        """Dressed frequency relative to the dressed ground state."""
        ground = tuple(0 for _ in self.space.modes)
        return self.eigenvalue(bare) - self.eigenvalue(ground)


def label_states(
    eigenvalues: np.ndarray, eigenvectors: np.ndarray, space: HilbertSpace
) -> LabeledSpectrum:
    """Assign bare labels to eigenvectors by global greedy max overlap.

    All (bare, eigenvector) overlaps are ranked once and consumed in
    descending order with exclusion on both sides, so no two bare states
    can claim the same eigenvector near an avoided crossing.  Ties break
    deterministically on flat index.
    """
    probs = np.abs(eigenvectors) ** 2  # rows: bare index, cols: eigenvector
    n = probs.shape[0]
    order = np.argsort(-probs, axis=None, kind="stable")
    labels: dict = {}
    overlaps: dict = {}
    used_bare = np.zeros(n, dtype=bool)
    used_eig = np.zeros(n, dtype=bool)
    assigned = 0
    for flat in order:
        bare, eig = divmod(int(flat), n)
        if used_bare[bare] or used_eig[eig]:
            continue
        used_bare[bare] = True
        used_eig[eig] = True
        occ = space.occupation_of(bare)
        labels[occ] = eig
        overlaps[occ] = float(probs[bare, eig])
        assigned += 1
        if assigned == n:
            break
    return LabeledSpectrum(space, np.asarray(eigenvalues), labels, overlaps)


@dataclass(frozen=True)
class ZetaResult:
    """Exact ZZ rate together with labeling diagnostics."""

    zeta: float
    overlaps: dict

    @property
    def min_overlap(self) -> float:
        return min(self.overlaps.values())


def zeta_exact_details(
    params: DeviceParams, omega_minus: float, space: HilbertSpace | None = None
) -> ZetaResult:
    """Exact ZZ rate from the dressed spectrum, with overlap diagnostics.

    Raises HybridizationError if any computational state's assignment
    falls below the 0.5 overlap threshold (the bare label, and hence the
    ZZ readout, is then unreliable).
    """
    if space is None:
        space = HilbertSpace.default(DEFAULT_DIMS)
    h = build_hamiltonian(params, space, omega_minus)
    labeled = label_states(*diagonalize(h), space)
    overlaps = {occ: labeled.overlap(occ) for occ in COMPUTATIONAL_STATES}
    if any(labeled.is_hybridized(occ) for occ in COMPUTATIONAL_STATES):
        raise HybridizationError(overlaps)
    zeta = (
        labeled.relative_frequency(BOTH_EXCITED)
        - labeled.relative_frequency(Q1_EXCITED)
        - labeled.relative_frequency(Q2_EXCITED)
    )
    return ZetaResult(zeta=zeta, overlaps=overlaps)


def zeta_exact(
    params: DeviceParams, omega_minus: float, space: HilbertSpace | None = None
) -> float:
    """Exact ZZ rate (rad/s); see `zeta_exact_details` for diagnostics."""
    return zeta_exact_details(params, omega_minus, space).zeta


@dataclass(frozen=True)
class ConvergenceRow:
    dims: tuple[int, ...]
    zeta: float
    deviation: float


@dataclass(frozen=True)
class ConvergenceTable:
    """ZZ rate versus Fock truncation, referenced to the largest space."""

    rows: tuple[ConvergenceRow, ...]
    reference_dims: tuple[int, ...]


def convergence_check(
    params: DeviceParams, omega_minus: float, dims_list: list[tuple[int, ...]]
) -> ConvergenceTable:
    """Evaluate zeta at each truncation and report |zeta - zeta_ref|.

    The reference is the entry with the largest total dimension.
    Requires at least two truncation settings.
    """
    if len(dims_list) < 2:
        raise ValueError("need at least two truncation settings to compare")
    zetas = {}
    for dims in dims_list:
        space = HilbertSpace.default(tuple(dims))
        zetas[tuple(dims)] = zeta_exact(params, omega_minus, space)
    reference = max(zetas, key=lambda d: int(np.prod(d)))
    rows = tuple(
        ConvergenceRow(dims=d, zeta=z, deviation=abs(z - zetas[reference]))
        for d, z in zetas.items()
    )
    return ConvergenceTable(rows=rows, reference_dims=reference)
