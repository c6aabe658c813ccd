"""Acceptance gate: one test per published-anchor criterion.

Each test prints a PASS/FAIL line with the computed numbers before
asserting, so `pytest -s tests/test_acceptance.py` doubles as the
acceptance report.  Criteria that the implemented model genuinely cannot
meet fail here openly; the analysis lives in the project notes, not in
loosened tolerances.
"""

import math
import time
import warnings
from pathlib import Path

import numpy as np
import pytest

from conftest import GHZ, KHZ, MHZ
from tunablezz.channels import Mode, RBMode, run_rb
from tunablezz.coupler import default_operating_point, find_zero_zeta
from tunablezz.devices import bundled_device, equalized_coherence, interference_configs
from tunablezz.errors import HybridizationError, PoleError
from tunablezz.hilbert import DeviceParams
from tunablezz.perturbation import (
    detunings,
    iswap_derivative_ratio,
    zeta_perturbative,
)
from tunablezz.spectrum import zeta_exact
from tunablezz.tomography import (
    SQRT_ISWAP,
    ReadoutCalibration,
    ThermalGateModel,
    concurrence,
    correct_readout,
    decohered_sqrt_iswap_channel,
    gate_fidelity,
    process_tomography_inputs,
    project_physical,
    ptm_from_channel,
    ptm_of_unitary,
    thermal_iswap_fidelity,
    thermal_population,
    unitary_root,
)

ACCEPTANCE_SEED = 20260809

ZERO_CROSSINGS_GHZ = {
    "device_a": (-1.47, -0.75),
    "device_b": (-0.84, -0.53),
}
CROSSING_TOL_GHZ = 0.06


def report(line: str) -> None:
    print(f"\n{line}")


# ---------------------------------------------------------------------------
# criterion 1: zero-crosstalk locations
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def exact_roots():
    results = {}
    for name in ("device_a", "device_b"):
        params = bundled_device(name)
        start = time.perf_counter()
        roots = find_zero_zeta(params, "exact")
        elapsed = time.perf_counter() - start
        results[name] = (params, roots, elapsed)
    return results


@pytest.mark.parametrize("name", ["device_a", "device_b"])
def test_criterion_1_zero_crosstalk_locations(exact_roots, name):
    params, roots, elapsed = exact_roots[name]
    found = sorted((r.omega_minus - params.omega1) / GHZ for r in roots)
    expected = ZERO_CROSSINGS_GHZ[name]
    ok = len(found) == 2 and all(
        abs(f - e) <= CROSSING_TOL_GHZ for f, e in zip(found, expected)
    ) and elapsed < 30.0
    report(
        f"criterion 1 [{name}]: {'PASS' if ok else 'FAIL'} - crossings at "
        f"{[round(f, 4) for f in found]} GHz vs {expected} +- 0.06 GHz "
        f"({elapsed:.1f} s)"
    )
    assert len(found) == 2
    for f, e in zip(found, expected):
        assert f == pytest.approx(e, abs=CROSSING_TOL_GHZ)
    assert elapsed < 30.0


# ---------------------------------------------------------------------------
# criterion 2: perturbation-vs-diagonalization agreement
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def config_comparison():
    """Crossings and guarded curve comparison for the four benchmark configs."""
    start = time.perf_counter()
    data = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for cid, cfg in interference_configs().items():
            params = cfg.params
            window = (cfg.omega_lo, cfg.omega_hi)
            roots_exact = find_zero_zeta(params, "exact", window)
            roots_pert = find_zero_zeta(params, "perturbative", window)
            g_max = max(params.g1_plus, params.g2_plus, params.g1_minus, params.g2_minus)
            worst_rel, worst_at = 0.0, None
            for w in np.linspace(cfg.omega_lo, cfg.omega_hi, 120):
                d = detunings(params, w)
                dets = [abs(d.d1_minus), abs(d.d2_minus)]
                if params.g1_plus > 0:
                    dets += [abs(d.d1_plus), abs(d.d2_plus)]
                if min(dets) < 4 * g_max:
                    continue
                try:
                    ze = zeta_exact(params, w)
                    zp = zeta_perturbative(params, w)
                except (HybridizationError, PoleError):
                    continue
                if abs(ze) < 10 * KHZ:
                    continue
                rel = abs(zp - ze) / abs(ze)
                if rel > worst_rel:
                    worst_rel, worst_at = rel, (w - params.omega2) / GHZ
            data[cid] = (cfg, roots_exact, roots_pert, worst_rel, worst_at)
    data["elapsed"] = time.perf_counter() - start
    return data


@pytest.mark.parametrize("cid", ["a", "b", "c", "d"])
def test_criterion_2_crossing_agreement(config_comparison, cid):
    cfg, roots_exact, roots_pert, _, _ = config_comparison[cid]
    pairs = []
    ok = len(roots_exact) == len(roots_pert)
    for re, rp in zip(
        sorted(roots_exact, key=lambda r: r.omega_minus),
        sorted(roots_pert, key=lambda r: r.omega_minus),
    ):
        d = detunings(cfg.params, re.omega_minus)
        allowed = 0.05 * min(abs(d.d1_minus), abs(d.d2_minus))
        gap = abs(re.omega_minus - rp.omega_minus)
        pairs.append((gap, allowed))
        ok = ok and gap <= allowed
    detail = ", ".join(
        f"gap {g / MHZ:.1f} MHz vs allowed {a / MHZ:.1f} MHz" for g, a in pairs
    ) or "no crossings in either method"
    report(
        f"criterion 2 [config {cid} crossings]: {'PASS' if ok else 'FAIL'} - "
        f"exact {len(roots_exact)} vs 4th-order {len(roots_pert)}; {detail}"
    )
    assert len(roots_exact) == len(roots_pert)
    for gap, allowed in pairs:
        assert gap <= allowed


@pytest.mark.parametrize("cid", ["a", "b", "c", "d"])
def test_criterion_2_curve_agreement(config_comparison, cid):
    _, _, _, worst_rel, worst_at = config_comparison[cid]
    ok = worst_rel <= 0.25
    report(
        f"criterion 2 [config {cid} curves]: {'PASS' if ok else 'FAIL'} - worst "
        f"relative error {100 * worst_rel:.1f}% (limit 25%) at "
        f"{worst_at if worst_at is None else round(worst_at, 3)} GHz above qubit 2, "
        "guard: |zeta|/2pi > 10 kHz and qubit-coupler detunings > 4x largest g"
    )
    assert worst_rel <= 0.25


def test_criterion_2_config_c_anchor(config_comparison):
    cfg, roots_exact, _, _, _ = config_comparison["c"]
    assert roots_exact, "config (c) exact sweep found no zero crossing"
    computed = (roots_exact[0].omega_minus - cfg.params.omega2) / GHZ
    ok = abs(computed - 0.634) <= 0.015
    report(
        f"criterion 2 [config c anchor]: {'PASS' if ok else 'FAIL'} - exact zero "
        f"at {computed:.4f} GHz above qubit 2 vs 0.634 +- 0.015 GHz"
    )
    assert computed == pytest.approx(0.634, abs=0.015)


def test_criterion_2_runtime(config_comparison):
    elapsed = config_comparison["elapsed"]
    report(f"criterion 2 [runtime]: {'PASS' if elapsed < 120 else 'FAIL'} - "
           f"{elapsed:.1f} s for all four configurations (limit 120 s)")
    assert elapsed < 120.0


# ---------------------------------------------------------------------------
# criterion 3: randomized benchmarking
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def rb_results():
    params = bundled_device("device_a")
    start = time.perf_counter()
    zeta_big = 2 * math.pi * 2.26e6
    out = {
        "sim0": run_rb(RBMode.SIMULTANEOUS, params, 0.0, seed=ACCEPTANCE_SEED),
        "sim226": run_rb(RBMode.SIMULTANEOUS, params, zeta_big, seed=ACCEPTANCE_SEED),
        "ind_q1": run_rb(RBMode.INDIVIDUAL_Q1, params, 0.0, seed=ACCEPTANCE_SEED),
        "ind_q2": run_rb(RBMode.INDIVIDUAL_Q2, params, 0.0, seed=ACCEPTANCE_SEED),
        "ind_q1_zz": run_rb(RBMode.INDIVIDUAL_Q1, params, zeta_big, seed=ACCEPTANCE_SEED),
    }
    out["elapsed"] = time.perf_counter() - start
    return out


def test_criterion_3_simultaneous_fidelity_zero_crosstalk(rb_results):
    rb = rb_results["sim0"]
    values = {q.value: rb.fidelity[q] for q in (Mode.Q1, Mode.Q2)}
    ok = all(abs(v - 0.998) <= 0.0015 for v in values.values())
    report(
        f"criterion 3 [F_S, zeta=0]: {'PASS' if ok else 'FAIL'} - "
        f"{ {k: round(v, 5) for k, v in values.items()} } vs 0.998 +- 0.0015"
    )
    for v in values.values():
        assert v == pytest.approx(0.998, abs=0.0015)


def test_criterion_3_simultaneous_fidelity_large_crosstalk(rb_results):
    rb = rb_results["sim226"]
    values = {q.value: rb.fidelity[q] for q in (Mode.Q1, Mode.Q2)}
    ok = all(abs(v - 0.985) <= 0.003 for v in values.values())
    report(
        f"criterion 3 [F_S, zeta/2pi=2.26 MHz]: {'PASS' if ok else 'FAIL'} - "
        f"{ {k: round(v, 5) for k, v in values.items()} } vs 0.985 +- 0.003"
    )
    for v in values.values():
        assert v == pytest.approx(0.985, abs=0.003)


def test_criterion_3_individual_fidelity_exceeds_998(rb_results):
    values = {
        "q1": rb_results["ind_q1"].fidelity[Mode.Q1],
        "q2": rb_results["ind_q2"].fidelity[Mode.Q2],
    }
    ok = all(v > 0.998 for v in values.values())
    report(
        f"criterion 3 [F_I > 99.8%]: {'PASS' if ok else 'FAIL'} - "
        f"{ {k: round(v, 5) for k, v in values.items()} } "
        "(q2 sits at its Eq.-of-motion coherence limit of 99.787%)"
    )
    for v in values.values():
        assert v > 0.998


def test_criterion_3_individual_fidelity_zeta_independent(rb_results):
    base = rb_results["ind_q1"].fidelity[Mode.Q1]
    with_zz = rb_results["ind_q1_zz"].fidelity[Mode.Q1]
    ok = base == with_zz
    report(
        f"criterion 3 [F_I independent of zeta]: {'PASS' if ok else 'FAIL'} - "
        f"{base:.6f} vs {with_zz:.6f} (spectator stays in its ground state)"
    )
    assert base == with_zz


def test_criterion_3_runtime(rb_results):
    elapsed = rb_results["elapsed"]
    report(f"criterion 3 [runtime]: {'PASS' if elapsed < 120 else 'FAIL'} - "
           f"{elapsed:.1f} s for the five benchmarking runs (limit 120 s)")
    assert elapsed < 120.0


# ---------------------------------------------------------------------------
# criterion 4: coherence-limited gate fidelity
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def coherence_limited_fg():
    params = bundled_device("device_b")
    start = time.perf_counter()
    r_exp = ptm_from_channel(decohered_sqrt_iswap_channel(params))
    fg = gate_fidelity(r_exp, ptm_of_unitary(SQRT_ISWAP), 2)
    return fg, time.perf_counter() - start


def test_criterion_4_coherence_limited_gate_fidelity(coherence_limited_fg):
    fg, elapsed = coherence_limited_fg
    ok = abs(fg - 0.984) <= 0.005
    report(
        f"criterion 4 [coherence-limited F_g]: {'PASS' if ok else 'FAIL'} - "
        f"computed {fg:.5f} vs 0.984 +- 0.005 ({elapsed:.1f} s); the pinned "
        "channel model yields 0.9901 (verified against the closed-form "
        "process-fidelity product), above the published band"
    )
    assert fg == pytest.approx(0.984, abs=0.005)
    assert elapsed < 30.0


# ---------------------------------------------------------------------------
# criterion 5: interference derivative ratio
# ---------------------------------------------------------------------------

def test_criterion_5_derivative_ratio(exact_roots):
    params_b = bundled_device("device_b")
    ratio_b = iswap_derivative_ratio(params_b, params_b.omega1 - 0.84 * GHZ)
    ok_b = abs(ratio_b - 6.1) <= 0.5

    params_a, roots_a, _ = exact_roots["device_a"]
    ratios_a = [iswap_derivative_ratio(params_a, r.omega_minus) for r in roots_a]
    ok_a = all(r > 1.0 for r in ratios_a)
    report(
        f"criterion 5 [interference ratio]: {'PASS' if ok_b and ok_a else 'FAIL'} - "
        f"device B at -0.84 GHz: {ratio_b:.3f} vs 6.1 +- 0.5; device A at its "
        f"zero-crosstalk points: {[round(r, 2) for r in ratios_a]} (all > 1 required)"
    )
    assert ratio_b == pytest.approx(6.1, abs=0.5)
    for r in ratios_a:
        assert r > 1.0


# ---------------------------------------------------------------------------
# criterion 6: thermal fidelity sweep
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def thermal_curves(exact_roots):
    temps = np.linspace(0.0, 200.0, 21) * 1e-3
    curves = {}
    for name in ("device_a", "device_b"):
        params, roots, _ = exact_roots[name]
        bias = default_operating_point(params, roots).omega_minus
        alpha = iswap_derivative_ratio(params, bias)
        ideal = equalized_coherence(params)
        own, equal = [], []
        for t in temps:
            model = ThermalGateModel(p=thermal_population(bias, t), alpha_exponent=alpha)
            own.append(thermal_iswap_fidelity(params, model))
            equal.append(thermal_iswap_fidelity(ideal, model))
        curves[name] = {
            "bias": bias,
            "alpha": alpha,
            "own": np.array(own),
            "equal": np.array(equal),
        }
    curves["temps"] = temps
    return curves


def test_criterion_6_zero_temperature_matches_criterion_4(
    thermal_curves, coherence_limited_fg
):
    fg, _ = coherence_limited_fg
    f0 = thermal_curves["device_b"]["own"][0]
    ok = abs(f0 - fg) <= 2e-3
    report(
        f"criterion 6 [T=0 consistency]: {'PASS' if ok else 'FAIL'} - thermal "
        f"model at p=0 gives {f0:.5f} vs transfer-matrix figure {fg:.5f}"
    )
    assert f0 == pytest.approx(fg, abs=2e-3)


@pytest.mark.parametrize("name", ["device_a", "device_b"])
def test_criterion_6_fidelity_strictly_decreasing(thermal_curves, name):
    own = thermal_curves[name]["own"]
    steps = np.diff(own)
    ok = np.all(steps < 0)
    report(
        f"criterion 6 [{name} monotone]: {'PASS' if ok else 'FAIL'} - largest "
        f"step {steps.max():+.2e} over 0..200 mK (must stay negative)"
    )
    assert np.all(steps < 0)


def test_criterion_6_device_b_dominates_at_equal_coherence(thermal_curves):
    gap = thermal_curves["device_b"]["equal"] - thermal_curves["device_a"]["equal"]
    ok = np.all(gap >= 0)
    report(
        "criterion 6 [device comparison]: "
        f"{'PASS' if ok else 'FAIL'} - min(B - A) = {gap.min():+.5f} at equalized "
        f"coherence; biases A {thermal_curves['device_a']['bias'] / GHZ:.3f} GHz "
        f"(exponent {thermal_curves['device_a']['alpha']:.2f}), "
        f"B {thermal_curves['device_b']['bias'] / GHZ:.3f} GHz "
        f"(exponent {thermal_curves['device_b']['alpha']:.2f})"
    )
    assert np.all(gap >= 0)


# ---------------------------------------------------------------------------
# criterion 7: property suites
# ---------------------------------------------------------------------------

def test_criterion_7_property_suite():
    from tunablezz.channels import GateLabel, NoiseParams, rb_step
    from tunablezz.hilbert import HilbertSpace, build_hamiltonian, total_number
    from conftest import random_density, random_unitary

    failures = []

    # channel trace/Hermiticity preservation to 1e-10
    rng = np.random.default_rng(2026)
    noise = NoiseParams(t1=15.2e-6, t2=4.2e-6, gate_time=22e-9)
    for _ in range(25):
        rho = random_density(rng, 4)
        out = rb_step(
            rho,
            (
                list(GateLabel)[rng.integers(7)],
                list(GateLabel)[rng.integers(7)],
            ),
            2 * math.pi * rng.uniform(-3e6, 3e6),
            noise,
            noise,
        ).matrix
        if abs(np.trace(out).real - 1.0) > 1e-10 or abs(np.trace(out).imag) > 1e-10:
            failures.append("trace preservation")
            break
        if np.max(np.abs(out - out.conj().T)) > 1e-10:
            failures.append("hermiticity preservation")
            break

    # projection idempotence and zero distance on physical inputs
    rho = random_density(rng, 4)
    projected, distance = project_physical(rho)
    if distance > 1e-12 or not np.allclose(projected, rho, atol=1e-10):
        failures.append("projection on physical input")
    noisy = rho + 0.15 * np.diag([1.0, -1.0, 0.5, -0.5])
    once, _ = project_physical(noisy)
    twice, d2 = project_physical(once)
    if d2 > 1e-12 or not np.allclose(once, twice, atol=1e-10):
        failures.append("projection idempotence")

    # concurrence anchors
    bell = np.zeros(4, dtype=complex)
    bell[2], bell[1] = 1 / math.sqrt(2), 1j / math.sqrt(2)
    if abs(concurrence(np.outer(bell, bell.conj())) - 1.0) > 1e-10:
        failures.append("Bell concurrence")
    product = np.zeros(4, dtype=complex)
    product[0] = 1.0
    if concurrence(np.outer(product, product.conj())) != 0.0:
        failures.append("product-state concurrence")

    # readout round trip to 1e-12 on all four basis states
    cal = ReadoutCalibration.from_error_rates((0.05, 0.10), (0.03, 0.07))
    for k in range(4):
        e_k = np.zeros(4)
        e_k[k] = 1.0
        recovered = correct_readout(cal.combined() @ e_k, cal)
        if np.max(np.abs(recovered - e_k)) > 1e-12:
            failures.append(f"readout round trip |{k:02b}>")

    # transfer-matrix composition homomorphism on random unitaries
    for _ in range(5):
        u1, u2 = random_unitary(rng, 4), random_unitary(rng, 4)
        lhs = ptm_of_unitary(u2 @ u1).r
        rhs = ptm_of_unitary(u2).r @ ptm_of_unitary(u1).r
        if not np.allclose(lhs, rhs, atol=1e-10):
            failures.append("PTM homomorphism")
            break

    # fractional-gate round trip to 1e-10
    for alpha in (3, 6):
        root = unitary_root(SQRT_ISWAP, float(alpha))
        if not np.allclose(np.linalg.matrix_power(root, alpha), SQRT_ISWAP, atol=1e-10):
            failures.append(f"unitary root alpha={alpha}")

    # excitation-number conservation of the circuit Hamiltonian
    params = bundled_device("device_a")
    space = HilbertSpace.default((3, 3, 2, 3))
    h = build_hamiltonian(params, space, 4.0 * GHZ).matrix
    n = total_number(space).matrix
    if np.max(np.abs(h @ n - n @ h)) > 1e-10 * np.linalg.norm(h):
        failures.append("excitation conservation")

    # qubit-exchange symmetry of the ZZ rate, both routes
    swapped = DeviceParams(
        **{
            **params.__dict__,
            "omega1": params.omega2, "omega2": params.omega1,
            "alpha1": params.alpha2, "alpha2": params.alpha1,
            "g1_plus": params.g2_plus, "g2_plus": params.g1_plus,
            "g1_minus": params.g2_minus, "g2_minus": params.g1_minus,
            "t1_1": params.t1_2, "t1_2": params.t1_1,
            "t2_1": params.t2_2, "t2_2": params.t2_1,
        }
    )
    w = params.omega1 - 1.2 * GHZ
    if abs(zeta_exact(swapped, w, space) - zeta_exact(params, w, space)) > 1e-3:
        failures.append("exact exchange symmetry")
    if not math.isclose(
        zeta_perturbative(swapped, w), zeta_perturbative(params, w), rel_tol=1e-10
    ):
        failures.append("perturbative exchange symmetry")

    ok = not failures
    report(
        f"criterion 7 [property suite]: {'PASS' if ok else 'FAIL'} - "
        f"{'all properties hold' if ok else 'violated: ' + ', '.join(failures)}"
    )
    assert not failures


# ---------------------------------------------------------------------------
# criterion 8: experimental-only numbers documented, not gated
# ---------------------------------------------------------------------------

def test_criterion_8_experimental_numbers_documented():
    readme = Path(__file__).resolve().parents[1] / "README.md"
    text = readme.read_text()
    required = ["98.5", "99.4", "0.99", "96.3", "94.8", "0.055", "0.004"]
    missing = [token for token in required if token not in text]
    ok = not missing
    report(
        f"criterion 8 [documentation]: {'PASS' if ok else 'FAIL'} - README "
        f"{'lists all experimental-only values with simulated analogues' if ok else 'missing: ' + ', '.join(missing)}"
    )
    assert not missing
