"""End-to-end acceptance gates.

Each test prints one ``[acceptance NN] name: PASS/FAIL`` line on the
real stdout (bypassing capture) so a plain pytest run shows the
scorecard.  The checks are deliberately heavyweight: wide random
sweeps, Monte Carlo laws, calibration of the sampler, and byte-level
reproducibility of the CLI.
"""

import json
import subprocess
import sys
import time

import numpy as np
import pytest

from switchtest.analytic import (
    haar_average_fidelity,
    modified_swap_pass_prob,
    process_fidelity_closed,
    process_fidelity_sum,
    repeated_test_probs,
    single_switch_pass_prob,
    swap_pass_prob,
    two_state_pass_prob,
)
from switchtest.circuits import (
    hom_coincidence,
    modified_swap_test,
    single_switch_test,
    swap_test,
    two_state_switch_test,
)
from switchtest.gates import generalized_cx, identity, shift
from switchtest.probes import basis_probes, entangled_probe
from switchtest.protocol import (
    CERTAINLY_DIFFERENT,
    check_magic_claim,
    discriminate,
    discrimination_sweep,
    hoeffding_radius,
    run_shots,
)
from switchtest.qmath import QuantumState, random_pure_state, random_unitary


@pytest.fixture
def announce(capsys):
    def _announce(number: int, name: str, passed: bool) -> None:
        with capsys.disabled():
            print(f"[acceptance {number:02d}] {name}: {'PASS' if passed else 'FAIL'}")

    return _announce


def test_01_simulations_match_closed_forms(announce):
    """200 random operator/probe triples per dimension in {2, 3, 4}:
    every circuit simulation agrees with its trace formula to 1e-12,
    and the whole sweep stays under 30 seconds."""
    ok = False
    try:
        start = time.monotonic()
        worst = 0.0
        for d in (2, 3, 4):
            for i in range(200):
                u1 = random_unitary(d, 6 * (1000 * d + i))
                u2 = random_unitary(d, 6 * (1000 * d + i) + 1)
                phi = random_pure_state(d, 6 * (1000 * d + i) + 2)

                psi1 = QuantumState.pure(u1.matrix @ phi.vector)
                psi2 = QuantumState.pure(u2.matrix @ phi.vector)
                gaps = [
                    abs(swap_test(psi1, psi2).p_pass - swap_pass_prob(psi1, psi2)),
                    abs(
                        single_switch_test(u1, u2, phi).p_pass
                        - single_switch_pass_prob(u1, u2, phi)
                    ),
                    abs(
                        modified_swap_test(u1, u2, phi, phi).p_pass
                        - modified_swap_pass_prob(u1, u2, phi)
                    ),
                    abs(
                        two_state_switch_test(u1, u2, phi.tensor(phi)).p_pass
                        - two_state_pass_prob(u1, u2, phi.tensor(phi))
                    ),
                ]
                if i % 10 == 0:
                    mixed = QuantumState.maximally_mixed(d)
                    gaps.append(
                        abs(
                            single_switch_test(u1, u2, mixed).p_pass
                            - single_switch_pass_prob(u1, u2, mixed)
                        )
                    )
                    ent = entangled_probe(d)
                    gaps.append(
                        abs(
                            two_state_switch_test(u1, u2, ent).p_pass
                            - two_state_pass_prob(u1, u2, ent)
                        )
                    )
                worst = max(worst, *gaps)
        elapsed = time.monotonic() - start
        assert worst <= 1e-12, f"worst simulation/formula gap {worst:.3e}"
        assert elapsed < 30.0, f"sweep took {elapsed:.1f}s"
        ok = True
    finally:
        announce(1, "simulations match closed forms", ok)


def test_02_qualitative_behavior(announce):
    """Equal operators always pass; CNOT vs identity passes certainly
    on fixed basis pairs and at 1/2 on moved ones; a pi global phase is
    caught by the single-register test and invisible to the
    two-register test."""
    ok = False
    try:
        for d, seed in ((2, 0), (3, 1)):
            u = random_unitary(d, seed)
            phi = random_pure_state(d, seed + 10)
            evolved = QuantumState.pure(u.matrix @ phi.vector)
            assert swap_test(evolved, evolved).p_pass == pytest.approx(1.0, abs=1e-12)
            assert single_switch_test(u, u, phi).p_pass == pytest.approx(1.0, abs=1e-12)
            assert modified_swap_test(u, u, phi, phi).p_pass == pytest.approx(1.0, abs=1e-12)
            assert two_state_switch_test(u, u, phi.tensor(phi)).p_pass == pytest.approx(
                1.0, abs=1e-12
            )

        cnot, eye4 = generalized_cx(2), identity(4)
        expected = [1.0, 1.0, 0.5, 0.5]
        for k, p_exp in enumerate(expected):
            probe = QuantumState.basis(4, k)
            p = two_state_switch_test(cnot, eye4, probe.tensor(probe)).p_pass
            assert p == pytest.approx(p_exp, abs=1e-12)

        u = random_unitary(2, 99)
        flipped = u.phased(np.pi)
        phi = random_pure_state(2, 98)
        assert single_switch_test(flipped, u, phi).p_pass == pytest.approx(0.0, abs=1e-12)
        assert two_state_switch_test(flipped, u, phi.tensor(phi)).p_pass == pytest.approx(
            1.0, abs=1e-12
        )
        ok = True
    finally:
        announce(2, "qualitative pass/fail behavior", ok)


def test_03_operator_basis_sum_equals_closed_form(announce):
    """200 random pairs per dimension in {2, 3}: the brute-force
    operator-basis sum reproduces |tr(U1^dag U2)|^2 / d^2 to 1e-10."""
    ok = False
    try:
        worst = 0.0
        for d in (2, 3):
            for i in range(200):
                u1 = random_unitary(d, 3000 * d + 2 * i)
                u2 = random_unitary(d, 3000 * d + 2 * i + 1)
                gap = abs(process_fidelity_sum(u1, u2) - process_fidelity_closed(u1, u2))
                worst = max(worst, gap)
        assert worst <= 1e-10, f"worst route gap {worst:.3e}"
        ok = True
    finally:
        announce(3, "operator-basis sum equals closed form", ok)


def test_04_haar_average_law(announce):
    """For 10 random qubit pairs, the Monte Carlo mean of the probe
    fidelity over 10^5 Haar states lands within three standard errors
    of (d F_pro + 1) / (d + 1), in under 60 seconds."""
    ok = False
    try:
        start = time.monotonic()
        n = 100_000
        rng = np.random.default_rng(20240917)
        for _ in range(10):
            u1 = random_unitary(2, rng)
            u2 = random_unitary(2, rng)
            v = u1.matrix.conj().T @ u2.matrix
            z = rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))
            z /= np.linalg.norm(z, axis=1, keepdims=True)
            f = np.abs(np.einsum("ia,ab,ib->i", z.conj(), v, z)) ** 2
            se = f.std(ddof=1) / np.sqrt(n)
            predicted = haar_average_fidelity(u1, u2)
            assert abs(f.mean() - predicted) <= 3 * se, (
                f"MC mean {f.mean():.6f} vs law {predicted:.6f}, se {se:.2e}"
            )
        elapsed = time.monotonic() - start
        assert elapsed < 60.0, f"Monte Carlo took {elapsed:.1f}s"
        ok = True
    finally:
        announce(4, "Haar-average fidelity law", ok)


def test_05_repeated_vs_mixed_ordering(announce):
    """1000 random fidelity lists: testing probes individually never
    beats the averaged-fidelity prediction (tolerance 1e-12), with
    equality exactly for constant lists."""
    ok = False
    try:
        rng = np.random.default_rng(512)
        strict_checked = 0
        for _ in range(1000):
            f = rng.random(int(rng.integers(1, 9)))
            report = repeated_test_probs(f)
            assert report.p_repeated <= report.p_mixed + 1e-12
            if len(f) >= 2 and f.max() - f.min() > 1e-3:
                assert report.p_mixed - report.p_repeated > 1e-12
                strict_checked += 1
        assert strict_checked >= 800  # the strict branch was really exercised
        for value, n in ((0.0, 3), (0.37, 5), (1.0, 4)):
            report = repeated_test_probs([value] * n)
            assert abs(report.p_mixed - report.p_repeated) <= 1e-12
        ok = True
    finally:
        announce(5, "repeated vs mixed AM-GM ordering", ok)


def test_06_magic_mixture_statistic(announce):
    """For identical qubit identities the mixture statistic evaluates
    to 0.625 through two independent routes (per-component circuits and
    the flattened matrix), while the process-fidelity side is 1."""
    ok = False
    try:
        report = check_magic_claim(identity(2), identity(2))
        assert abs(report.lhs - 0.625) <= 1e-12
        assert abs(report.detail["flattened_route"] - 0.625) <= 1e-12
        assert report.detail["route_gap"] <= 1e-12
        assert report.rhs == pytest.approx(1.0, abs=1e-15)
        assert abs(report.abs_diff - 0.375) <= 1e-12
        assert not report.holds
        ok = True
    finally:
        announce(6, "magic mixture statistic via two routes", ok)


def test_07_sampler_calibration(announce):
    """For p in {0.5, 0.75, 0.99} and 10^4 shots across 1000 seeds, the
    fraction of runs whose empirical rate violates the Hoeffding bound
    at epsilon = 0.01 stays at or below 0.015."""
    ok = False
    try:
        shots = 10_000
        t = hoeffding_radius(shots, 0.01)
        for p in (0.5, 0.75, 0.99):
            violations = 0
            for seed in range(1000):
                rec = run_shots(p, shots, seed)
                violations += abs(rec.p_hat - p) > t
            fraction = violations / 1000
            assert fraction <= 0.015, f"p={p}: violation fraction {fraction}"
        ok = True
    finally:
        announce(7, "sampler calibration against Hoeffding bound", ok)


def test_08_discrimination_power(announce):
    """Identity vs shift at d = 2 with an 8-shot budget is caught in at
    least 88% of 1000 seeded runs, and the detection rate of the
    single-shot exhaustive strategy grows with process infidelity
    (monotone within 3 sigma across {0.1, 0.3, 0.5, 0.9})."""
    ok = False
    try:
        probes = basis_probes(2)
        u1, u2 = identity(2), shift(2)
        detected = sum(
            discriminate(u1, u2, probes, shots_per_probe=4, seed=s).decision
            == CERTAINLY_DIFFERENT
            for s in range(1000)
        )
        rate = detected / 1000
        assert rate >= 0.88, f"detected {rate:.3f} of runs"

        points = discrimination_sweep(2, [0.1, 0.3, 0.5, 0.9], trials=1000, seed=424242)
        rates = [p.detection_rate for p in points]
        sigmas = [max(np.sqrt(r * (1 - r) / 1000), 1e-3) for r in rates]
        for i in range(len(rates) - 1):
            assert rates[i + 1] + 3 * sigmas[i + 1] >= rates[i] - 3 * sigmas[i], (
                f"detection rate fell from {rates[i]:.3f} to {rates[i + 1]:.3f}"
            )
        assert rates[0] > 0.05 and rates[-1] > 0.8
        ok = True
    finally:
        announce(8, "discrimination power and monotone detection", ok)


def test_09_hom_complement_matches_two_state_test(announce):
    """200 random cases: one minus the coincidence probability of the
    evolved photon pair equals the two-register switch pass probability
    on the doubled probe, to 1e-12."""
    ok = False
    try:
        worst = 0.0
        for i in range(200):
            d = 2 if i % 2 == 0 else 3
            u1 = random_unitary(d, 7000 + 3 * i)
            u2 = random_unitary(d, 7001 + 3 * i)
            phi = random_pure_state(d, 7002 + 3 * i)
            rho = QuantumState.pure(u1.matrix @ phi.vector)
            sigma = QuantumState.pure(u2.matrix @ phi.vector)
            complement = 1.0 - hom_coincidence(rho, sigma)
            p_two = two_state_switch_test(u1, u2, phi.tensor(phi)).p_pass
            worst = max(worst, abs(complement - p_two))
        assert worst <= 1e-12, f"worst complement gap {worst:.3e}"
        ok = True
    finally:
        announce(9, "coincidence complement equals switch pass", ok)


def test_10_envelope_reproducibility(announce, tmp_path):
    """Running the CLI twice with one configuration and seed produces
    byte-identical JSON envelopes."""
    ok = False
    try:
        args = [
            sys.executable, "-m", "switchtest", "compare",
            "--u1", "RZ(0.3)", "--u2", "HW(1,1)", "--dim", "2",
            "--probes", "haar:3", "--shots", "100", "--seed", "31",
        ]
        out1, out2 = tmp_path / "run1.json", tmp_path / "run2.json"
        for out in (out1, out2):
            proc = subprocess.run(
                [*args, "--out", str(out)], capture_output=True, text=True
            )
            assert proc.returncode == 0, proc.stderr
        blob1, blob2 = out1.read_bytes(), out2.read_bytes()
        assert blob1 == blob2
        envelope = json.loads(blob1)
        assert envelope["seed"] == 31
        assert envelope["empirical"]["verdict"]["decision"] in (
            "CertainlyDifferent",
            "ConsistentWithEqual",
        )
        ok = True
    finally:
        announce(10, "byte-identical result envelopes", ok)
