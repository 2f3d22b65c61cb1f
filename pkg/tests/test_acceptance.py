"""Acceptance gate: one test per criterion, each printing a pass/fail line
with its runtime (visible with ``pytest -s tests/test_acceptance.py``)."""

import io
import os
import subprocess
import sys
from contextlib import contextmanager
from pathlib import Path
from time import perf_counter

import numpy as np

from qexpect.cli import main

from qexpect.hilbert import Hamiltonian, StateVector, evolve, make_observable, projector_for
from qexpect.market import AgentPopulation, run_ensemble, run_sequential_ensemble
from qexpect.measurement import (
    born_distribution,
    evolved_born,
    interference_term,
    sequential_joint,
    order_effect,
    transition_probability,
    uncertainty_product,
)

import oracles

ROOT = Path(__file__).resolve().parent.parent
CONFIGS = ROOT / "configs"
GOLDEN = ROOT / "tests" / "golden"

PLUS = StateVector([1, 0])
PRICE = make_observable([[1, 0], [0, 1]], [1.0, -1.0])
TILTED = make_observable(
    [[np.cos(np.pi / 3), np.sin(np.pi / 3)], [-np.sin(np.pi / 3), np.cos(np.pi / 3)]],
    [1.0, -1.0],
)


@contextmanager
def criterion(number: int, description: str, budget_seconds: float):
    start = perf_counter()
    try:
        yield
    except BaseException:
        print(f"\ncriterion {number} ({description}): FAIL")
        raise
    elapsed = perf_counter() - start
    print(
        f"\ncriterion {number} ({description}): PASS"
        f" [{elapsed:.2f}s of {budget_seconds:.0f}s budget]"
    )
    assert elapsed < budget_seconds, f"criterion {number} exceeded its runtime budget"


def random_observable(rng, d):
    basis = oracles.random_unitary(rng, d)
    return make_observable(basis.T, rng.normal(size=d))


def test_criterion_1_born_normalization():
    with criterion(1, "Born normalization over random draws", 5.0):
        rng = np.random.default_rng(1001)
        for _ in range(10_000):
            d = int(rng.integers(2, 5))
            psi = StateVector(oracles.random_state_array(rng, d))
            dist = born_distribution(psi, random_observable(rng, d))
            assert abs(sum(p for _, p in dist.entries) - 1.0) < 1e-10


def test_criterion_2_interference_identity_and_classical_limit():
    with criterion(2, "interference identity and classical limit", 5.0):
        # worked two-basis instance against the chained-projector oracle
        report = interference_term(PLUS, projector_for(PRICE, 1.0), TILTED)
        tilt = np.pi / 3
        partition_projs = [
            oracles.rank1_projector(np.array([np.cos(tilt), np.sin(tilt)])),
            oracles.rank1_projector(np.array([-np.sin(tilt), np.cos(tilt)])),
        ]
        direct, classical, diff = oracles.interference(
            np.array([1.0, 0.0]), np.diag([1.0, 0.0]), partition_projs
        )
        assert abs(report.interference - diff) < 1e-12
        assert abs(report.interference - 0.375) < 1e-12
        assert abs(report.p_direct - direct) < 1e-12
        assert abs(report.p_classical_sum - classical) < 1e-12

        # commuting target and partition leave no interference
        rng = np.random.default_rng(1002)
        for _ in range(1_000):
            d = int(rng.integers(2, 5))
            basis = oracles.random_unitary(rng, d)
            partition = make_observable(basis.T, np.arange(d, dtype=float))
            target_obs = make_observable(basis.T, rng.normal(size=d))
            psi = StateVector(oracles.random_state_array(rng, d))
            target = projector_for(target_obs, target_obs.outcomes[0])
            assert abs(interference_term(psi, target, partition).interference) < 1e-10


def test_criterion_3_order_effects():
    with criterion(3, "sequential order effects", 1.0):
        table_ij = sequential_joint(PLUS, PRICE, TILTED)
        table_ji = sequential_joint(PLUS, TILTED, PRICE)
        assert abs(table_ij.probability(1.0, 1.0) - 0.25) < 1e-12
        assert abs(table_ji.probability(1.0, 1.0) - 0.0625) < 1e-12

        rng = np.random.default_rng(1003)
        for _ in range(200):
            d = int(rng.integers(2, 5))
            basis = oracles.random_unitary(rng, d)
            a = make_observable(basis.T, rng.normal(size=d))
            b = make_observable(basis.T, rng.normal(size=d))
            psi = StateVector(oracles.random_state_array(rng, d))
            assert order_effect(psi, a, b) < 1e-10


def test_criterion_4_hamiltonian_dynamics():
    with criterion(4, "multi-period dynamics vs closed form and series oracle", 5.0):
        omega = 1.3
        ham = Hamiltonian(omega * np.array([[0.0, 1.0], [1.0, 0.0]]))
        for t in np.linspace(0.0, 3 * np.pi, 100):
            dist = evolved_born(PLUS, ham, float(t), PRICE)
            assert abs(dist.probability(1.0) - np.cos(omega * t) ** 2) < 1e-9

        rng = np.random.default_rng(1004)
        for d in (2, 3, 4, 5, 6):
            for _ in range(20):
                herm = oracles.random_hermitian(rng, d)
                psi_arr = oracles.random_state_array(rng, d)
                t = float(rng.uniform(-2.0, 2.0))
                series = oracles.taylor_expm(-1j * herm * t) @ psi_arr
                spectral = evolve(StateVector(psi_arr), Hamiltonian(herm), t)
                assert np.abs(spectral.amplitudes - series).max() < 1e-8


def test_criterion_5_frequency_interpretation():
    with criterion(5, "ensemble frequencies reproduce Born and order effect", 30.0):
        states = [
            StateVector([1 / np.sqrt(2), 1 / np.sqrt(2)]),
            StateVector([np.cos(np.pi / 8), np.sin(np.pi / 8)]),
            StateVector([np.cos(np.pi / 3), np.sin(np.pi / 3)]),
        ]
        for psi in states:
            population = AgentPopulation(100_000, psi, "quantum")
            empirical = run_ensemble(population, PRICE, 42)
            analytic = born_distribution(psi, PRICE)
            for outcome, p in analytic.entries:
                assert abs(empirical.probability(outcome) - p) < 0.01

        population = AgentPopulation(100_000, PLUS, "quantum")
        t_ij = run_sequential_ensemble(population, PRICE, TILTED, "ij", 42)
        t_ji = run_sequential_ensemble(population, PRICE, TILTED, "ji", 42)
        stat = max(abs(p - t_ji.probability(b, a)) for a, b, p in t_ij.rows)
        assert abs(stat - 0.1875) < 0.01
        assert stat > 0.15


def test_criterion_6_robertson_inequality():
    with criterion(6, "Robertson uncertainty bound never violated", 5.0):
        rng = np.random.default_rng(1006)
        for _ in range(10_000):
            d = int(rng.integers(2, 5))
            psi = StateVector(oracles.random_state_array(rng, d))
            product, bound = uncertainty_product(
                psi, random_observable(rng, d), random_observable(rng, d)
            )
            assert product + 1e-10 >= bound


def test_criterion_7_double_stochasticity():
    with criterion(7, "transition matrices are doubly stochastic", 2.0):
        rng = np.random.default_rng(1007)
        for _ in range(1_000):
            d = int(rng.integers(2, 5))
            first = oracles.random_unitary(rng, d)
            second = oracles.random_unitary(rng, d)
            table = np.abs(first.conj().T @ second) ** 2
            assert np.abs(table.sum(axis=0) - 1.0).max() < 1e-10
            assert np.abs(table.sum(axis=1) - 1.0).max() < 1e-10
            # spot-check one cell against the public operation
            cell = transition_probability(
                StateVector(first[:, 0]), StateVector(second[:, 0])
            )
            assert abs(cell - table[0, 0]) < 1e-12


def test_criterion_8_market_determinism():
    with criterion(8, "simulate-market byte-identical across runs and threads", 10.0):
        outputs = []
        for threads in ("1", "1", "4"):
            env = dict(os.environ)
            env["PYTHONPATH"] = str(ROOT / "src") + os.pathsep + env.get("PYTHONPATH", "")
            env["QEXPECT_THREADS"] = threads
            proc = subprocess.run(
                [
                    sys.executable,
                    "-m",
                    "qexpect.cli",
                    "simulate-market",
                    str(CONFIGS / "market.json"),
                    "--seed",
                    "42",
                ],
                capture_output=True,
                env=env,
                cwd=ROOT,
            )
            assert proc.returncode == 0, proc.stderr
            outputs.append(proc.stdout)
        assert outputs[0] == outputs[1] == outputs[2]


def test_criterion_9_golden_cli_suite():
    with criterion(9, "golden CLI outputs at 12 decimals", 2.0):
        cases = [
            (["born", str(CONFIGS / "basic.json")], "born_basic.txt"),
            (["interference", str(CONFIGS / "tilted.json")], "interference_tilted.txt"),
            (["order-effect", str(CONFIGS / "tilted.json")], "order_effect_tilted.txt"),
        ]
        for argv, golden in cases:
            out = io.StringIO()
            assert main(argv, out=out) == 0
            assert out.getvalue() == (GOLDEN / golden).read_text(encoding="utf-8")
