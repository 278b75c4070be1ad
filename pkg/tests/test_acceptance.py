"""
Acceptance criteria. Each test prints one ``[PASS]``/``[FAIL]`` line; the
lines are repeated in the pytest terminal summary.

    pytest tests/test_acceptance.py -v
"""

import itertools
import math
import random
import time

import numpy as np
import pytest

from bornwalk.cli import FIGURES, ExperimentConfig, run
from bornwalk.ensemble import classify_cells, mean_over_rotations, rotations
from bornwalk.equivalence import (
    NormalizedTransition,
    coin_probabilities,
    interpolating_wavefunction,
    normalized_from_hamiltonian,
    power_closed_form,
    transition_from_hamiltonian,
)
from bornwalk.paths import ChannelMatrix, born_number, enumerate_paths, signal_from_counts
from bornwalk.process import (
    InitialState,
    TransitionMatrix,
    born_probability,
    classical_probability,
    markov_propagate,
    propagate_n,
    propagate_step,
)
from bornwalk.schrodinger import Hamiltonian, evolve, period, probabilities, rk4_evolve

RESULTS = []


def report(label, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_ac1_half_period_sampling():
    start = time.perf_counter()
    H = Hamiltonian(0.0, 1.56, 1.255, hbar=1.0)
    c1 = 0.825
    c = InitialState(c1, math.sqrt(1 - c1**2))
    K = transition_from_hamiltonian(H, 1.0)
    tau = math.pi * H.hbar / (2 * math.hypot(H.beta, H.delta))
    worst = 0.0
    a = propagate_n(K, c, 0)
    for n in range(41):
        worst = max(worst, abs(born_probability(a)[0] - probabilities(H, c, n * tau)[0]))
        a = propagate_step(K, a)
    elapsed = time.perf_counter() - start
    report(
        "AC1 half-period sampling",
        worst <= 1e-9 and elapsed < 1.0,
        f"max |P1_QSP - P1_QM| = {worst:.2e} (tol 1e-9), {elapsed:.3f}s (< 1s)",
    )


def test_ac2_oracle_equivalence():
    start = time.perf_counter()
    checked = 0
    failures = []
    for ks in itertools.product(range(-2, 3), repeat=4):
        C = ChannelMatrix.from_signed(*ks)
        K = TransitionMatrix(*ks)
        for c in ((1, 0), (0, 1)):
            a = propagate_n(K, c, 0)
            for n in range(9):
                for target in (1, 2):
                    p = enumerate_paths(C, c, n, target)
                    signal = a.as_tuple()[target - 1]
                    if signal_from_counts(p) != signal or born_number(p) != signal**2:
                        failures.append((ks, c, n, target))
                    checked += 1
                a = propagate_step(K, a)
    elapsed = time.perf_counter() - start
    report(
        "AC2 oracle equivalence",
        not failures and checked == 625 * 2 * 9 * 2 and elapsed < 30.0,
        f"{checked} observations, {len(failures)} mismatches (exact), {elapsed:.2f}s (< 30s)",
    )


def test_ac3_born_ensemble():
    start = time.perf_counter()
    problems = []
    for ap, am in itertools.product(range(7), repeat=2):
        if ap + am == 0:
            continue
        b = (ap - am) ** 2
        stack = np.stack([E.entries for E in rotations(ap, am)])
        if any(int(M.sum()) != b for M in stack):
            problems.append((ap, am, "rotation sum"))
        mean = stack.mean(axis=0)
        if not np.all((mean == 0) | (mean == 1)) or int(mean.sum()) != b:
            problems.append((ap, am, "mean values"))
        side, lo = abs(ap - am), min(ap, am)
        block = np.zeros_like(mean)
        block[lo:lo + side, lo:lo + side] = 1
        if not np.array_equal(mean, block):
            problems.append((ap, am, "central block"))
        ens = mean_over_rotations(ap, am)
        invariant, alternating = classify_cells(ap, am)
        if ens.born_count != b or invariant != b:
            problems.append((ap, am, "counts"))
        positives = (stack == 1).sum(axis=0)
        if not np.all((positives == 4) | (positives == 2)) or alternating != int((positives == 2).sum()):
            problems.append((ap, am, "cell types"))
    elapsed = time.perf_counter() - start
    report(
        "AC3 Born ensemble",
        not problems and elapsed < 1.0,
        f"48 (a+, a-) pairs, problems={problems[:3]}, {elapsed:.3f}s (< 1s)",
    )


def test_ac4_unitary_normalization():
    rng = random.Random(4)
    worst_norm = worst_pow = 0.0
    for _ in range(5):
        ang, phi = rng.uniform(0, 2 * math.pi), rng.uniform(0, 2 * math.pi)
        N = NormalizedTransition(math.cos(ang), math.sin(ang))
        c = InitialState(math.cos(phi), math.sin(phi))
        K = N.matrix()
        a = propagate_n(K, c, 0)
        M = np.eye(2)
        for n in range(1001):
            worst_norm = max(worst_norm, abs(a.a1**2 + a.a2**2 - 1))
            worst_pow = max(worst_pow, float(np.abs(power_closed_form(N, n) - M).max()))
            a = propagate_step(K, a)
            M = M @ N.to_array()
    report(
        "AC4 unitary normalization",
        worst_norm <= 1e-12 and worst_pow <= 1e-12,
        f"max |p1+p2-1| = {worst_norm:.2e}, max |closed form - product| = {worst_pow:.2e} (tol 1e-12)",
    )


def test_ac5_markov_reduction():
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(50):
        x, y, p = rng.random(3)
        K = TransitionMatrix(float(x), float(y), float(1 - x), float(1 - y))
        P0 = (float(p), float(1 - p))
        a = propagate_n(K, P0, 0)
        for n in range(65):
            lhs = classical_probability(a)
            rhs = markov_propagate(K, P0, n)
            worst = max(worst, abs(lhs[0] - rhs[0]), abs(lhs[1] - rhs[1]))
            a = propagate_step(K, a)
    report("AC5 Markov reduction", worst <= 1e-12, f"max deviation {worst:.2e} (tol 1e-12)")


def test_ac6_interpolating_wavefunction():
    rng = random.Random(6)
    worst_norm = worst_step = worst_psi = 0.0
    for _ in range(5):
        H = Hamiltonian(0.0, rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0.5, 2))
        c = InitialState(rng.uniform(-1, 1), rng.uniform(-1, 1)).normalized()
        N = normalized_from_hamiltonian(H)
        tau = period(H) / 2
        for t in np.linspace(0, 8 * tau, 1000):
            psi = interpolating_wavefunction(N, c, t, tau)
            worst_norm = max(worst_norm, abs(psi.norm_squared - 1))
            ref = evolve(H, c, t)
            worst_psi = max(worst_psi, abs(psi.psi1 - ref.psi1), abs(psi.psi2 - ref.psi2))
        a = propagate_n(N.matrix(), c, 0)
        for n in range(17):
            psi = interpolating_wavefunction(N, c, n * tau, tau)
            q = born_probability(a)
            worst_step = max(worst_step, *(abs(x - y) for x, y in zip(psi.probabilities, q)))
            a = propagate_step(N.matrix(), a)
    report(
        "AC6 interpolating wave function",
        worst_norm <= 1e-12 and worst_step <= 1e-9 and worst_psi <= 1e-9,
        f"norm dev {worst_norm:.2e} (1e-12), step dev {worst_step:.2e} (1e-9), "
        f"psi vs closed form {worst_psi:.2e} (1e-9)",
    )


def test_ac7_fair_coin():
    worst = 0.0
    for phi in np.linspace(0, 4 * math.pi, 720):
        heads, tails = coin_probabilities(phi)
        # half-angle identities as the independent route
        worst = max(worst, abs(heads - (1 + math.cos(phi)) / 2), abs(tails - (1 - math.cos(phi)) / 2))
    alternating = True
    for L in (0.1, 0.5, 1.0, 2.0, 7.5):
        K = TransitionMatrix(0, L, L, 0)
        a = propagate_n(K, (1, 0), 0)
        for n in range(33):
            want = (1.0, 0.0) if n % 2 == 0 else (0.0, 1.0)
            alternating &= classical_probability(a) == want
            a = propagate_step(K, a)
    report(
        "AC7 fair coin",
        worst <= 1e-12 and alternating,
        f"max coin deviation {worst:.2e} (tol 1e-12), classical alternation exact: {alternating}",
    )


def _p1_sequence(figure, **override):
    mode, params = FIGURES[figure]
    table = run(ExperimentConfig(mode, {**params, **override}))
    return [row[3] for row in table.rows]


def test_ac8_dynamics_regimes():
    a = _p1_sequence("fig3a")
    ok_a = all(p == a[1] for p in a[1:])

    b = _p1_sequence("fig3b")
    db = np.diff(b[1:])
    ok_b = bool(np.all(db <= 0) or np.all(db >= 0))

    cseq = _p1_sequence("fig3c")
    dc = np.diff(cseq)
    ok_c = bool(np.all(dc[:-1] * dc[1:] < 0) and np.all(np.abs(dc[1:]) < np.abs(dc[:-1])))

    d1 = _p1_sequence("fig3d")
    d2 = _p1_sequence("fig3d", k12=3.0, k21=0.25)
    mode, params = FIGURES["fig3d"]
    c1, c2 = params["c1"], params["c2"]
    ok_d = d1 == d2 and set(d1) == {c1 / (c1 + c2), c2 / (c1 + c2)}
    ok_d &= all(d1[n] != d1[n + 1] for n in range(len(d1) - 1))

    report(
        "AC8 dynamics regimes",
        ok_a and ok_b and ok_c and ok_d,
        f"3a immediate={ok_a}, 3b monotone={ok_b}, 3c damped={ok_c}, 3d sustained={ok_d}",
    )


def test_ac9_closed_form_vs_integrator():
    rng = random.Random(9)
    worst = worst_alpha = 0.0
    for _ in range(20):
        beta, delta = rng.uniform(-2, 2), rng.uniform(-2, 2)
        c = InitialState(rng.uniform(-1, 1), rng.uniform(-1, 1))
        H = Hamiltonian(rng.uniform(-2, 2), beta, delta)
        T = period(H)
        for t, x1, x2 in rk4_evolve(H, c, 4 * T, T / 2000):
            p = probabilities(H, c, t)
            worst = max(worst, abs(p[0] - abs(x1) ** 2), abs(p[1] - abs(x2) ** 2))
        for t in np.linspace(0, 4 * T, 200):
            ref = evolve(Hamiltonian(0.0, beta, delta), c, t).probabilities
            for alpha in (-2.0, 3.0):
                got = evolve(Hamiltonian(alpha, beta, delta), c, t).probabilities
                worst_alpha = max(worst_alpha, abs(got[0] - ref[0]), abs(got[1] - ref[1]))
    report(
        "AC9 closed form vs RK4",
        worst <= 1e-8 and worst_alpha <= 1e-12,
        f"max |closed - RK4| = {worst:.2e} (tol 1e-8), alpha invariance {worst_alpha:.2e} (tol 1e-12)",
    )
