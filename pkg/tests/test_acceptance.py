"""Acceptance criteria, one test per criterion.

Each test prints a single `PASS criterion N: ...` line on success
(visible with `pytest -s`); a failure raises as usual.  Criteria 11 and
12 are the long optimizer runs (several minutes each).
"""

import csv
import json
import math
import time

import numpy as np
import pytest

from robinopt import cli, geometry, mfs, optim, theory
from robinopt.ball import (
    BallSpec,
    ball_spectrum,
    transition_alpha,
)
from robinopt.specfun import bessel_j_zero

DISK_R = 1 / math.sqrt(math.pi)  # unit-area disk
FAST = mfs.MfsConfig(np_per_component=(48,))


def ball_values(radius, alpha, count):
    out = []
    for e in ball_spectrum(BallSpec(2, radius), alpha, count):
        out.extend([e.lam] * e.multiplicity)
    return sorted(out)[:count]


def _read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_criterion_01_gamma0_and_alpha_scaling():
    t0 = time.time()
    res = transition_alpha(2, 3, 1.0)
    assert res.gamma0 == pytest.approx(1.97021, abs=1e-4)
    assert res.alpha_n / math.sqrt(3) == pytest.approx(8.37872, abs=1e-4)
    dt = time.time() - t0
    assert dt < 1.0
    print(
        f"PASS criterion 1: gamma0={res.gamma0:.6f}, "
        f"alpha_n/sqrt(n)={res.alpha_n / math.sqrt(3):.6f} ({dt:.2f}s)"
    )


def test_criterion_02_transition_table(tmp_path):
    t0 = time.time()
    rc = cli.main(["transition-table", "--n", "3..10", "--out", str(tmp_path)])
    assert rc == 0
    rows = _read_csv(tmp_path / "transition_table.csv")
    got = {int(r[0]): float(r[1]) for r in rows[1:]}
    expected = {
        3: 14.51236, 4: 16.75743, 5: 18.73537, 6: 20.52358,
        7: 22.16800, 8: 23.69859, 9: 25.13615, 10: 26.49583,
    }
    for n, val in expected.items():
        assert got[n] == pytest.approx(val, abs=1e-3)
    dt = time.time() - t0
    assert dt < 5.0
    print(f"PASS criterion 2: Table 1 alpha_3..alpha_10 within 1e-3 ({dt:.2f}s)")


def test_criterion_03_mfs_disk_default_config():
    t0 = time.time()
    dom = geometry.MultiDomain((geometry.disk(DISK_R),))
    worst1 = worst3 = 0.0
    for alpha in (1.0, 10.0):
        got = mfs.eigenvalues(dom, alpha, 3, mfs.MfsConfig()).values()
        exact = ball_values(DISK_R, alpha, 3)
        worst1 = max(worst1, abs(got[0] - exact[0]) / exact[0])
        worst3 = max(worst3, abs(got[2] - exact[2]) / exact[2])
    assert worst1 <= 1e-6
    assert worst3 <= 1e-5
    dt = time.time() - t0
    assert dt < 30.0
    print(
        f"PASS criterion 3: disk lambda_1 rel {worst1:.2e} (<=1e-6), "
        f"lambda_3 rel {worst3:.2e} (<=1e-5) ({dt:.1f}s)"
    )


def test_criterion_04_solver_scaling_invariance():
    t0 = time.time()
    shape = geometry.ShapeFourier(
        a0=0.6, a=(0.03, -0.02, 0.015, 0.025), b=(-0.02, 0.01, 0.02, -0.015)
    )
    lam = mfs.eigenvalues(geometry.MultiDomain((shape,)), 1.0, 1, FAST).values()[0]
    worst = 0.0
    for t in (0.5, 2.0):
        lam_t = mfs.eigenvalues(
            geometry.MultiDomain((shape.scaled(t),)), 1.0 / t, 1, FAST
        ).values()[0]
        worst = max(worst, abs(t * t * lam_t - lam) / lam)
    assert worst <= 1e-5
    dt = time.time() - t0
    assert dt < 30.0
    print(f"PASS criterion 4: scaling invariance rel {worst:.2e} (<=1e-5) ({dt:.1f}s)")


def test_criterion_05_neumann_slope():
    t0 = time.time()
    shapes = [
        geometry.disk(DISK_R),
        geometry.ShapeFourier(a0=0.55, a=(0.05, -0.03), b=(0.04, 0.02)),
    ]
    worst = 0.0
    for s in shapes:
        dom = geometry.MultiDomain((s,))
        lam = mfs.eigenvalues(dom, 1e-3, 1, FAST).values()[0]
        slope = lam / 1e-3  # lambda_1 -> 0 as alpha -> 0+
        target = geometry.perimeter(s) / geometry.area(s)
        worst = max(worst, abs(slope - target) / target)
    assert worst <= 0.02
    dt = time.time() - t0
    assert dt < 30.0
    print(f"PASS criterion 5: Neumann slope rel err {worst:.2e} (<=2e-2) ({dt:.1f}s)")


def test_criterion_06_dirichlet_two_ball_fraction():
    t0 = time.time()
    f, _ = theory.optimal_two_ball_split((3, 1), 2, 1.0, 1e6)
    j01, j11 = bessel_j_zero(0, 1), bessel_j_zero(1, 1)
    target = j11**2 / (j01**2 + j11**2)
    assert f == pytest.approx(0.7174, abs=1e-3)
    assert f == pytest.approx(target, abs=1e-3)
    dt = time.time() - t0
    assert dt < 5.0
    print(f"PASS criterion 6: two-ball fraction {f:.6f} vs {target:.6f} ({dt:.2f}s)")


def test_criterion_07_fig_est_negativity():
    t0 = time.time()
    worst = -math.inf
    for n in range(1, 7):
        for alpha in (0.5, 1, 2, 5, 10, 20, 50, 100):
            q = theory.gap_verification_quantity(n, alpha)
            worst = max(worst, q)
            assert q <= 0.0
    dt = time.time() - t0
    assert dt < 10.0
    print(f"PASS criterion 7: fig-est quantity max {worst:.3e} (<=0) ({dt:.1f}s)")


def test_criterion_08_remark_gapbound_ii():
    t0 = time.time()
    for alpha in np.geomspace(0.1, 1000.0, 20):
        assert theory.remark_gap_inequality_check(float(alpha))
    dt = time.time() - t0
    assert dt < 5.0
    print(f"PASS criterion 8: lambda_2^* < 2 lambda_1^* on [0.1, 1000] ({dt:.2f}s)")


def test_criterion_09_n_ball_bound():
    t0 = time.time()
    for N in (2, 3):
        for n in (1, 5, 25):
            for alpha in (0.5, 5.0, 50.0):
                rep = theory.n_ball_bound(n, N, 1.0, alpha)
                assert rep.satisfied
    dt = time.time() - t0
    assert dt < 5.0
    print(f"PASS criterion 9: th:nballs satisfied for all 18 cases ({dt:.2f}s)")


def test_criterion_10_wolf_keller_consistency():
    t0 = time.time()
    for N in (2, 3):
        wk = theory.wolf_keller_combine(2, N, 1.0, 5.0)
        assert wk.k == 1
        assert wk.xi1 == pytest.approx(2 ** (1 / N), abs=1e-9)
        assert wk.xi2 == pytest.approx(2 ** (1 / N), abs=1e-9)
    wk3 = theory.wolf_keller_combine(3, 2, 1.0, 5.0)
    b3 = theory.ball_kth_eigenvalue(2, 1 / 3, 5.0, 1)
    assert wk3.value == pytest.approx(b3, rel=1e-6)
    a3 = transition_alpha(2, 3, 1.0).alpha_n
    wk_tie = theory.wolf_keller_combine(3, 2, 1.0, a3)
    b1 = theory.ball_kth_eigenvalue(2, 1.0, a3, 3)
    assert wk_tie.value == pytest.approx(b1, rel=1e-6)
    dt = time.time() - t0
    assert dt < 10.0
    print(f"PASS criterion 10: WK n=2 xi=2^(1/N), n=3 crossing values ({dt:.1f}s)")


def test_criterion_11_optimizer_sanity():
    t0 = time.time()
    # perturbed disk (M=4, perturbation scale 0.1), n=1, alpha=10
    start = geometry.MultiDomain(
        (
            geometry.ShapeFourier(
                a0=0.57, a=(0.05, -0.04, 0.03, 0.06), b=(-0.06, 0.03, 0.05, -0.04)
            ),
        )
    )
    cfg = optim.OptimConfig(max_iters=200, stall_tol=1e-5)
    final, trace = optim.minimize(start, 10.0, 1, cfg, FAST, volume=1.0)
    ball = theory.ball_kth_eigenvalue(2, 1.0, 10.0, 1)
    lam = trace.iterates[-1].lambda_values[0]
    rel = abs(lam - ball) / ball
    assert len(trace.iterates) - 1 <= 200
    assert rel <= 0.005

    # two unequal disks, n=2, alpha=1 -> equal areas within 1%
    seed = geometry.seeded_disks([0.35, 0.65])
    mcfg2 = mfs.MfsConfig(np_per_component=(48, 48))
    final2, _ = optim.minimize(
        seed, 1.0, 2, optim.OptimConfig(max_iters=60, stall_tol=1e-5),
        mcfg2, volume=1.0,
    )
    areas = sorted(geometry.area(c) for c in final2.components)
    assert areas[0] == pytest.approx(0.5, abs=0.005)
    assert areas[1] == pytest.approx(0.5, abs=0.005)
    dt = time.time() - t0
    assert dt < 1200.0
    print(
        f"PASS criterion 11: perturbed disk rel {rel:.2e} (<=5e-3), "
        f"two-disk areas {areas[0]:.4f}/{areas[1]:.4f} ({dt:.0f}s)"
    )


def test_criterion_12_topology_crossings(tmp_path):
    t0 = time.time()
    out3 = tmp_path / "n3"
    rc = cli.main(
        ["sweep-alpha", "--n", "3", "--alpha-grid", "10,14,15,20",
         "--topologies", "1,3", "--np", "48", "--max-iters", "1",
         "--out", str(out3)]
    )
    assert rc == 0
    rows = {float(r[0]): int(r[1]) for r in _read_csv(out3 / "sweep_alpha.csv")[1:]}
    assert rows[10.0] == 3 and rows[14.0] == 3
    assert rows[15.0] == 1 and rows[20.0] == 1

    out4 = tmp_path / "n4"
    rc = cli.main(
        ["sweep-alpha", "--n", "4", "--alpha-grid", "10,16,17.5,25",
         "--topologies", "1,2,4", "--np", "48", "--max-iters", "1",
         "--out", str(out4)]
    )
    assert rc == 0
    rows4 = {float(r[0]): int(r[1]) for r in _read_csv(out4 / "sweep_alpha.csv")[1:]}
    assert rows4[10.0] == 4 and rows4[16.0] == 4
    assert rows4[17.5] == 2 and rows4[25.0] == 2
    dt = time.time() - t0
    assert dt < 3600.0
    print(
        f"PASS criterion 12: n=3 crossing at alpha_3, n=4 two-ball branch "
        f"above alpha_4 ({dt:.0f}s)"
    )


def test_criterion_13_property_suites():
    t0 = time.time()
    # Bessel recurrence against scipy plus interlacing
    from robinopt import specfun

    for nu in (1.0, 4.5):
        for x in (0.7, 11.0):
            lhs = specfun.bessel_j(nu - 1, x) + specfun.bessel_j(nu + 1, x)
            assert abs(lhs - 2 * nu / x * specfun.bessel_j(nu, x)) <= 1e-9
    assert (
        bessel_j_zero(0, 1) < bessel_j_zero(1, 1) < bessel_j_zero(0, 2)
    )
    # area closed form vs quadrature
    s = geometry.ShapeFourier(a0=1.0, a=(0.1, -0.05), b=(0.03, 0.02))
    th = np.linspace(0.0, 2 * math.pi, 1_000_000, endpoint=False)
    r = s.radius(th)
    quad = float(np.sum(0.5 * r * r) * (2 * math.pi / len(th)))
    assert geometry.area(s) == pytest.approx(quad, rel=1e-12)
    # WK scale identity and astscaling at 1e-9
    t = 1.7
    assert t**2 * theory.catalog_lambda_star(3, 2, 1.0, 5.0 / t) == pytest.approx(
        theory.catalog_lambda_star(3, 2, t**-2, 5.0), rel=1e-9
    )
    wk1 = theory.wolf_keller_combine(3, 2, 1.0, 5.0 / t)
    wk2 = theory.wolf_keller_combine(3, 2, t**-2, 5.0)
    assert t**2 * wk1.value == pytest.approx(wk2.value, rel=1e-9)
    # descent monotonicity on a short run
    start = geometry.MultiDomain(
        (geometry.ShapeFourier(a0=0.57, a=(0.06,), b=(-0.05,)),)
    )
    _, trace = optim.minimize(
        start, 10.0, 1, optim.OptimConfig(max_iters=4, stall_tol=1e-3),
        FAST, volume=1.0,
    )
    objs = [it.objective for it in trace.iterates]
    assert all(b <= a + 1e-12 for a, b in zip(objs, objs[1:]))
    dt = time.time() - t0
    assert dt < 600.0
    print(f"PASS criterion 13: property suite spot checks ({dt:.0f}s)")
