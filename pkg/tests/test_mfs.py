import math

import numpy as np
import pytest

from robinopt import geometry, mfs
from robinopt.ball import BallSpec, ball_spectrum

FAST = mfs.MfsConfig(np_per_component=(48,))


def unit_disk_domain():
    return geometry.MultiDomain((geometry.disk(1 / math.sqrt(math.pi)),))


def ball_values(radius, alpha, count):
    out = []
    for e in ball_spectrum(BallSpec(2, radius), alpha, count):
        out.extend([e.lam] * e.multiplicity)
    return sorted(out)[:count]


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            mfs.MfsConfig(gamma=0.0)
        with pytest.raises(ValueError):
            mfs.MfsConfig(lambda_min=2.0, lambda_max=1.0)
        with pytest.raises(ValueError):
            mfs.MfsConfig(lambda_min=0.0, lambda_max=10.0, scan_step=5.0)

    def test_resolve_defaults(self):
        dom = unit_disk_domain()
        cfg = mfs.resolve_config(dom, 3, mfs.MfsConfig())
        assert cfg.np_per_component == (80,)
        assert cfg.lambda_max > 0 and cfg.lambda_min < cfg.lambda_max


class TestDiskAccuracy:
    def test_disk_fast_config(self):
        dom = unit_disk_domain()
        exact = ball_values(1 / math.sqrt(math.pi), 10.0, 3)
        got = mfs.eigenvalues(dom, 10.0, 3, FAST).values()
        for g, e in zip(got, exact):
            assert g == pytest.approx(e, rel=1e-6)

    def test_validate_against_ball_helper(self):
        assert mfs.validate_against_ball(0.6, 5.0, 1, FAST) < 1e-7

    def test_small_alpha_neumann_regime(self):
        dom = unit_disk_domain()
        alpha = 1e-3
        got = mfs.eigenvalues(dom, alpha, 1, FAST).values()[0]
        exact = ball_values(1 / math.sqrt(math.pi), alpha, 1)[0]
        # the 48-point discretization limits accuracy in this regime;
        # the default 80-point config reaches ~2e-9
        assert got == pytest.approx(exact, rel=2e-4)


class TestScalingAndShapes:
    def test_scaling_covariance(self):
        # t^2 lambda_1(t Omega, alpha/t) = lambda_1(Omega, alpha)
        shape = geometry.ShapeFourier(
            a0=0.6, a=(0.03, -0.02, 0.015, 0.025), b=(-0.02, 0.01, 0.02, -0.015)
        )
        dom = geometry.MultiDomain((shape,))
        lam = mfs.eigenvalues(dom, 1.0, 1, FAST).values()[0]
        t = 2.0
        dom_t = geometry.MultiDomain((shape.scaled(t),))
        lam_t = mfs.eigenvalues(dom_t, 1.0 / t, 1, FAST).values()[0]
        assert t * t * lam_t == pytest.approx(lam, rel=1e-8)

    def test_perturbed_shape_monotone_ordering(self):
        shape = geometry.ShapeFourier(
            a0=0.57, a=(0.05, -0.04, 0.03, 0.06), b=(-0.06, 0.03, 0.05, -0.04)
        )
        dom = geometry.normalize_area(geometry.MultiDomain((shape,)), 1.0)
        vals = mfs.eigenvalues(dom, 10.0, 2, FAST).values()
        assert len(vals) == 2 and vals[0] < vals[1]
        # Faber-Krahn: above the unit-area ball value
        assert vals[0] > ball_values(1 / math.sqrt(math.pi), 10.0, 1)[0]


class TestMultiComponent:
    def test_equal_disks_multiplicity(self):
        dom = geometry.seeded_disks([0.5, 0.5])
        cfg = mfs.MfsConfig(np_per_component=(48, 48))
        res = mfs.eigenvalues(dom, 1.0, 2, cfg)
        v = res.values()
        assert v[0] == pytest.approx(v[1], rel=1e-9)
        exact = ball_values(math.sqrt(0.5 / math.pi), 1.0, 1)[0]
        assert v[0] == pytest.approx(exact, rel=1e-6)

    def test_unequal_disks_hints(self):
        dom = geometry.seeded_disks([0.3, 0.7])
        cfg = mfs.MfsConfig(np_per_component=(48, 48))
        res = mfs.eigenvalues(dom, 1.0, 2, cfg)
        exact = sorted(
            ball_values(math.sqrt(0.3 / math.pi), 1.0, 1)
            + ball_values(math.sqrt(0.7 / math.pi), 1.0, 1)
        )
        for e, got in zip(exact, res.values()):
            assert got == pytest.approx(e, rel=1e-6)
        # lowest mode lives on the big (second) component
        assert res.eigenvalues[0].component_hint == 1
        assert res.eigenvalues[1].component_hint == 0


class TestAssembly:
    def test_assemble_shape_and_kernel(self):
        dom = unit_disk_domain()
        A = mfs.assemble(dom, alpha=1.0, lam=3.0, cfg=FAST)
        assert A.shape == (48, 48)
        assert np.iscomplexobj(A)
        sigma = mfs.singularity_measure(A)
        assert sigma > 0

    def test_not_enough_eigenvalues(self):
        dom = unit_disk_domain()
        cfg = mfs.MfsConfig(
            np_per_component=(48,), lambda_min=1.0, lambda_max=3.0
        )
        with pytest.raises(mfs.NotEnoughEigenvaluesError) as ei:
            mfs.eigenvalues(dom, 10.0, 3, cfg)
        assert ei.value.partial is not None
        assert ei.value.partial.truncated
