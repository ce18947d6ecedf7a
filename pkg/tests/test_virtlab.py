import numpy as np
import pytest

from gelflow.errors import InvalidInputError
from gelflow.process import DEFAULT_BOUNDS, DesignPoint
from gelflow.virtlab import VirtualLabConfig, conversion_at, radius_at, simulate

NOISELESS = VirtualLabConfig(sigma_w=0.0, sigma_r=0.0)


class TestSimulate:
    def test_long_residence_time_converts_fully(self):
        x = DesignPoint(0.1, 2.0, 0.28, 80.0)  # minimum total flow, hottest
        m = simulate(x, NOISELESS)
        assert conversion_at(x, NOISELESS) > 0.99
        assert m.w_nipam_f == pytest.approx(0.0, abs=1e-4)

    def test_baseline_radius(self):
        x = DesignPoint(0.5, 5.0, NOISELESS.c_ref, 65.0)
        assert radius_at(x, NOISELESS) == pytest.approx(NOISELESS.radius_base)
        assert simulate(x, NOISELESS).r_h == pytest.approx(NOISELESS.radius_base)

    def test_conversion_decreases_with_monomer_flow(self):
        prev = None
        for f_m in np.linspace(2, 18, 9):
            c = conversion_at(DesignPoint(0.5, float(f_m), 0.28, 70.0), NOISELESS)
            if prev is not None:
                assert c < prev
            prev = c

    def test_monotone_in_temp_and_surfactant(self):
        h = 1e-4
        for temp in np.linspace(60.5, 79.5, 8):
            up = conversion_at(DesignPoint(0.5, 8.0, 0.28, temp + h), NOISELESS)
            dn = conversion_at(DesignPoint(0.5, 8.0, 0.28, temp - h), NOISELESS)
            assert up > dn
        for c in np.linspace(0.15, 0.40, 8):
            up = radius_at(DesignPoint(0.5, 8.0, float(c + 1e-5), 70.0), NOISELESS)
            dn = radius_at(DesignPoint(0.5, 8.0, float(c - 1e-5), 70.0), NOISELESS)
            assert up < dn

    def test_conversion_and_radius_ranges(self):
        rng = np.random.default_rng(0)
        lo, hi = DEFAULT_BOUNDS.lower_array, DEFAULT_BOUNDS.upper_array
        for _ in range(200):
            x = DesignPoint.from_array(lo + rng.random(4) * (hi - lo))
            assert 0.0 <= conversion_at(x, NOISELESS) <= 1.0
            assert radius_at(x, NOISELESS) > 0

    def test_deterministic_per_point_and_seed(self):
        cfg = VirtualLabConfig(seed=42)
        x = DesignPoint(0.4, 7.0, 0.3, 68.0)
        assert simulate(x, cfg) == simulate(x, cfg)
        assert simulate(x, cfg) != simulate(x, VirtualLabConfig(seed=43))

    def test_out_of_bounds_rejected(self):
        with pytest.raises(InvalidInputError):
            simulate(DesignPoint(0.0, 7.0, 0.3, 68.0), NOISELESS)

    def test_exclusions_injected_at_configured_rate(self):
        cfg = VirtualLabConfig(exclusion_probability=0.5, seed=1)
        rng = np.random.default_rng(2)
        lo, hi = DEFAULT_BOUNDS.lower_array, DEFAULT_BOUNDS.upper_array
        flags = [
            simulate(DesignPoint.from_array(lo + rng.random(4) * (hi - lo)), cfg).is_excluded
            for _ in range(200)
        ]
        assert 0.3 < np.mean(flags) < 0.7

    def test_invalid_config(self):
        with pytest.raises(InvalidInputError):
            VirtualLabConfig(reactor_volume=0.0)
        with pytest.raises(InvalidInputError):
            VirtualLabConfig(sigma_r=-1.0)
