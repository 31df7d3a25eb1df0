import math

import numpy as np
import pytest

from fsopoint import forcing as fc
from fsopoint.errors import InvalidParameterError


class TestPropellerMean:
    def test_hover_lift(self):
        f = fc.propeller_force_mean(fc.PropellerParams(m_hap=0.7, hover=True))
        assert np.linalg.norm(f) == pytest.approx(6.867)
        assert f[fc.THRUST_AXIS] == pytest.approx(0.7 * 9.81)

    def test_no_hover_at_rest(self):
        f = fc.propeller_force_mean(fc.PropellerParams(hover=False))
        np.testing.assert_array_equal(f, np.zeros(3))

    def test_acceleration_minus_drag(self):
        p = fc.PropellerParams(m_hap=0.7, a_hap=(0, 2, 0), b_drag=0.01, v_hap=3, hover=False)
        # 0.7*2 - 0.01*9 by hand
        assert fc.propeller_force_mean(p)[1] == pytest.approx(1.31)

    @pytest.mark.parametrize(
        "kwargs",
        [dict(m_hap=0.0), dict(ripple_fraction=1.5), dict(ripple_fraction=-0.1), dict(blade_pass_hz=0.0)],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidParameterError):
            fc.PropellerParams(**kwargs)


class TestPropellerForcing:
    def test_zero_ripple_is_constant(self):
        f = fc.propeller_forcing(fc.PropellerParams(ripple_fraction=0.0))
        F = f.sample(np.linspace(0, 1, 101))
        assert np.all(F == F[0])

    def test_periodic(self):
        p = fc.PropellerParams(ripple_fraction=0.1, blade_pass_hz=100.0)
        f = fc.propeller_forcing(p)
        for t in (0.0, 0.00123, 0.4567):
            np.testing.assert_allclose(f(t), f(t + 1 / p.blade_pass_hz), atol=1e-12)

    def test_peak_to_peak(self):
        f = fc.propeller_forcing(fc.PropellerParams(ripple_fraction=0.05, blade_pass_hz=100.0))
        t = np.arange(400) / 40000.0  # 100 samples per period, one period captures the peaks
        thrust = f.sample(t)[:, fc.THRUST_AXIS]
        assert thrust.max() - thrust.min() == pytest.approx(0.1 * 6.867, rel=1e-6)

    def test_torque_rows(self):
        p = fc.PropellerParams(ripple_fraction=0.05, torque_arm_m=0.1)
        f = fc.propeller_forcing(p)
        t = 0.0025  # quarter period at 100 Hz
        F = f(t)
        ripple = F[fc.THRUST_AXIS] - fc.propeller_force_mean(p)[fc.THRUST_AXIS]
        np.testing.assert_allclose(F[3:], ripple * 0.1)
        assert f.seed is None


class TestWindSpeed:
    def test_no_gust(self):
        w = fc.WindParams(scenario="typical", turbulence_intensity=0.0)
        v = fc.wind_speed_series(w, np.linspace(0, 10, 50))
        np.testing.assert_allclose(np.linalg.norm(v, axis=1), 5.0)

    @pytest.mark.parametrize("axis", ["x", "y", "z"])
    def test_unidirectional_purity(self, axis):
        w = fc.WindParams(scenario=f"unidirectional-{axis}", seed=4)
        v = fc.wind_speed_series(w, np.linspace(0, 20, 2001))
        i = "xyz".index(axis)
        others = [j for j in range(3) if j != i]
        assert np.all(v[:, others] == 0.0)
        assert v[:, i].std() > 0

    def test_typical_mean_speed(self):
        w = fc.WindParams(scenario="typical", seed=1)
        v = fc.wind_speed_series(w, np.arange(0, 100, 0.01))
        assert np.linalg.norm(v, axis=1).mean() == pytest.approx(5.0, abs=0.5)

    def test_scenario_defaults(self):
        assert fc.WindParams(scenario="calm").speed < 1.0
        assert fc.WindParams(scenario="typical").speed == 5.0
        assert fc.WindParams(scenario="turbulent").speed == 30.0
        assert fc.WindParams(scenario="turbulent", mean_speed_mps=12.0).speed == 12.0

    def test_gust_statistics(self):
        # stationary std = intensity * mean speed, lag-one correlation exp(-2 pi fc h)
        w = fc.WindParams(scenario="unidirectional-x", mean_speed_mps=10.0, turbulence_intensity=0.3, gust_corner_hz=2.0, seed=9)
        h = w.gust_dt
        g = fc.GustProcess(3.0, 2.0, h, seed=9).sample(np.arange(200_000) * h)[:, 0]
        assert g.std() == pytest.approx(3.0, rel=0.1)
        r1 = np.corrcoef(g[:-1], g[1:])[0, 1]
        assert r1 == pytest.approx(math.exp(-2 * math.pi * 2.0 * h), abs=1e-3)

    def test_query_order_independent(self):
        t = np.linspace(0, 30, 777)
        a = fc.GustProcess(1.0, 2.0, 1e-3, seed=3)
        b = fc.GustProcess(1.0, 2.0, 1e-3, seed=3)
        late_first = b.sample(t[::-1])[::-1]
        np.testing.assert_array_equal(a.sample(t), late_first)

    @pytest.mark.parametrize(
        "kwargs",
        [dict(scenario="gale"), dict(rho_strat=0.0), dict(area_m2=-1.0), dict(mode="cubic"), dict(gust_corner_hz=0)],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidParameterError):
            fc.WindParams(**kwargs)


class TestWindForce:
    def test_as_given(self):
        w = fc.WindParams(area_m2=1.0, rho_strat=0.2)
        np.testing.assert_allclose(fc.wind_force(w, [5.0, 0, 0]), [1.0, 0, 0])

    def test_quadratic(self):
        w = fc.WindParams(area_m2=1.0, rho_strat=0.2, mode="quadratic")
        # 0.5 * 1 * 0.2 * 5 * 5
        np.testing.assert_allclose(fc.wind_force(w, [5.0, 0, 0]), [2.5, 0, 0])

    @pytest.mark.parametrize("mode", fc.WIND_MODES)
    def test_zero_velocity(self, mode):
        w = fc.WindParams(mode=mode)
        np.testing.assert_array_equal(fc.wind_force(w, np.zeros(3)), np.zeros(3))

    @pytest.mark.parametrize("mode,degree", [("as-given", 1), ("quadratic", 2)])
    @pytest.mark.parametrize("a", [0.5, 2.0, 7.5])
    def test_homogeneity(self, mode, degree, a):
        w = fc.WindParams(area_m2=(0.3, 0.7, 1.1), rho_strat=0.1, mode=mode)
        v = np.array([1.5, -2.0, 0.4])
        np.testing.assert_allclose(fc.wind_force(w, a * v), a**degree * fc.wind_force(w, v), rtol=1e-12)

    def test_per_axis_area(self):
        w = fc.WindParams(area_m2=(1.0, 2.0, 3.0), rho_strat=0.1)
        np.testing.assert_allclose(fc.wind_force(w, [1.0, 1.0, 1.0]), [0.1, 0.2, 0.3])

    def test_unknown_mode_rejected_at_call(self):
        w = fc.WindParams()
        object.__setattr__(w, "mode", "bogus")
        with pytest.raises(InvalidParameterError):
            fc.wind_force(w, [1.0, 0, 0])


class TestWindForcing:
    def test_seeded_reproducible(self):
        t = np.linspace(0, 10, 1001)
        a = fc.wind_forcing(fc.WindParams(seed=42)).sample(t)
        b = fc.wind_forcing(fc.WindParams(seed=42)).sample(t)
        assert a.tobytes() == b.tobytes()
        c = fc.wind_forcing(fc.WindParams(seed=43)).sample(t)
        assert not np.array_equal(a, c)

    def test_zero_area(self):
        F = fc.wind_forcing(fc.WindParams(area_m2=0.0, seed=1)).sample(np.linspace(0, 5, 100))
        assert not F.any()

    def test_torque_is_offset_cross_force(self):
        w = fc.WindParams(pressure_offset_m=(0.01, 0.05, -0.02), seed=2)
        F = fc.wind_forcing(w).sample(np.linspace(0, 1, 11))
        np.testing.assert_allclose(F[:, 3:], np.cross([0.01, 0.05, -0.02], F[:, :3]))

    def test_metadata_records_mode(self):
        assert fc.wind_forcing(fc.WindParams(mode="quadratic")).metadata["wind_mode"] == "quadratic"

    def test_calm_less_variable_than_turbulent(self):
        t = np.arange(0, 20, 0.01)
        for seed in range(5):
            calm = fc.wind_forcing(fc.WindParams(scenario="calm", seed=seed)).sample(t)[:, :3].std(axis=0)
            turb = fc.wind_forcing(fc.WindParams(scenario="turbulent", seed=seed)).sample(t)[:, :3].std(axis=0)
            assert np.all(calm < turb)

    @pytest.mark.parametrize("mode", fc.WIND_MODES)
    def test_scenario_force_ordering(self, mode):
        t = np.arange(0, 10, 0.01)
        means = []
        for scenario in ("calm", "typical", "turbulent"):
            per_seed = [
                np.linalg.norm(fc.wind_forcing(fc.WindParams(scenario=scenario, mode=mode, seed=s)).sample(t)[:, :3], axis=1).mean()
                for s in range(20)
            ]
            means.append(np.mean(per_seed))
        assert means[0] < means[1] < means[2]


class TestComposition:
    def test_sum_and_scale(self):
        a = fc.ConstantForcing(np.arange(6.0))
        b = fc.propeller_forcing(fc.PropellerParams())
        t = np.linspace(0, 0.1, 7)
        np.testing.assert_allclose((a + b).sample(t), a.sample(t) + b.sample(t))
        np.testing.assert_allclose((2.5 * b).sample(t), 2.5 * b.sample(t))
        np.testing.assert_allclose(b(0.013), b.sample([0.013])[0])
