import numpy as np
import pytest

import gabor_lca as gl
from gabor_lca import experiments as ex
from gabor_lca.gabor import TfLattice
from gabor_lca.groups import FiniteLcaGroup


class TestPeriodizedGaussian:
    def test_symmetry(self):
        g = ex.periodized_gaussian(16)
        for j in range(16):
            assert g.values[j] == pytest.approx(g.values[(16 - j) % 16], abs=1e-15)

    def test_positivity_and_norm(self):
        g = ex.periodized_gaussian(9)
        assert np.all(g.values.real > 0)
        assert g.norm() == pytest.approx(1.0, rel=1e-14)

    def test_fourier_self_duality(self):
        g = ex.periodized_gaussian(16)
        ghat = gl.fourier_transform(g)
        assert np.max(np.abs(np.abs(ghat.values) / 4.0 - np.abs(g.values))) < 1e-10

    def test_small_length_rejected(self):
        with pytest.raises(ValueError):
            ex.periodized_gaussian(1)


class TestWindowStabilitySweep:
    def make(self, seed=0):
        g = ex.periodized_gaussian(16, center=0.5)
        delta = TfLattice.from_plane_generators(g.group, [((2,), (0,)), ((0,), (4,))])
        return g, delta

    def test_zero_eps_identical_and_bound_dominates(self):
        g, delta = self.make()
        report = ex.window_stability_sweep(g, delta, [0.0, 0.01, 0.02], seed=0)
        assert report.assertions["zero_eps_unchanged"]
        assert report.assertions["janssen_bound_dominates"]

    def test_control_keeps_frame_property(self):
        g, delta = self.make()
        assert delta.volume < 1
        report = ex.window_stability_sweep(g, delta, [0.0, 0.005, 0.01, 0.02, 0.04], seed=1)
        assert all(row[3] for row in report.rows)  # is_frame survives the grid

    def test_bound_controls_frame_bound_drift(self):
        # eigenvalues move at most by the operator-norm change (Weyl), which
        # the adjoint-side bound dominates
        g, delta = self.make()
        report = ex.window_stability_sweep(g, delta, [0.0, 0.01, 0.02], seed=2)
        a0, b0 = report.summary["base_lower"], report.summary["base_upper"]
        for _, lower, upper, _, measured, bound in report.rows:
            assert abs(lower - a0) <= bound + 1e-10
            assert abs(upper - b0) <= bound + 1e-10
            assert measured <= bound + 1e-10

    def test_deterministic_csv(self):
        g, delta = self.make()
        a = ex.window_stability_sweep(g, delta, [0.0, 0.01], seed=3).to_csv()
        b = ex.window_stability_sweep(g, delta, [0.0, 0.01], seed=3).to_csv()
        assert a == b

    def test_requires_frame(self):
        g = ex.periodized_gaussian(4)  # symmetric: singular at critical density
        lam = gl.enumerate_subgroup(g.group, [g.group.element((2,))])
        with pytest.raises(ValueError):
            ex.window_stability_sweep(g, TfLattice.separable(lam), [0.0])


class TestCriticalDensityTrend:
    def test_assertions_hold(self):
        report = ex.critical_density_trend([2, 3, 4])
        assert report.passed, report.assertions

    def test_rows_cover_critical_and_control(self):
        report = ex.critical_density_trend([2, 3])
        kinds = [row[2] for row in report.rows]
        assert kinds.count("critical") == 2 and kinds.count("control") == 2
        vols = {row[2]: row[3] for row in report.rows}
        assert vols["critical"] == "1" and vols["control"] == "1/2"

    def test_rejects_n_below_two(self):
        with pytest.raises(ValueError):
            ex.critical_density_trend([1, 2])


class TestDensityExhaustive:
    def test_z4_clean(self):
        report = ex.density_exhaustive(FiniteLcaGroup((4,)), windows_per_lattice=5)
        assert report.assertions["no_frame_above_volume_one"]
        assert report.summary["subgroups"] == 15

    def test_singleton_lattice_never_frames(self):
        report = ex.density_exhaustive(FiniteLcaGroup((4,)), windows_per_lattice=5)
        singleton_rows = [row for row in report.rows if row[1] == 1]
        assert singleton_rows and all(row[4] == 0 for row in singleton_rows)

    def test_critical_separable_frames_match_zak_criterion(self):
        G = FiniteLcaGroup((4,))
        rng = np.random.default_rng(9)
        for lam in gl.all_subgroups(G):
            delta = TfLattice.separable(lam)
            for _ in range(5):
                g = gl.random_window(G, rng)
                assert gl.frame_bounds(g, delta).is_frame == \
                    gl.zak_frame_bounds(g, lam).is_frame

    def test_size_cap(self):
        with pytest.raises(ValueError):
            ex.density_exhaustive(FiniteLcaGroup((5, 5)))


class TestSeededInstances:
    def test_janssen_defect_small(self):
        assert ex.janssen_max_defect(10, seed=0) < 1e-10

    def test_generators_are_deterministic(self):
        a = [(g.values.tobytes(), d.subgroup.index_array.tobytes())
             for g, d in ex.seeded_frame_instances(5, seed=1)]
        b = [(g.values.tobytes(), d.subgroup.index_array.tobytes())
             for g, d in ex.seeded_frame_instances(5, seed=1)]
        assert a == b

    def test_frame_instances_are_frames(self):
        for g, delta in ex.seeded_frame_instances(5, seed=2):
            report = gl.frame_bounds(g, delta)
            assert report.is_frame and delta.volume <= 1
            assert report.condition <= 1e4

    def test_flip_perturbation_hits_largest_coordinate(self):
        G = FiniteLcaGroup((4,))
        h = gl.Window(G, np.array([0.1, 0.9, 0.2, 0.3], dtype=complex))
        bumped = ex.wexler_raz_flip_perturbation(h, size=1e-3)
        assert bumped.values[1] == pytest.approx(0.9 + 1e-3)
