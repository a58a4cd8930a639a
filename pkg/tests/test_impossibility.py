import math

import numpy as np
import pytest

from cyclex import (
    BUILTIN_CANDIDATES,
    AntipodalAmbiguity,
    Ball,
    Box,
    CandidateFunctional,
    DegenerateInput,
    Family,
    InvalidRho,
    InvalidUnitVector,
    Ray,
    Segment,
    SpiralSpec,
    candidate_gap,
    degenerate_families,
    falsify_candidate,
    min_norm_point,
    orthogonal_completion,
    project,
    run_periodic,
    spiral,
)
from cyclex.impossibility import VERDICT_FALSIFIED


def spiral_at_angle(alpha, n, start_norm=1.0, target_norm=0.05):
    target = target_norm * np.array([math.cos(alpha), math.sin(alpha)])
    spec = SpiralSpec(target=target, start=[start_norm, 0.0], n=n)
    return spec, *spiral(spec)


class TestSpiral:
    def test_two_step_right_angle(self):
        spec = SpiralSpec(target=[0.0, 0.1], start=[1.0, 0.0], n=2)
        pts, final_norm = spiral(spec)
        assert spec.alpha == pytest.approx(math.pi / 2, abs=1e-15)
        assert np.allclose(pts[0], [1.0, 0.0])
        assert np.allclose(pts[1], [0.5, 0.5], atol=1e-15)
        assert np.allclose(pts[2], [0.0, 0.5], atol=1e-15)
        assert final_norm == pytest.approx(0.5, abs=1e-15)  # cos(pi/4)^2

    def test_zero_angle_keeps_start(self):
        pts, final_norm = spiral(SpiralSpec(target=[0.5, 0.0], start=[1.0, 0.0], n=7))
        assert np.array_equal(pts, np.tile([1.0, 0.0], (8, 1)))
        assert final_norm == 1.0

    def test_norm_law(self):
        for alpha in (math.pi / 6, math.pi / 2, 3 * math.pi / 4):
            for n in (3, 10, 100):
                _, pts, _ = spiral_at_angle(alpha, n)
                norms = np.linalg.norm(pts, axis=1)
                law = np.cos(alpha / n) ** np.arange(n + 1)
                assert np.max(np.abs(norms - law) / law) <= 1e-12

    def test_large_n_norm_approaches_start(self):
        # closed-form bound: cos(a/n)^n >= exp(-a^2/(2n)) - o(1) >= 1 - a^2/(2n)
        alpha, n = math.pi / 2, 10**6
        _, _, final_norm = spiral_at_angle(alpha, n)
        assert final_norm >= 1.0 - alpha**2 / (2 * n) - 1e-9
        assert final_norm >= 1.0 - 1e-5

    def test_points_lie_on_their_rays(self):
        spec, pts, _ = spiral_at_angle(2.0, 50)
        e1 = np.array([1.0, 0.0])
        e2 = np.array([0.0, 1.0])
        alpha = spec.alpha
        for k in range(1, 51):
            theta = alpha * k / 50
            ray = Ray(math.cos(theta) * e1 + math.sin(theta) * e2)
            assert np.linalg.norm(pts[k] - project(ray, pts[k])) <= 1e-12

    def test_chords_have_min_norm_at_next_point(self):
        _, pts, _ = spiral_at_angle(2.4, 80)
        for k in range(1, 81):
            chord = Segment(pts[k - 1], pts[k])
            assert np.linalg.norm(min_norm_point(chord) - pts[k]) <= 1e-12

    def test_final_point_collinear_with_target(self):
        spec, pts, final_norm = spiral_at_angle(1.1, 9)
        target = spec.target
        cross = pts[-1][0] * target[1] - pts[-1][1] * target[0]
        assert abs(cross) <= 1e-12
        assert float(pts[-1] @ target) > 0.0

    def test_degenerate_inputs_rejected(self):
        with pytest.raises(DegenerateInput):
            spiral(SpiralSpec(target=[0.0, 0.0], start=[1.0, 0.0], n=3))
        with pytest.raises(DegenerateInput):
            spiral(SpiralSpec(target=[2.0, 0.0], start=[1.0, 0.0], n=3))

    def test_antipodal_needs_plane(self):
        with pytest.raises(AntipodalAmbiguity):
            spiral(SpiralSpec(target=[-0.5, 0.0], start=[1.0, 0.0], n=4))
        pts, final_norm = spiral(
            SpiralSpec(target=[-0.5, 0.0], start=[1.0, 0.0], n=4, plane=[0.0, 1.0])
        )
        law = math.cos(math.pi / 4) ** 4
        assert final_norm == pytest.approx(law, rel=1e-12)
        assert pts[-1][0] < 0.0 and abs(pts[-1][1]) <= 1e-12

    def test_plane_hint_must_leave_the_line(self):
        with pytest.raises(AntipodalAmbiguity):
            spiral(SpiralSpec(target=[-0.5, 0.0], start=[1.0, 0.0], n=4, plane=[2.0, 0.0]))


class TestOrthogonalCompletion:
    def test_perpendicular_and_unit(self):
        rng = np.random.default_rng(2)
        for dim in (2, 3, 5):
            for _ in range(50):
                z = rng.standard_normal(dim)
                w = orthogonal_completion(z)
                assert abs(float(w @ z)) <= 1e-12 * np.linalg.norm(z)
                assert np.linalg.norm(w) == pytest.approx(1.0, abs=1e-12)

    def test_axis_aligned(self):
        assert np.allclose(orthogonal_completion(np.array([1.0, 0.0])), [0.0, 1.0])
        assert np.allclose(orthogonal_completion(np.array([0.0, 2.0])), [1.0, 0.0])


class TestDegenerateFamilies:
    def test_m3_exact_cycles(self):
        df = degenerate_families(3, [1.0, 0.0], 2.0)
        want_pos = np.array([[0, 0], [1, 0], [2, 0]], float)
        want_neg = np.array([[0, 0], [-1, 0], [-2, 0]], float)
        assert np.array_equal(np.stack(df.positive_cycle.points), want_pos)
        assert np.array_equal(np.stack(df.negative_cycle.points), want_neg)
        assert df.positive_cycle.residual == 0.0
        assert df.negative_cycle.residual == 0.0

    def test_m4_with_second_axis(self):
        df = degenerate_families(4, [0.0, 1.0], 1.5)
        want = np.array([[0, 0], [0, 0], [0, 1], [0, 1.5]], float)
        assert np.allclose(np.stack(df.positive_cycle.points), want)
        assert df.positive_cycle.residual == 0.0

    def test_periodic_run_recovers_cycle(self):
        df = degenerate_families(3, [1.0, 0.0], 2.0, verify=False)
        _, cycle = run_periodic(df.positive_family, [7.0, -7.0])
        drift = max(
            np.linalg.norm(a - b) for a, b in zip(cycle.points, df.positive_cycle.points)
        )
        assert drift <= 1e-10

    def test_input_validation(self):
        with pytest.raises(InvalidUnitVector):
            degenerate_families(3, [2.0, 0.0], 2.0)
        with pytest.raises(InvalidRho):
            degenerate_families(3, [1.0, 0.0], 0.5)
        with pytest.raises(ValueError):
            degenerate_families(2, [1.0, 0.0], 2.0)


class TestFalsifier:
    def test_perimeter_chain(self):
        report = falsify_candidate(BUILTIN_CANDIDATES["perimeter"], 3, [1.0, 0.0], 2.0, 8)
        assert report.chain_values == (4.0, 6.0, 4.0, 6.0)
        assert report.violated_link == "equality-1"
        assert report.gap == pytest.approx(2.0, abs=1e-12)
        assert report.verdict == VERDICT_FALSIFIED

    def test_cyclic_squared_chain(self):
        report = falsify_candidate(BUILTIN_CANDIDATES["cyclic2"], 3, [1.0, 0.0], 2.0, 8)
        assert report.chain_values == (6.0, 14.0, 6.0, 14.0)
        assert report.violated_link == "equality-1"
        assert report.gap == pytest.approx(8.0, abs=1e-12)

    def test_constant_fails_strictness(self):
        report = falsify_candidate(BUILTIN_CANDIDATES["constant"], 3, [1.0, 0.0], 2.0, 8)
        assert report.violated_link == "strict-1"
        assert report.gap == 0.0
        assert report.verdict == VERDICT_FALSIFIED

    def test_every_builtin_is_falsified(self):
        rng = np.random.default_rng(31)
        for m in (3, 4, 5):
            for name, cand in BUILTIN_CANDIDATES.items():
                z = rng.standard_normal(2)
                z /= np.linalg.norm(z)
                rho = float(rng.uniform(1.2, 5.0))
                report = falsify_candidate(cand, m, z, rho, 6, rng=rng)
                assert report.verdict == VERDICT_FALSIFIED, (name, m)

    def test_negation_symmetry_of_builtins(self):
        rng = np.random.default_rng(37)
        for name, cand in BUILTIN_CANDIDATES.items():
            y = rng.uniform(-3, 3, (4, 2))
            assert cand(y) == pytest.approx(cand(-y), abs=1e-12), name

    def test_sphere_probe_catches_hidden_dependence(self):
        # equal at +-rho z but varying along the probe plane
        sneaky = CandidateFunctional(lambda y: abs(float(y[-1][1])), "sneaky")
        report = falsify_candidate(sneaky, 3, [1.0, 0.0], 2.0, 16)
        assert report.verdict == VERDICT_FALSIFIED

    def test_report_dict_shape(self):
        report = falsify_candidate(BUILTIN_CANDIDATES["perimeter"], 3, [1.0, 0.0], 2.0, 4)
        payload = report.to_dict()
        assert set(payload) == {"candidate", "chain", "violated_link", "gap", "verdict"}
        assert payload["chain"] == [4.0, 6.0, 4.0, 6.0]

    def test_sample_count_validated(self):
        with pytest.raises(ValueError):
            falsify_candidate(BUILTIN_CANDIDATES["perimeter"], 3, [1.0, 0.0], 2.0, 1)


class TestCandidateGap:
    def test_degenerate_family_has_no_gap(self):
        # the segment's interior optimum sits at the clamped endpoint here
        z = np.array([1.0, 0.0])
        df = degenerate_families(3, z, 2.0, verify=False)
        exhibit = candidate_gap(df.positive_family, "cyclic2", [5.0, 5.0])
        assert exhibit.gap <= 1e-10
        assert exhibit.displacement <= 1e-5

    def test_off_axis_balls_separate_cycle_from_minimizer(self):
        fam = Family((Ball([0, 0], 1.0), Ball([10, 0], 1.0), Ball([5, 1], 1.0)))
        exhibit = candidate_gap(fam, "cyclic2", [0.0, 3.0])
        assert exhibit.gap > 1e-3
        assert exhibit.displacement > 1e-3
        assert exhibit.gap >= -1e-10

    def test_common_point_family_collapses(self):
        fam = Family((Ball([0, 0], 2.0), Box([-1, -1], [1, 1]), Ball([0.5, 0.5], 2.0)))
        exhibit = candidate_gap(fam, "pairwise2", [4.0, 4.0])
        assert exhibit.gap <= 1e-10
        assert exhibit.cycle.residual <= 1e-10

    def test_unknown_candidate_kind(self):
        fam = Family((Ball([0, 0], 1.0), Ball([4, 0], 1.0)))
        with pytest.raises(ValueError):
            candidate_gap(fam, "perimeter", [0.0, 0.0])
