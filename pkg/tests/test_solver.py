import math

import pytest

from pillowcase.families import (klein_bottle_model, torus_knot_model,
                                 unknot_model)
from pillowcase.geometry import (canonicalize, essential_class, line_offset,
                                 pillowcase_distance, polyline, tau)
from pillowcase.solver import (PillowcaseImage, SolverConfig,
                               corner_diagnostics, extract_essential_curve,
                               find_surgery_representation, lift_to_cut_open,
                               reducible_lines, sample_pillowcase_image,
                               solve_at_meridian_angle)
from pillowcase.su2 import (Representation, UnitQuaternion, boundary_angles,
                            irreducibility_gap, relator_residual)

PI = math.pi
CFG = SolverConfig()


@pytest.fixture(scope="module")
def trefoil_image():
    return sample_pillowcase_image(torus_knot_model(2, 3), 120, CFG)


@pytest.fixture(scope="module")
def klein_image():
    return sample_pillowcase_image(klein_bottle_model(), 60, CFG)


class TestSolveAtAngle:
    def test_trefoil_pi_over_3(self):
        tre = torus_knot_model(2, 3)
        sols = solve_at_meridian_angle(tre.presentation, PI / 3, CFG)
        assert sols
        irr = [s for s in sols if irreducibility_gap(s) > 1e-3]
        assert irr
        pt = boundary_angles(irr[0], tre.presentation)
        # on the irreducible branch 6a + b = pi, beta is pi here
        assert pillowcase_distance(pt, canonicalize(PI / 3, PI)) < 1e-7
        assert relator_residual(irr[0], tre.presentation) < CFG.tol

    def test_trefoil_below_branch(self):
        tre = torus_knot_model(2, 3)
        sols = solve_at_meridian_angle(tre.presentation, PI / 12, CFG)
        assert sols
        for s in sols:
            assert irreducibility_gap(s) < 1e-6
            pt = boundary_angles(s, tre.presentation)
            assert line_offset(pt, 0, 1, 0) < 1e-7

    def test_meridian_filling_kills_everything(self):
        tre = torus_knot_model(2, 3)
        for s in solve_at_meridian_angle(tre.presentation, 0.0, CFG):
            assert all(q.dist_to_one() < 1e-6 for q in s.images)

    def test_unknot(self):
        unk = unknot_model()
        sols = solve_at_meridian_angle(unk.presentation, 1.1, CFG)
        assert len(sols) == 1
        pt = boundary_angles(sols[0], unk.presentation)
        assert pillowcase_distance(pt, canonicalize(1.1, 0.0)) < 1e-9

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            solve_at_meridian_angle(unknot_model().presentation, -0.5, CFG)


class TestReducibleLines:
    def test_trefoil_line(self):
        lines = reducible_lines(torus_knot_model(2, 3))
        assert len(lines) == 1
        for v in lines[0].vertices:
            assert line_offset(v, 0, 1, 0) < 1e-12

    def test_klein_lines(self):
        lines = reducible_lines(klein_bottle_model())
        offsets = set()
        for line in lines:
            vals = {round(line_offset(v, 0, 1, 0), 6) for v in line.vertices}
            assert len(vals) == 1
            offsets.add(vals.pop())
        assert offsets == {0.0, round(PI, 6)}


class TestSweep:
    def test_trefoil_irreducibles_on_line(self, trefoil_image):
        img = trefoil_image
        irr = img.irreducible_points()
        assert len(irr) > 50
        for rec in irr:
            assert line_offset(rec.point, 6, 1, PI) < 1e-6
            assert PI / 6 - 0.02 < rec.point.alpha < 5 * PI / 6 + 0.02

    def test_nonzero_beta_implies_irreducible(self, trefoil_image):
        for rec in trefoil_image.points:
            if line_offset(rec.point, 0, 1, 0) > 1e-6:
                assert rec.gap > 0

    def test_image_tau_invariant(self, trefoil_image):
        img = trefoil_image
        pts = [rec.point for rec in img.irreducible_points()]
        for pt in pts:
            image = tau(pt)
            assert min(pillowcase_distance(image, q) for q in pts) < 2 * img.grid_step

    def test_central_character_shifts_by_tau(self, trefoil_image):
        tre = torus_knot_model(2, 3)
        n = tre.presentation.generator_count
        # the character sends a generator g to (-1)^{[g]} with [u]=3, [v]=2
        signs = [(-1) ** 3, (-1) ** 2]
        rec = trefoil_image.irreducible_points()[5]
        twisted = Representation(tuple(
            UnitQuaternion(s * q.w, s * q.x, s * q.y, s * q.z)
            for s, q in zip(signs, rec.witness.images)))
        assert relator_residual(twisted, tre.presentation) < 1e-8
        pt = boundary_angles(twisted, tre.presentation)
        assert pillowcase_distance(pt, tau(rec.point)) < 1e-7

    def test_klein_irreducibles_on_edge(self, klein_image):
        irr = klein_image.irreducible_points()
        assert irr
        for rec in irr:
            assert abs(rec.point.alpha - PI) < 1e-6

    def test_klein_contains_central_points(self, klein_image):
        pts = [rec.point for rec in klein_image.points]
        for target in (canonicalize(0.0, 0.0), canonicalize(0.0, PI)):
            assert min(pillowcase_distance(target, q) for q in pts) < 1e-6

    def test_unknot_image(self):
        img = sample_pillowcase_image(unknot_model(), 40, CFG)
        assert len(img.arcs) == 1
        for rec in img.points:
            assert line_offset(rec.point, 0, 1, 0) < 1e-9

    def test_witness_residuals(self, trefoil_image):
        tre = torus_knot_model(2, 3)
        for rec in trefoil_image.points[::7]:
            assert relator_residual(rec.witness, tre.presentation) < CFG.tol

    def test_torus_2_5_finds_both_branches(self):
        # two irreducible families (v-angle pi/5 and 3pi/5) share the
        # pillowcase line 10a + b = pi; the restarts must reach both basins
        model = torus_knot_model(2, 5)
        img = sample_pillowcase_image(model, 60, CFG)
        irr = img.irreducible_points()
        assert irr
        for rec in irr:
            assert line_offset(rec.point, 10, 1, PI) < 1e-6
        mid = [r for r in irr if abs(r.point.alpha - PI / 2) < 0.05]
        traces = {round(r.witness.images[1].w, 2) for r in mid}
        assert round(math.cos(PI / 5), 2) in traces
        assert round(math.cos(3 * PI / 5), 2) in traces


class TestLift:
    def test_trefoil_lifts(self, trefoil_image):
        assert lift_to_cut_open(trefoil_image).ok

    def test_klein_fails_with_witnesses(self, klein_image):
        res = lift_to_cut_open(klein_image)
        assert not res.ok
        assert any(abs(v.point.alpha - PI) < 1e-6 and v.point.beta > 1e-3
                   for v in res.violations)

    def test_line_alone_lifts(self):
        img = sample_pillowcase_image(unknot_model(), 30, CFG)
        assert lift_to_cut_open(img).ok


class TestEssentialCurve:
    def test_trefoil(self, trefoil_image):
        curve = extract_essential_curve(trefoil_image)
        assert curve is not None
        assert abs(essential_class(curve)) == 1
        # passes through (pi/2, 0) where the branch crosses beta = 0
        assert curve.min_distance_to(canonicalize(PI / 2, 0.0)) < 1e-3

    def test_unknot_none(self):
        img = sample_pillowcase_image(unknot_model(), 30, CFG)
        assert extract_essential_curve(img) is None

    def test_synthetic_loop(self):
        loop = polyline([(PI / 2, 0.0), (PI / 2, 1.5), (PI / 2, 3.0),
                         (PI / 2, 4.5)], closed=True)
        img = PillowcaseImage(model=unknot_model(), resolution=8,
                              grid_step=0.4, chain_threshold=0.8,
                              points=(), arcs=(loop,))
        found = extract_essential_curve(img)
        assert found is not None and abs(essential_class(found)) == 1


class TestSurgery:
    def test_trefoil_1_1(self, trefoil_image):
        res = find_surgery_representation(trefoil_image, 1, 1, CFG)
        assert res is not None
        rep, pt = res
        tre = torus_knot_model(2, 3)
        from pillowcase.presentations import concat, pow_word
        filled = tre.presentation.with_relator(
            concat(pow_word(tre.presentation.meridian, 1),
                   pow_word(tre.presentation.longitude, 1)))
        assert relator_residual(rep, filled) < 1e-8
        assert min(abs(pt.alpha - PI / 5), abs(pt.alpha - 3 * PI / 5)) < 1e-6
        assert irreducibility_gap(rep) > 0.1

    def test_trefoil_1_0_none(self, trefoil_image):
        assert find_surgery_representation(trefoil_image, 1, 0, CFG) is None

    def test_slope_0_1_hits_beta_zero(self, trefoil_image):
        res = find_surgery_representation(trefoil_image, 0, 1, CFG)
        assert res is not None
        rep, pt = res
        assert line_offset(pt, 0, 1, 0) < 1e-6

    def test_invalid_slope(self, trefoil_image):
        with pytest.raises(ValueError):
            find_surgery_representation(trefoil_image, 2, 4, CFG)


class TestDiagnosticsAndDeterminism:
    def test_corner_diagnostics_trefoil(self, trefoil_image):
        assert corner_diagnostics(trefoil_image, eps=0.01) == []

    def test_sweep_deterministic(self):
        tre = torus_knot_model(2, 3)
        img1 = sample_pillowcase_image(tre, 25, CFG)
        img2 = sample_pillowcase_image(tre, 25, CFG)
        assert [r.point for r in img1.points] == [r.point for r in img2.points]

    def test_threads_match_serial(self):
        tre = torus_knot_model(2, 3)
        img1 = sample_pillowcase_image(tre, 25, CFG)
        cfg2 = SolverConfig(threads=4)
        img2 = sample_pillowcase_image(tre, 25, cfg2)
        assert [r.point for r in img1.points] == [r.point for r in img2.points]

    def test_config_io(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text('{"tol": 1e-9, "restarts": 5, "seed": 3}')
        cfg = SolverConfig.from_json(str(path))
        assert cfg.tol == 1e-9 and cfg.restarts == 5 and cfg.seed == 3
        with pytest.raises(ValueError):
            SolverConfig.from_dict({"bogus": 1})
