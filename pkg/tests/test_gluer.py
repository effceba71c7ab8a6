import math

import pytest

from pillowcase.families import klein_bottle_model, torus_knot_model, unknot_model
from pillowcase.geometry import (GluingMatrix, canonicalize,
                                 induced_boundary_transform,
                                 pillowcase_distance, polyline, tau)
from pillowcase.gluer import (p_avoiding_certificate, search_nonabelian_rep,
                              slope_line_certificates, splice,
                              _candidate_points)
from pillowcase.homology import abelianization, glue_homology
from pillowcase.solver import (PillowcaseImage, SolverConfig,
                               extract_essential_curve,
                               sample_pillowcase_image)
from pillowcase.su2 import relator_residual

PI = math.pi
CFG = SolverConfig(resolution=100)


@pytest.fixture(scope="module")
def trefoil_image():
    return sample_pillowcase_image(torus_knot_model(2, 3), 100, CFG)


class TestSplice:
    @pytest.mark.parametrize("gluing,factors", [
        (GluingMatrix.swap(), ()),
        (GluingMatrix.skew(2), (2,)),
        (GluingMatrix.skew(3), (3,)),
    ])
    def test_amalgamated_matches_matrix_route(self, gluing, factors):
        tre = torus_knot_model(2, 3)
        spliced = splice(tre, tre, gluing)
        via_presentation = abelianization(spliced.amalgamated).group()
        via_matrix = glue_homology(tre, tre, gluing)
        assert via_presentation == via_matrix
        assert via_matrix.torsion == factors

    def test_identification_relators(self):
        tre = torus_knot_model(2, 3)
        spliced = splice(tre, tre, GluingMatrix.swap())
        p = spliced.amalgamated
        assert p.generator_count == 4
        # relators: one per side plus the two identifications
        assert len(p.relators) == 4


class TestSearch:
    def test_swap_trefoils(self, trefoil_image):
        tre = torus_knot_model(2, 3)
        spliced = splice(tre, tre, GluingMatrix.swap())
        res = search_nonabelian_rep(spliced, CFG, image1=trefoil_image,
                                    image2=trefoil_image)
        assert res.found
        assert res.residual < 1e-8
        assert res.gap_side1 > 0.1 and res.gap_side2 > 0.1
        assert relator_residual(res.representation, spliced.amalgamated) < 1e-8
        # boundary point lies on one of the enumerated residue branches
        branches = _swap_branch_points()
        assert min(pillowcase_distance(res.boundary_point, b)
                   for b in branches) < 1e-3
        # both peripheral angles stay away from the reducible locus
        from pillowcase.geometry import line_offset
        assert line_offset(res.boundary_point, 0, 1, 0) > 1e-3
        assert line_offset(res.boundary_point, 1, 0, 0) > 1e-3

    def test_skew3_trefoils(self, trefoil_image):
        tre = torus_knot_model(2, 3)
        spliced = splice(tre, tre, GluingMatrix.skew(3))
        res = search_nonabelian_rep(spliced, CFG, image1=trefoil_image,
                                    image2=trefoil_image)
        assert res.found
        assert res.gap_side1 > 0.1 and res.gap_side2 > 0.1
        # intersections of 6a+b=pi with its skew-3 image: 9a = 2pi mod 2pi
        targets = [canonicalize(2 * PI / 9, PI - 12 * PI / 9),
                   canonicalize(4 * PI / 9, PI - 24 * PI / 9),
                   canonicalize(6 * PI / 9, PI - 36 * PI / 9)]
        assert min(pillowcase_distance(res.boundary_point, t)
                   for t in targets) < 1e-3

    def test_candidates_tau_invariant_for_skew(self, trefoil_image):
        g = GluingMatrix.skew(2)
        arcs2 = trefoil_image.transform_arcs(
            lambda v: induced_boundary_transform(g, v))
        cands = _candidate_points(trefoil_image, arcs2, g)
        assert cands
        for pt in cands:
            assert min(pillowcase_distance(tau(pt), q) for q in cands) \
                < 3 * trefoil_image.grid_step

    def test_klein_trefoil_essential_splice(self):
        # swap-splicing the Klein-bottle bundle (rational longitude of order
        # 2) to a trefoil: the glued representation pairs the a -> j family
        # with a branch point whose longitude holonomy is -1, landing at
        # (pi, k pi/3)
        kl = klein_bottle_model()
        tre = torus_knot_model(2, 3)
        assert glue_homology(kl, tre, GluingMatrix.swap()).torsion == (2, 2)
        spliced = splice(kl, tre, GluingMatrix.swap())
        res = search_nonabelian_rep(spliced, SolverConfig(resolution=80))
        assert res.found
        assert res.residual < 1e-8
        assert res.gap_side1 > 0.1 and res.gap_side2 > 0.1
        targets = [canonicalize(PI, PI / 3), canonicalize(PI, 2 * PI / 3)]
        assert min(pillowcase_distance(res.boundary_point, t)
                   for t in targets) < 1e-3

    def test_motegi_none(self):
        tre = torus_knot_model(2, 3)
        neg = torus_knot_model(-2, 3)
        spliced = splice(tre, neg, GluingMatrix(a=-6, b=1, p=37, c=-6))
        res = search_nonabelian_rep(spliced, CFG)
        assert not res.found
        assert res.resolution == CFG.resolution

    def test_search_deterministic(self, trefoil_image):
        tre = torus_knot_model(2, 3)
        spliced = splice(tre, tre, GluingMatrix.swap())
        r1 = search_nonabelian_rep(spliced, CFG, image1=trefoil_image,
                                   image2=trefoil_image)
        r2 = search_nonabelian_rep(spliced, CFG, image1=trefoil_image,
                                   image2=trefoil_image)
        assert r1.boundary_point == r2.boundary_point
        assert [q for q in r1.representation.images] == \
            [q for q in r2.representation.images]


def _swap_branch_points():
    """All intersections of 6a+b=pi with its swap image on both arcs."""
    out = []
    for big_k in range(1, 7):
        for ell in range(-2, 3):
            if (big_k - 1 + ell) % 2 != 0:
                continue
            alpha = PI * big_k / 7 + PI * ell / 5
            beta = PI * big_k / 7 - PI * ell / 5
            pt = canonicalize(alpha, beta)
            # both sides must land on the open arc alpha in (pi/6, 5pi/6)
            swapped = canonicalize(pt.beta, pt.alpha)
            if PI / 6 < pt.alpha < 5 * PI / 6 and PI / 6 < swapped.alpha < 5 * PI / 6:
                out.append(pt)
    assert out
    return out


class TestSlopeLineCertificates:
    def test_trefoil_p2(self, trefoil_image):
        cert = slope_line_certificates(trefoil_image, 2)
        # the branch 6a+b=pi crosses 2a+b=0 at (pi/4, 3pi/2), (3pi/4, pi/2)
        assert not cert.avoid_zero_line
        expected = [canonicalize(PI / 4, 3 * PI / 2),
                    canonicalize(3 * PI / 4, PI / 2)]
        for target in expected:
            assert min(pillowcase_distance(w, target)
                       for w in cert.zero_line_witnesses) < 1e-6
        assert cert.pi_line_connected
        assert cert.contains_half_pi

    def test_klein_p2(self):
        img = sample_pillowcase_image(klein_bottle_model(), 60, CFG)
        cert = slope_line_certificates(img, 2)
        assert not cert.avoid_zero_line
        # the beta = pi family of diagonal representations crosses the line
        assert min(pillowcase_distance(w, canonicalize(PI / 2, PI))
                   for w in cert.zero_line_witnesses) < 1e-6

    def test_synthetic_full_line(self):
        pts = [(t, PI - 2 * t) for t in
               [i * PI / 80 for i in range(81)]]
        line = polyline(pts)
        img = PillowcaseImage(model=unknot_model(), resolution=80,
                              grid_step=PI / 80, chain_threshold=PI / 10,
                              points=(), arcs=(line,))
        cert = slope_line_certificates(img, 2)
        assert cert.pi_line_connected
        assert cert.contains_half_pi
        assert cert.avoid_zero_line


class TestPAvoidingCertificate:
    def test_trefoil_curve_p3(self, trefoil_image):
        curve = extract_essential_curve(trefoil_image)
        report = p_avoiding_certificate(curve, 3)
        assert report.essential != 0
        assert report.avoids_corners
        assert report.meets_beta_zero and report.meets_beta_pi
        # the branch touches 3a+b = 0 mod pi at beta = pi, which disqualifies it
        assert report.disallowed_touches
        assert not report.passes
        for pt in report.touch_points:
            assert pillowcase_distance(pt, canonicalize(pt.alpha, 0.0)) < 1e-6

    def test_vertical_loop_pi_over_3(self):
        loop = polyline([(PI / 3, 0.0), (PI / 3, 2.0), (PI / 3, 4.0)],
                        closed=True)
        report = p_avoiding_certificate(loop, 3)
        assert not report.passes
        assert any(abs(pt.beta - PI) < 1e-9 for pt in report.disallowed_touches)

    def test_generic_vertical_loop_fails_off_axis(self):
        # an essential curve always meets the slope-p lines somewhere; at a
        # generic alpha the touches are away from beta = 0, so it fails
        loop = polyline([(1.1, 0.5), (1.1, 2.5), (1.1, 4.5)], closed=True)
        report = p_avoiding_certificate(loop, 3)
        assert not report.passes
        assert report.disallowed_touches

    def test_trefoil_curve_is_5_avoiding(self, trefoil_image):
        # the trefoil has a lens-space 5-surgery, and indeed its essential
        # curve meets 5a + b = 0 mod pi only at points (k pi/5, 0)
        curve = extract_essential_curve(trefoil_image)
        report = p_avoiding_certificate(curve, 5)
        assert report.passes
        assert report.touch_points
        for pt in report.touch_points:
            assert min(abs(pt.alpha - k * PI / 5) for k in range(1, 5)) < 1e-3

    def test_transversality_at_shared_point(self):
        # two curves through (2pi/3, 0): one flat along beta = 0, one steep
        flat = polyline([(2 * PI / 3 - 0.3, 0.0), (2 * PI / 3 + 0.3, 0.0),
                         (2 * PI / 3 + 0.3, 3.0), (2 * PI / 3 - 0.3, 3.0)],
                        closed=True)
        report = p_avoiding_certificate(flat, 3, partner=flat)
        assert report.shared_transversal
        pt, trans = report.shared_transversal[0]
        assert pillowcase_distance(pt, canonicalize(2 * PI / 3, 0.0)) < 1e-9
        assert trans  # sigma_3 maps the flat arc to slope -3, crossing it

    def test_open_curve_rejected(self):
        with pytest.raises(ValueError):
            p_avoiding_certificate(polyline([(1.0, 1.0), (1.2, 1.0)]), 3)
