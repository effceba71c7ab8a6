"""Splice two knot exteriors and search for non-abelian representations.

The search transforms one boundary image by the gluing, intersects it with
the other, and refines each intersection candidate by a joint solve of the
amalgamated presentation seeded from the two witnesses.  Certificate
checks test sampled images against the line-avoidance and connectedness
constraints that hold when the relevant Dehn surgeries are as assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import (GluingMatrix, PillowcasePoint, PillowcasePolyline,
                       _is_odd_prime, canonicalize, essential_class,
                       induced_boundary_transform, line_offset,
                       pillowcase_distance, polyline_intersections, sigma_p,
                       TWO_PI)
from .presentations import (GroupPresentation, KnotExteriorModel, concat,
                            invert_word, pow_word, shift_word)
from .solver import (ImagePoint, PillowcaseImage, SolverConfig,
                     refine_representation, sample_pillowcase_image)
from .su2 import (Representation, align_boundary_to_i_axis, boundary_angles,
                  irreducibility_gap, relator_residual)

__all__ = [
    "SplicedManifold", "SpliceSearchResult", "CertificateReport",
    "AvoidingCurveReport", "splice", "search_nonabelian_rep",
    "slope_line_certificates", "p_avoiding_certificate",
]


@dataclass(frozen=True)
class SplicedManifold:
    """Two exteriors glued along their boundary tori.

    The amalgamated presentation takes the generators and relators of both
    sides (side 2 reindexed) plus two peripheral identification relators
    equating mu1, lam1 with the gluing-matrix words in mu2, lam2.
    """

    model1: KnotExteriorModel
    model2: KnotExteriorModel
    gluing: GluingMatrix
    amalgamated: GroupPresentation

    @property
    def side1_generators(self) -> int:
        return self.model1.presentation.generator_count

    def restrict(self, rep: Representation, side: int) -> Representation:
        n1 = self.side1_generators
        if side == 1:
            return rep.restrict(0, n1)
        return rep.restrict(n1, len(rep.images))


def splice(model1: KnotExteriorModel, model2: KnotExteriorModel,
           gluing: GluingMatrix) -> SplicedManifold:
    """Amalgamated presentation of the glued manifold."""
    p1 = model1.presentation
    p2 = model2.presentation
    n1 = p1.generator_count
    mu2 = shift_word(p2.meridian, n1)
    lam2 = shift_word(p2.longitude, n1)
    relators = list(p1.relators)
    relators += [shift_word(r, n1) for r in p2.relators]
    # mu1 = mu2^a lam2^b and lam1 = mu2^p lam2^c (peripheral words commute)
    mu_target = concat(pow_word(mu2, gluing.a), pow_word(lam2, gluing.b))
    lam_target = concat(pow_word(mu2, gluing.p), pow_word(lam2, gluing.c))
    relators.append(concat(p1.meridian, invert_word(mu_target)))
    relators.append(concat(p1.longitude, invert_word(lam_target)))
    amalgamated = GroupPresentation(
        generator_count=n1 + p2.generator_count,
        relators=tuple(relators),
        meridian=p1.meridian,
        longitude=p1.longitude,
    )
    return SplicedManifold(model1=model1, model2=model2, gluing=gluing,
                           amalgamated=amalgamated)


@dataclass(frozen=True)
class SpliceSearchResult:
    found: bool
    representation: Representation | None = None
    residual: float | None = None
    gap: float | None = None
    gap_side1: float | None = None
    gap_side2: float | None = None
    boundary_point: PillowcasePoint | None = None
    resolution: int = 0
    diagnostics: tuple = ()


def _candidate_points(img1: PillowcaseImage, arcs2_transformed,
                      gluing: GluingMatrix):
    """Intersection candidates of image 1 with the transformed image 2."""
    out = []
    for a1 in img1.arcs:
        for a2 in arcs2_transformed:
            for (pt, trans) in polyline_intersections(a1, a2, tol=1e-9):
                out.append(pt)
    # dedup
    kept = []
    for pt in out:
        if not any(pillowcase_distance(pt, q) < 1e-6 for q in kept):
            kept.append(pt)
    return kept


def _side2_angles(gluing: GluingMatrix, pt: PillowcasePoint) -> tuple[float, float]:
    """Exact angle pair on side 2 mapping to pt under the gluing transform."""
    inv = gluing.inverse().rows()
    return (inv[0][0] * pt.alpha + inv[0][1] * pt.beta,
            inv[1][0] * pt.alpha + inv[1][1] * pt.beta)


def _nearest_record(img: PillowcaseImage, pt: PillowcasePoint):
    best, best_d = None, math.inf
    for rec in img.points:
        d = pillowcase_distance(rec.point, pt)
        if d < best_d:
            best_d = d
            best = rec
    return best, best_d


def search_nonabelian_rep(spliced: SplicedManifold, config: SolverConfig | None = None,
                          image1: PillowcaseImage | None = None,
                          image2: PillowcaseImage | None = None) -> SpliceSearchResult:
    """Search for a representation of the splice, non-abelian on both sides.

    Both models are swept, image 2 is pushed through the gluing transform,
    and every intersection with image 1 (outside the locus where both sides
    are forced abelian) seeds a joint refinement of the amalgamated
    presentation.  Success requires residual < tol on every relator and an
    irreducibility gap above min_gap on each side's restriction; a None
    result carries the diagnostics of every candidate tried.
    """
    config = config or SolverConfig()
    img1 = image1 or sample_pillowcase_image(spliced.model1, config.resolution, config)
    img2 = image2 or sample_pillowcase_image(spliced.model2, config.resolution, config)
    g = spliced.gluing
    arcs2 = img2.transform_arcs(lambda v: induced_boundary_transform(g, v))
    candidates = _candidate_points(img1, arcs2, g)

    scored = []
    for pt in candidates:
        gamma, delta = _side2_angles(g, pt)
        beta_zero = line_offset(pt, 0.0, 1.0, 0.0) < 1e-6
        delta_zero = abs(math.remainder(delta, TWO_PI)) < 1e-6
        if beta_zero and delta_zero:
            continue  # both restrictions would be forced abelian
        rec1, d1 = _nearest_record(img1, pt)
        rec2, d2 = _nearest_record(img2, canonicalize(gamma, delta))
        if rec1 is None or rec2 is None:
            continue
        if d1 > 2 * img1.chain_threshold or d2 > 2 * img2.chain_threshold:
            continue
        scored.append((min(rec1.gap, rec2.gap), pt, (gamma, delta), rec1, rec2))
    scored.sort(key=lambda item: (-item[0], item[1].alpha, item[1].beta))

    n1 = spliced.side1_generators
    diagnostics = []
    for (_, pt, (gamma, delta), rec1, rec2) in scored:
        seed = _build_seed(spliced, pt, (gamma, delta), rec1, rec2)
        refined = refine_representation(spliced.amalgamated, seed, config)
        entry = {"candidate": pt.as_tuple(), "seed_gaps": (rec1.gap, rec2.gap)}
        if refined is None:
            entry["result"] = "no convergence"
            diagnostics.append(entry)
            continue
        res = relator_residual(refined, spliced.amalgamated)
        gap1 = irreducibility_gap(spliced.restrict(refined, 1))
        gap2 = irreducibility_gap(spliced.restrict(refined, 2))
        entry["result"] = {"residual": res, "gaps": (gap1, gap2)}
        diagnostics.append(entry)
        if res < config.tol and gap1 > config.min_gap and gap2 > config.min_gap:
            bp = boundary_angles(refined, spliced.amalgamated)
            return SpliceSearchResult(
                found=True, representation=refined, residual=res,
                gap=min(gap1, gap2), gap_side1=gap1, gap_side2=gap2,
                boundary_point=bp, resolution=img1.resolution,
                diagnostics=tuple(diagnostics))
    return SpliceSearchResult(found=False, resolution=img1.resolution,
                              diagnostics=tuple(diagnostics))


def _build_seed(spliced: SplicedManifold, pt: PillowcasePoint,
                side2_angles: tuple[float, float],
                rec1: ImagePoint, rec2: ImagePoint) -> Representation:
    """Concatenate boundary-aligned witnesses into a joint starting point."""
    p1 = spliced.model1.presentation
    p2 = spliced.model2.presentation
    aligned1 = align_boundary_to_i_axis(rec1.witness, p1, (pt.alpha, pt.beta))
    aligned2 = align_boundary_to_i_axis(rec2.witness, p2, side2_angles)
    return Representation(aligned1.images + aligned2.images)


# ---------------------------------------------------------------------------
# certificates

@dataclass(frozen=True)
class CertificateReport:
    """Sampled-image checks against the slope-p exclusion lines.

    avoid_zero_line: no image point on p*alpha + beta = 0 mod 2pi away from
    beta = 0 (witnesses listed when it fails).  pi_line_connected: the
    intersection with p*alpha + beta = pi mod 2pi forms a single chain at
    the sampling scale.  contains_half_pi: (pi/2, 0) belongs to the image
    (checked for p = 2).  All statements are at the recorded resolution.
    """

    p: int
    resolution: int
    tolerance: float
    avoid_zero_line: bool
    zero_line_witnesses: tuple[PillowcasePoint, ...]
    pi_line_connected: bool
    pi_line_points: tuple[PillowcasePoint, ...]
    pi_line_gap: float
    contains_half_pi: bool | None


def _points_on_line(img: PillowcaseImage, ca: float, cb: float, target: float,
                    tol: float):
    """Image points on the line ca*alpha + cb*beta = target mod 2pi.

    Includes witness points and arc vertices within tol of the line, plus
    interpolated crossings of arc segments (the sampled curve stands in for
    the continuum between witnesses).
    """
    pts = [rec.point for rec in img.points
           if line_offset(rec.point, ca, cb, target) < tol]
    for arc in img.arcs:
        for v in arc.vertices:
            if line_offset(v, ca, cb, target) < tol:
                pts.append(v)
        for (x1, y1), (x2, y2) in arc.lifted_segments():
            f1 = ca * x1 + cb * y1 - target
            f2 = ca * x2 + cb * y2 - target
            lo, hi = min(f1, f2), max(f1, f2)
            k_lo = math.ceil(lo / TWO_PI)
            k_hi = math.floor(hi / TWO_PI)
            for k in range(k_lo, k_hi + 1):
                if abs(f2 - f1) < 1e-15:
                    continue
                t = (TWO_PI * k - f1) / (f2 - f1)
                if -1e-9 <= t <= 1 + 1e-9:
                    pts.append(canonicalize(x1 + t * (x2 - x1),
                                            y1 + t * (y2 - y1)))
    kept = []
    for pt in pts:
        if not any(pillowcase_distance(pt, q) < 1e-6 for q in kept):
            kept.append(pt)
    return kept


def slope_line_certificates(img: PillowcaseImage, p: int,
                            tol: float | None = None) -> CertificateReport:
    """Check a sampled image against the slope-p line constraints."""
    tol = tol if tol is not None else max(1e-6, 0.5 * img.grid_step)
    witnesses_kept = [pt for pt in _points_on_line(img, p, 1.0, 0.0, tol)
                      if line_offset(pt, 0.0, 1.0, 0.0) > tol]
    on_pi = _points_on_line(img, p, 1.0, math.pi, tol)
    connected, max_gap = _connected_at_scale(on_pi, 3.0 * img.grid_step)
    half_pi = None
    if p == 2:
        target = canonicalize(math.pi / 2, 0.0)
        half_pi = any(pillowcase_distance(pt, target) < max(tol, img.grid_step)
                      for pt in on_pi)
    return CertificateReport(
        p=p,
        resolution=img.resolution,
        tolerance=tol,
        avoid_zero_line=not witnesses_kept,
        zero_line_witnesses=tuple(witnesses_kept),
        pi_line_connected=connected,
        pi_line_points=tuple(on_pi),
        pi_line_gap=max_gap,
        contains_half_pi=half_pi,
    )


def _connected_at_scale(points, scale: float) -> tuple[bool, float]:
    """Single-chain test: union of balls of the given radius is connected."""
    if len(points) <= 1:
        return True, 0.0
    remaining = list(range(len(points)))
    component = {remaining.pop(0)}
    grew = True
    while grew and remaining:
        grew = False
        for idx in list(remaining):
            if any(pillowcase_distance(points[idx], points[c]) <= scale
                   for c in component):
                component.add(idx)
                remaining.remove(idx)
                grew = True
    if not remaining:
        return True, 0.0
    gap = min(pillowcase_distance(points[i], points[c])
              for i in remaining for c in component)
    return False, gap


@dataclass(frozen=True)
class AvoidingCurveReport:
    """Checks for a closed curve to qualify as slope-p avoiding.

    The curve must be essential, stay off the corners (0,0) and (pi,0),
    meet both horizontal lines beta = 0 and beta = pi, and touch the lines
    p*alpha + beta = 0 mod pi only at points (k pi/p, 0) with 0 < k < p.
    When a partner curve is supplied, transversality of curve versus
    sigma_p(partner) is checked at the shared points (2k pi/p, 0).
    """

    p: int
    essential: int
    avoids_corners: bool
    meets_beta_zero: bool
    meets_beta_pi: bool
    touch_points: tuple[PillowcasePoint, ...]
    disallowed_touches: tuple[PillowcasePoint, ...]
    passes: bool
    shared_transversal: tuple[tuple[PillowcasePoint, bool], ...] = ()


def p_avoiding_certificate(curve: PillowcasePolyline, p: int,
                           partner: PillowcasePolyline | None = None,
                           tol: float = 1e-6) -> AvoidingCurveReport:
    """Certify (or refute) that a closed curve is slope-p avoiding."""
    if not curve.closed:
        raise ValueError("certificate needs a closed curve")
    if not _is_odd_prime(p):
        raise ValueError("p must be an odd prime >= 3")
    ess = essential_class(curve)
    corners = (canonicalize(0.0, 0.0), canonicalize(math.pi, 0.0))
    avoids = all(curve.min_distance_to(c) > tol for c in corners)
    meets0 = _meets_line(curve, 0.0, 1.0, 0.0, tol)
    meets_pi = _meets_line(curve, 0.0, 1.0, math.pi, tol)
    touches = _line_touch_points(curve, p)
    allowed, disallowed = [], []
    for pt in touches:
        if line_offset(pt, 0.0, 1.0, 0.0) < tol and _is_allowed_touch(pt, p, tol):
            allowed.append(pt)
        else:
            disallowed.append(pt)
    shared = []
    if partner is not None:
        image = PillowcasePolyline(
            tuple(sigma_p(p, v) for v in partner.vertices), closed=partner.closed)
        for k in range(1, (p - 1) // 2 + 1):
            a_k = canonicalize(2 * k * math.pi / p, 0.0)
            if curve.min_distance_to(a_k) < tol and partner.min_distance_to(a_k) < tol:
                trans = any(
                    t and pillowcase_distance(pt, a_k) < 10 * tol
                    for (pt, t) in polyline_intersections(curve, image))
                shared.append((a_k, trans))
    passes = (ess != 0 and avoids and meets0 and meets_pi and not disallowed)
    return AvoidingCurveReport(
        p=p, essential=ess, avoids_corners=avoids,
        meets_beta_zero=meets0, meets_beta_pi=meets_pi,
        touch_points=tuple(allowed), disallowed_touches=tuple(disallowed),
        passes=passes, shared_transversal=tuple(shared))


def _meets_line(curve: PillowcasePolyline, ca, cb, target, tol) -> bool:
    for v in curve.vertices:
        if line_offset(v, ca, cb, target) < tol:
            return True
    # check segment crossings of the line as well
    for (x1, y1), (x2, y2) in curve.lifted_segments():
        f1 = ca * x1 + cb * y1 - target
        f2 = ca * x2 + cb * y2 - target
        k_lo = math.ceil(min(f1, f2) / TWO_PI)
        k_hi = math.floor(max(f1, f2) / TWO_PI)
        if k_hi >= k_lo:
            return True
    return False


def _line_touch_points(curve: PillowcasePolyline, p: int):
    """Points of the curve on the lines p*alpha + beta = 0 mod pi."""
    hits = []
    for (x1, y1), (x2, y2) in curve.lifted_segments():
        f1 = p * x1 + y1
        f2 = p * x2 + y2
        lo, hi = min(f1, f2), max(f1, f2)
        k_lo = math.ceil(lo / math.pi - 1e-9)
        k_hi = math.floor(hi / math.pi + 1e-9)
        for k in range(k_lo, k_hi + 1):
            target = math.pi * k
            if abs(f2 - f1) < 1e-15:
                if abs(f1 - target) < 1e-9:
                    hits.append(canonicalize(x1, y1))
                    hits.append(canonicalize(x2, y2))
                continue
            t = (target - f1) / (f2 - f1)
            if -1e-9 <= t <= 1 + 1e-9:
                hits.append(canonicalize(x1 + t * (x2 - x1), y1 + t * (y2 - y1)))
    kept = []
    for pt in hits:
        if not any(pillowcase_distance(pt, q) < 1e-6 for q in kept):
            kept.append(pt)
    return kept


def _is_allowed_touch(pt: PillowcasePoint, p: int, tol: float) -> bool:
    for k in range(1, p):
        if pillowcase_distance(pt, canonicalize(k * math.pi / p, 0.0)) < 10 * tol:
            return True
    return False
