"""The pillowcase orbifold: canonical coordinates, involutions, polylines.

The pillowcase is the quotient of the torus (R/2piZ)^2 by the hyperelliptic
involution (a, b) ~ (-a, -b).  Canonical representatives live in
[0, pi] x [0, 2pi), with the extra edge folds (0, b) ~ (0, 2pi - b) and
(pi, b) ~ (pi, 2pi - b).  Polyline segments are short geodesics in the flat
metric, computed on lifts to the plane and folded back; this reduces curve
intersection and winding computations to planar segment arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi

#: absolute angle tolerance for all pillowcase comparisons
ANGLE_TOL = 1e-9

#: snap-to-edge width applied during canonicalization; keeps exact images of
#: the corner points bitwise exact despite float remainders
_SNAP = 1e-12


class DegenerateCurveError(ValueError):
    """Curve passes through a forbidden marked point within tolerance."""


def _mod_2pi(x: float) -> float:
    y = math.fmod(x, TWO_PI)
    if y < 0.0:
        y += TWO_PI
    if y >= TWO_PI or TWO_PI - y < _SNAP:
        y = 0.0
    elif y < _SNAP:
        y = 0.0
    elif abs(y - math.pi) < _SNAP:
        y = math.pi
    return y


@dataclass(frozen=True, order=True)
class PillowcasePoint:
    """Canonical coordinate pair; construct via canonicalize()."""

    alpha: float
    beta: float

    def as_tuple(self) -> tuple[float, float]:
        return (self.alpha, self.beta)

    def is_close(self, other: "PillowcasePoint", tol: float = ANGLE_TOL) -> bool:
        return pillowcase_distance(self, other) <= tol

    def __str__(self):
        return f"({self.alpha:.6f}, {self.beta:.6f})"


def canonicalize(alpha_raw: float, beta_raw: float) -> PillowcasePoint:
    """Unique canonical representative of an angle pair; idempotent and total.

    Values within 1e-12 of the lattice pi Z are snapped onto it so that the
    corner and marked points reproduce exactly under the involutions.
    """
    if not (math.isfinite(alpha_raw) and math.isfinite(beta_raw)):
        raise ValueError("angles must be finite")
    a = _mod_2pi(alpha_raw)
    b = _mod_2pi(beta_raw)
    if a > math.pi:
        a = TWO_PI - a
        b = _mod_2pi(-b)
    if (a == 0.0 or a == math.pi) and b > math.pi:
        b = TWO_PI - b
    return PillowcasePoint(a, b)


#: marked points of the pillowcase
P_POINT = canonicalize(0.0, math.pi)
Q_POINT = canonicalize(math.pi, math.pi)

_ODD_PRIME_LIMIT = 10**6


def _is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def apply_involution(kind: str, pt: PillowcasePoint, p: int | None = None) -> PillowcasePoint:
    """One of the pillowcase involutions.

    sigma:   (a, b) -> (-a, 2a + b)
    tau:     (a, b) -> (pi - a, 2pi - b)
    sigma_p: (a, b) -> (-a, pa + b)   for an odd prime p
    """
    a, b = pt.alpha, pt.beta
    if kind == "sigma":
        return canonicalize(-a, 2.0 * a + b)
    if kind == "tau":
        return canonicalize(math.pi - a, TWO_PI - b)
    if kind == "sigma_p":
        if p is None or not _is_odd_prime(p):
            raise ValueError(f"sigma_p needs an odd prime, got {p}")
        return canonicalize(-a, p * a + b)
    raise ValueError(f"unknown involution kind: {kind}")


def sigma(pt: PillowcasePoint) -> PillowcasePoint:
    return apply_involution("sigma", pt)


def tau(pt: PillowcasePoint) -> PillowcasePoint:
    return apply_involution("tau", pt)


def sigma_p(p: int, pt: PillowcasePoint) -> PillowcasePoint:
    return apply_involution("sigma_p", pt, p=p)


@dataclass(frozen=True)
class GluingMatrix:
    """Orientation-reversing torus gluing: mu1 = a mu2 + b lam2, lam1 = p mu2 + c lam2.

    The determinant a*c - b*p must be -1.
    """

    a: int
    b: int
    p: int
    c: int

    def __post_init__(self):
        for v in (self.a, self.b, self.p, self.c):
            if not isinstance(v, int):
                raise ValueError("gluing entries must be integers")
        if self.det() != -1:
            raise ValueError(f"gluing determinant must be -1, got {self.det()}")

    def det(self) -> int:
        return self.a * self.c - self.b * self.p

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (self.p, self.c))

    def inverse(self) -> "GluingMatrix":
        # adj/det with det = -1
        return GluingMatrix(a=-self.c, b=self.b, p=self.p, c=-self.a)

    @classmethod
    def swap(cls) -> "GluingMatrix":
        """mu1 <-> lam2, lam1 <-> mu2 (splice gluing)."""
        return cls(0, 1, 1, 0)

    @classmethod
    def skew(cls, p: int = 2) -> "GluingMatrix":
        """mu1 ~ mu2^-1, lam1 ~ mu2^p lam2."""
        return cls(-1, 0, p, 1)


def apply_integer_matrix(rows, pt: PillowcasePoint) -> PillowcasePoint:
    """Linear action of an integer 2x2 matrix on angle pairs, canonicalized.

    Any unimodular integer matrix descends to the pillowcase since it
    commutes with negation and preserves the 2pi lattice.
    """
    (a, b), (p, c) = rows
    if abs(a * c - b * p) != 1:
        raise ValueError("matrix must be unimodular")
    return canonicalize(a * pt.alpha + b * pt.beta, p * pt.alpha + c * pt.beta)


def induced_boundary_transform(g: GluingMatrix, pt: PillowcasePoint) -> PillowcasePoint:
    """Pillowcase map induced by a gluing on peripheral holonomy angles.

    Takes angle coordinates for the (mu2, lam2) basis to coordinates for
    (mu1, lam1).  The skew gluing (-1, 0, 2, 1) specializes to sigma.
    """
    return apply_integer_matrix(g.rows(), pt)


def multiply_matrices(rows1, rows2):
    (a1, b1), (c1, d1) = rows1
    (a2, b2), (c2, d2) = rows2
    return ((a1 * a2 + b1 * c2, a1 * b2 + b1 * d2),
            (c1 * a2 + d1 * c2, c1 * b2 + d1 * d2))


# ---------------------------------------------------------------------------
# distances and lifts

def _reps_near(pt: PillowcasePoint, x: float, y: float):
    """Plane lifts of pt within one lattice step of (x, y), both signs."""
    out = []
    for s in (1.0, -1.0):
        ax, ay = s * pt.alpha, s * pt.beta
        m0 = round((x - ax) / TWO_PI)
        n0 = round((y - ay) / TWO_PI)
        for dm in (-1, 0, 1):
            for dn in (-1, 0, 1):
                out.append((ax + TWO_PI * (m0 + dm), ay + TWO_PI * (n0 + dn)))
    return out


def pillowcase_distance(p1: PillowcasePoint, p2: PillowcasePoint) -> float:
    """Flat orbifold metric distance.

    The deck group translates the two coordinates independently, so the
    minimum over lattice shifts is the wrapped difference per coordinate,
    leaving only the sign choice.
    """
    x, y = p1.alpha, p1.beta
    if x == p2.alpha and y == p2.beta:
        return 0.0
    best = math.inf
    for s in (1.0, -1.0):
        dx = math.remainder(x - s * p2.alpha, TWO_PI)
        dy = math.remainder(y - s * p2.beta, TWO_PI)
        d = math.hypot(dx, dy)
        if d < best:
            best = d
    return best


def nearest_lift(pt: PillowcasePoint, anchor: tuple[float, float]) -> tuple[float, float]:
    """Plane lift of pt closest to the anchor point; deterministic on ties."""
    x, y = anchor
    best = None
    best_d = math.inf
    for s in (1.0, -1.0):
        ax, ay = s * pt.alpha, s * pt.beta
        dx = math.remainder(x - ax, TWO_PI)
        dy = math.remainder(y - ay, TWO_PI)
        d = math.hypot(dx, dy)
        if d < best_d - 1e-15:
            best_d = d
            best = (x - dx, y - dy)
    return best


# ---------------------------------------------------------------------------
# polylines

@dataclass(frozen=True)
class PillowcasePolyline:
    """Ordered canonical vertices joined by short flat geodesics."""

    vertices: tuple[PillowcasePoint, ...]
    closed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if len(self.vertices) < 2:
            raise ValueError("polyline needs at least two vertices")

    def __len__(self):
        return len(self.vertices)

    def segment_count(self) -> int:
        return len(self.vertices) - 1 + (1 if self.closed else 0)

    def lifted_vertices(self) -> list[tuple[float, float]]:
        """Continuous plane lift starting at the first vertex's canonical rep.

        For a closed polyline the returned list has one extra point: the
        lift of the first vertex reached after going all the way around
        (a deck translate of the start).
        """
        first = self.vertices[0]
        lifts = [(first.alpha, first.beta)]
        seq = list(self.vertices[1:])
        if self.closed:
            seq.append(first)
        for v in seq:
            lifts.append(nearest_lift(v, lifts[-1]))
        return lifts

    def lifted_segments(self) -> list[tuple[tuple[float, float], tuple[float, float]]]:
        lifts = self.lifted_vertices()
        return list(zip(lifts[:-1], lifts[1:]))

    def length(self) -> float:
        return sum(math.hypot(b[0] - a[0], b[1] - a[1]) for a, b in self.lifted_segments())

    def reversed(self) -> "PillowcasePolyline":
        return PillowcasePolyline(tuple(reversed(self.vertices)), closed=self.closed)

    def min_distance_to(self, pt: PillowcasePoint) -> float:
        """Distance from the marked point to the polyline's segments."""
        best = math.inf
        for (x1, y1), (x2, y2) in self.lifted_segments():
            for (px, py) in _reps_near(pt, 0.5 * (x1 + x2), 0.5 * (y1 + y2)):
                best = min(best, _point_segment_distance(px, py, x1, y1, x2, y2))
        return best


def polyline(points, closed: bool = False) -> PillowcasePolyline:
    """Build a polyline, canonicalizing raw (alpha, beta) pairs."""
    verts = []
    for p in points:
        if isinstance(p, PillowcasePoint):
            verts.append(p)
        else:
            verts.append(canonicalize(p[0], p[1]))
    return PillowcasePolyline(tuple(verts), closed=closed)


def _point_segment_distance(px, py, x1, y1, x2, y2) -> float:
    dx, dy = x2 - x1, y2 - y1
    L2 = dx * dx + dy * dy
    if L2 == 0.0:
        return math.hypot(px - x1, py - y1)
    t = max(0.0, min(1.0, ((px - x1) * dx + (py - y1) * dy) / L2))
    return math.hypot(px - (x1 + t * dx), py - (y1 + t * dy))


# ---------------------------------------------------------------------------
# intersections

def _segment_intersection(a1, a2, b1, b2, tol: float):
    """Intersections of two plane segments.

    Returns a list of (x, y, transversal, t_a, t_b).  Collinear overlaps
    report the midpoint of the overlap interval with transversal=False.
    """
    ax, ay = a1
    bx, by = a2
    cx, cy = b1
    dx, dy = b2
    r = (bx - ax, by - ay)
    s = (dx - cx, dy - cy)
    rlen = math.hypot(*r)
    slen = math.hypot(*s)
    if rlen == 0.0 or slen == 0.0:
        return []
    cross = r[0] * s[1] - r[1] * s[0]
    qp = (cx - ax, cy - ay)
    qpxr = qp[0] * r[1] - qp[1] * r[0]
    unit_cross = cross / (rlen * slen)
    if abs(unit_cross) <= tol:
        # parallel: check collinearity then overlap
        if abs(qpxr) / rlen > tol:
            return []
        t0 = (qp[0] * r[0] + qp[1] * r[1]) / (rlen * rlen)
        t1 = t0 + (s[0] * r[0] + s[1] * r[1]) / (rlen * rlen)
        lo, hi = min(t0, t1), max(t0, t1)
        lo = max(lo, 0.0)
        hi = min(hi, 1.0)
        if hi < lo - tol:
            return []
        tm = 0.5 * (lo + hi)
        x, y = ax + tm * r[0], ay + tm * r[1]
        tb_num = ((x - cx) * s[0] + (y - cy) * s[1]) / (slen * slen)
        return [(x, y, False, tm, tb_num)]
    t = (qp[0] * s[1] - qp[1] * s[0]) / cross
    u = qpxr / cross
    pad_a = tol / rlen
    pad_b = tol / slen
    if -pad_a <= t <= 1.0 + pad_a and -pad_b <= u <= 1.0 + pad_b:
        x, y = ax + t * r[0], ay + t * r[1]
        return [(x, y, True, t, u)]
    return []


def _deck_images(seg, xlo, xhi, ylo, yhi):
    """Deck-group images of a plane segment meeting the given bounding box."""
    (x1, y1), (x2, y2) = seg
    out = []
    for sgn in (1.0, -1.0):
        u1, v1 = sgn * x1, sgn * y1
        u2, v2 = sgn * x2, sgn * y2
        sxlo, sxhi = min(u1, u2), max(u1, u2)
        sylo, syhi = min(v1, v2), max(v1, v2)
        m_lo = math.floor((xlo - sxhi) / TWO_PI)
        m_hi = math.ceil((xhi - sxlo) / TWO_PI)
        n_lo = math.floor((ylo - syhi) / TWO_PI)
        n_hi = math.ceil((yhi - sylo) / TWO_PI)
        for m in range(m_lo, m_hi + 1):
            for n in range(n_lo, n_hi + 1):
                out.append(((u1 + TWO_PI * m, v1 + TWO_PI * n),
                            (u2 + TWO_PI * m, v2 + TWO_PI * n)))
    return out


def detailed_intersections(c1: PillowcasePolyline, c2: PillowcasePolyline,
                           tol: float = 1e-9):
    """All orbifold intersections with segment indices and parameters.

    Returns a list of (point, transversal, i1, t1, i2, t2), deduplicated by
    orbifold distance.  Used by polyline_intersections and curve splitting.
    """
    segs1 = c1.lifted_segments()
    segs2 = c2.lifted_segments()
    found = []
    for i1, seg_a in enumerate(segs1):
        (x1, y1), (x2, y2) = seg_a
        xlo, xhi = min(x1, x2) - tol, max(x1, x2) + tol
        ylo, yhi = min(y1, y2) - tol, max(y1, y2) + tol
        for i2, seg_b in enumerate(segs2):
            for img in _deck_images(seg_b, xlo, xhi, ylo, yhi):
                for (x, y, trans, ta, tb) in _segment_intersection(
                        seg_a[0], seg_a[1], img[0], img[1], tol):
                    pt = canonicalize(x, y)
                    found.append((pt, trans, i1, ta, i2, tb))
    # dedup by orbifold distance, transversal crossings take precedence
    found.sort(key=lambda rec: (rec[0].alpha, rec[0].beta, not rec[1]))
    kept = []
    for rec in found:
        dup = False
        for other in kept:
            if rec[0].is_close(other[0], tol=1e-7) and rec[2] == other[2] and rec[4] == other[4]:
                dup = True
                break
        if not dup:
            kept.append(rec)
    return kept


def polyline_intersections(c1: PillowcasePolyline, c2: PillowcasePolyline,
                           tol: float = 1e-9):
    """Intersection points of two polylines with transversality flags.

    Transversality means the unit segment directions have cross product
    above tol; tangential overlaps are reported as non-transversal with a
    representative point of the overlap interval.
    """
    out = []
    for (pt, trans, *_rest) in detailed_intersections(c1, c2, tol=tol):
        dup = False
        for (q, qtrans) in out:
            if pt.is_close(q, tol=1e-7) and trans == qtrans:
                dup = True
                break
        if not dup:
            out.append((pt, trans))
    return out


# ---------------------------------------------------------------------------
# essential class

#: reference arc from P to Q used for the winding count
_REFERENCE_EPSILONS = (1e-8, 2.3e-8, 3.7e-8, 5.1e-8, 7.3e-8, 1.1e-7, 1e-6, 1e-5)


def essential_class(curve: PillowcasePolyline, marked_tol: float = 1e-7) -> int:
    """Signed crossings with the arc from P to Q along {beta = pi}.

    The count is the homology class of the curve in the twice-punctured
    pillowcase; it is nonzero iff the curve separates P from Q.  Sign
    convention: crossing the arc upward (beta increasing, in canonical
    coordinates) counts +1.  The reference arc is perturbed by a tiny
    deterministic epsilon so crossings at vertices are unambiguous; curves
    passing within marked_tol of P or Q raise DegenerateCurveError.
    """
    if not curve.closed:
        raise ValueError("essential_class needs a closed polyline")
    for marked in (P_POINT, Q_POINT):
        if curve.min_distance_to(marked) <= marked_tol:
            raise DegenerateCurveError(f"curve passes through marked point {marked}")
    segs = curve.lifted_segments()
    for eps in _REFERENCE_EPSILONS:
        ok = True
        for (x1, y1), (x2, y2) in segs:
            for y in (y1, y2):
                frac = math.remainder(y - (math.pi + eps), TWO_PI)
                if abs(frac) < 1e-11:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return _count_crossings(segs, eps)
    raise DegenerateCurveError("could not find a clean reference arc offset")


def _count_crossings(segs, eps: float) -> int:
    total = 0
    for (x1, y1), (x2, y2) in segs:
        if y1 == y2:
            continue
        lo, hi = min(y1, y2), max(y1, y2)
        k_lo = math.ceil((lo - math.pi - eps) / TWO_PI)
        k_hi = math.floor((hi - math.pi - eps) / TWO_PI)
        for k in range(k_lo, k_hi + 1):
            h = math.pi + eps + TWO_PI * k
            if not (lo < h < hi):
                continue
            t = (h - y1) / (y2 - y1)
            x = x1 + t * (x2 - x1)
            upward = 1 if y2 > y1 else -1
            # arc orientation in the plane flips on odd half-period strips
            xm = math.fmod(x, TWO_PI)
            if xm < 0:
                xm += TWO_PI
            orient = 1 if xm < math.pi else -1
            total += upward * orient
    return total


def line_offset(pt: PillowcasePoint, coef_alpha: float, coef_beta: float,
                target: float) -> float:
    """Distance of coef_a*alpha + coef_b*beta from target, mod 2pi.

    Well defined on the pillowcase for integer coefficients since the
    combination flips sign with the involution.
    """
    val = coef_alpha * pt.alpha + coef_beta * pt.beta - target
    return abs(math.remainder(val, TWO_PI))


# ---------------------------------------------------------------------------
# serialization

def polyline_to_csv(curve: PillowcasePolyline) -> str:
    """CSV rows of canonical alpha,beta vertex coordinates."""
    lines = ["alpha,beta"]
    for v in curve.vertices:
        lines.append(f"{v.alpha!r},{v.beta!r}")
    if curve.closed:
        v = curve.vertices[0]
        lines.append(f"{v.alpha!r},{v.beta!r}")
    return "\n".join(lines) + "\n"
