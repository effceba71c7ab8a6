"""Numerical engine: sweep representation varieties into the pillowcase.

The core solver is a batched Levenberg-Marquardt iteration on the product
of unit 3-spheres (one per generator), with quaternion renormalization
after every step.  Residuals are quaternion differences rho(word) - target
for the relators and for the meridian constraint rho(mu) = e^{i alpha}.
Random restarts explore the basins; solutions are deduplicated by their
conjugation invariants (generator and pair-product traces plus the
meridian angle).
"""

from __future__ import annotations

import itertools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .geometry import (DegenerateCurveError, PillowcasePoint,
                       PillowcasePolyline, canonicalize, detailed_intersections,
                       essential_class, line_offset, pillowcase_distance,
                       TWO_PI, _reps_near)
from .homology import smith_normal_form, abelianization
from .presentations import (GroupPresentation, KnotExteriorModel, Word,
                            concat, pow_word)
from .su2 import (Representation, UnitQuaternion, boundary_angles,
                  evaluate_word, irreducibility_gap, relator_residual)

__all__ = [
    "SolverConfig", "PillowcaseImage", "ImagePoint", "LiftResult",
    "solve_at_meridian_angle", "sample_pillowcase_image", "reducible_lines",
    "lift_to_cut_open", "extract_essential_curve",
    "find_surgery_representation", "corner_diagnostics", "refine_representation",
]


@dataclass(frozen=True)
class SolverConfig:
    """Tunable solver parameters; defaults suit the built-in models."""

    tol: float = 1e-8
    restarts: int = 20
    seed: int = 0
    resolution: int = 200
    min_gap: float = 0.1
    irreducible_gap: float = 1e-4
    max_iter: int = 60
    polish_steps: int = 5
    dedup_tol: float = 1e-6
    chain_factor: float = 8.0
    threads: int = 1
    deterministic: bool = True

    @classmethod
    def from_dict(cls, data: dict) -> "SolverConfig":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown solver config keys: {sorted(extra)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path: str) -> "SolverConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


# ---------------------------------------------------------------------------
# batched quaternion arithmetic

def _qmul(a, b):
    w1, x1, y1, z1 = a[:, 0], a[:, 1], a[:, 2], a[:, 3]
    w2, x2, y2, z2 = b[:, 0], b[:, 1], b[:, 2], b[:, 3]
    return np.stack([
        w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
        w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
        w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
        w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
    ], axis=1)


_CONJ = np.array([1.0, -1.0, -1.0, -1.0])


def _eval_batch(params, word):
    """rho(word) for a batch of parameter stacks, normalized at the end.

    params has shape (B, n, 4).  Overall scale factors cancel after the
    final normalization, so the residual is invariant along radial
    directions of the ambient parametrization.
    """
    B = params.shape[0]
    out = np.zeros((B, 4))
    out[:, 0] = 1.0
    for k in word:
        g = params[:, abs(k) - 1, :]
        out = _qmul(out, g if k > 0 else g * _CONJ)
    return out / np.linalg.norm(out, axis=1, keepdims=True)


def _residuals(params, words, targets):
    cols = [_eval_batch(params, w) - t for w, t in zip(words, targets)]
    return np.concatenate(cols, axis=1)


def _renorm(params):
    return params / np.linalg.norm(params, axis=2, keepdims=True)


def _lm_minimize(words, targets, params0, tol, max_iter, polish_steps):
    """Batched LM on the word system; returns (params, per_item_max_residual)."""
    params = _renorm(params0.copy())
    B, n, _ = params.shape
    npar = 4 * n
    m = 4 * len(words)
    lam = np.full(B, 1e-3)
    fd = 1e-7
    eye = np.eye(npar)

    def cost_of(p):
        F = _residuals(p, words, targets)
        return F, np.einsum("bm,bm->b", F, F)

    F, cost = cost_of(params)
    target2 = (0.25 * tol) ** 2
    polish_left = np.full(B, polish_steps, dtype=int)
    for _ in range(max_iter + polish_steps):
        converged = cost <= target2
        dead = lam > 1e9
        done = (converged & (polish_left <= 0)) | (dead & ~converged)
        active = ~done
        if not active.any():
            break
        idx = np.nonzero(active)[0]
        sub = params[idx]
        Fs = F[idx]
        J = np.empty((len(idx), m, npar))
        flat = sub.reshape(len(idx), npar)
        for j in range(npar):
            pert = flat.copy()
            pert[:, j] += fd
            Fp = _residuals(pert.reshape(len(idx), n, 4), words, targets)
            J[:, :, j] = (Fp - Fs) / fd
        lam_sub = np.where(converged[idx], 1e-12, lam[idx])
        JTJ = np.einsum("bmp,bmq->bpq", J, J)
        JTF = np.einsum("bmp,bm->bp", J, Fs)
        A = JTJ + lam_sub[:, None, None] * eye
        try:
            delta = -np.linalg.solve(A, JTF[..., None])[..., 0]
        except np.linalg.LinAlgError:
            delta = -np.einsum("bpq,bq->bp", np.linalg.pinv(A), JTF)
        trial = _renorm((flat + delta).reshape(len(idx), n, 4))
        Ft, cost_t = cost_of(trial)
        better = cost_t < cost[idx]
        for local, gi in enumerate(idx):
            if converged[gi]:
                polish_left[gi] -= 1
                if better[local]:
                    params[gi] = trial[local]
                    F[gi] = Ft[local]
                    cost[gi] = cost_t[local]
                continue
            if better[local]:
                params[gi] = trial[local]
                F[gi] = Ft[local]
                cost[gi] = cost_t[local]
                lam[gi] = max(lam[gi] * 0.35, 1e-12)
            else:
                lam[gi] = lam[gi] * 8.0
    max_res = np.empty(B)
    for b in range(B):
        worst = 0.0
        for wi in range(len(words)):
            seg = F[b, 4 * wi:4 * wi + 4]
            worst = max(worst, float(np.linalg.norm(seg)))
        max_res[b] = worst
    return params, max_res


def _rep_from_params(row) -> Representation:
    return Representation(tuple(
        UnitQuaternion.from_components(*row[i]) for i in range(row.shape[0])))


def _invariant_signature(rep: Representation, pres: GroupPresentation):
    """Conjugation invariants: generator and pair-product traces, meridian angle."""
    vals = [q.w for q in rep.images]
    n = len(rep.images)
    for i in range(n):
        for j in range(i + 1, n):
            vals.append((rep.images[i] * rep.images[j]).w)
    vals.append(evaluate_word(rep, pres.meridian).w)
    vals.append(abs(evaluate_word(rep, pres.meridian).x))
    return tuple(vals)


def solve_at_meridian_angle(pres: GroupPresentation, alpha: float,
                            config: SolverConfig | None = None,
                            _seed_extra: int | None = None) -> list[Representation]:
    """Representations with rho(meridian) = e^{i alpha}, up to conjugation.

    Random restarts of the batched LM solver, accepting relator residuals
    below config.tol and deduplicating by conjugation invariants.  An empty
    list means none were found, which is evidence rather than proof.
    """
    config = config or SolverConfig()
    if not (0.0 <= alpha <= math.pi + 1e-12):
        raise ValueError("alpha must lie in [0, pi]")
    n = pres.generator_count
    if n == 0:
        return [Representation(())] if abs(alpha) < 1e-12 else []
    words = list(pres.relators) + [pres.meridian]
    one = np.array([1.0, 0.0, 0.0, 0.0])
    targets = [one] * len(pres.relators) + [
        np.array([math.cos(alpha), math.sin(alpha), 0.0, 0.0])]
    key = _seed_extra if _seed_extra is not None else int(round(alpha * 1e9))
    rng = np.random.default_rng([config.seed, key & 0x7FFFFFFF])
    params0 = rng.standard_normal((config.restarts, n, 4))
    params, max_res = _lm_minimize(words, targets, params0, config.tol,
                                   config.max_iter, config.polish_steps)
    accepted: list[tuple[tuple, Representation]] = []
    for b in range(params.shape[0]):
        if max_res[b] >= config.tol:
            continue
        rep = _rep_from_params(params[b])
        if relator_residual(rep, pres) >= config.tol:
            continue
        sig = _invariant_signature(rep, pres)
        if any(all(abs(u - v) < config.dedup_tol for u, v in zip(sig, other))
               for other, _ in accepted):
            continue
        accepted.append((sig, rep))
    reps = [rep for _, rep in accepted]
    reps.sort(key=lambda r: (-irreducibility_gap(r), _invariant_signature(r, pres)))
    return reps


def refine_representation(pres: GroupPresentation, seed_rep: Representation,
                          config: SolverConfig | None = None,
                          extra_relators: tuple[Word, ...] = ()) -> Representation | None:
    """Polish a nearby representation of pres (plus extra relators) by LM."""
    config = config or SolverConfig()
    working = pres
    for w in extra_relators:
        working = working.with_relator(w)
    words = list(working.relators)
    if not words:
        return seed_rep
    one = np.array([1.0, 0.0, 0.0, 0.0])
    targets = [one] * len(words)
    params0 = np.array([[[q.w, q.x, q.y, q.z] for q in seed_rep.images]])
    params, max_res = _lm_minimize(words, targets, params0, config.tol,
                                   config.max_iter, config.polish_steps)
    if max_res[0] < config.tol:
        return _rep_from_params(params[0])
    return None


# ---------------------------------------------------------------------------
# pillowcase images

@dataclass(frozen=True)
class ImagePoint:
    point: PillowcasePoint
    witness: Representation
    gap: float


@dataclass(frozen=True)
class PillowcaseImage:
    """Sampled boundary image of a representation variety.

    points carries every witness found (never silently dropped); arcs are
    the chained curves plus the analytically enumerated reducible lines.
    """

    model: KnotExteriorModel
    resolution: int
    grid_step: float
    chain_threshold: float
    points: tuple[ImagePoint, ...]
    arcs: tuple[PillowcasePolyline, ...]
    isolated: tuple[ImagePoint, ...] = ()

    def irreducible_points(self, gap_threshold: float = 1e-4):
        return [p for p in self.points if p.gap > gap_threshold]

    def transform_arcs(self, mapper) -> tuple[PillowcasePolyline, ...]:
        """Apply a pointwise pillowcase map to every arc."""
        out = []
        for arc in self.arcs:
            out.append(PillowcasePolyline(
                tuple(mapper(v) for v in arc.vertices), closed=arc.closed))
        return tuple(out)


def reducible_lines(model: KnotExteriorModel,
                    samples_per_turn: int = 96) -> list[PillowcasePolyline]:
    """Boundary image of the diagonal (abelian) representations, exactly.

    Diagonal representations are angle assignments theta with
    E theta = 0 mod 2pi for the relator exponent matrix E; solving by Smith
    normal form yields finitely many lines parametrized by the free angle,
    one per torsion character that acts on the boundary.
    """
    pres = model.presentation
    g = pres.generator_count
    ab = abelianization(pres)
    E = [[ab.matrix.entries[i][j] for i in range(g)]
         for j in range(ab.matrix.cols)]  # one row per relator
    if not E:
        E = [[0] * g]
    D, U, V = smith_normal_form(E)
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    torsion_idx = [i for i, d in enumerate(diag) if d >= 2]
    free_idx = [i for i in range(g) if i >= len(diag) or diag[i] == 0]
    mu = ab.meridian_class
    lam = ab.longitude_class
    # angle coefficients in psi coordinates: theta = V psi
    mu_psi = [sum(mu[i] * V[i][j] for i in range(g)) for j in range(g)]
    lam_psi = [sum(lam[i] * V[i][j] for i in range(g)) for j in range(g)]
    if len(free_idx) != 1:
        # not a knot-exterior shape; fall back to the nullhomologous line
        if all(v == 0 for v in lam):
            return [_line_polyline(1, 0, 0.0, 0.0, samples_per_turn)]
        raise ValueError("model does not have a single free H1 coordinate")
    f = free_idx[0]
    lines = []
    seen = set()
    choices = [range(diag[i]) for i in torsion_idx]
    for combo in itertools.product(*choices):
        c_mu = sum(mu_psi[torsion_idx[t]] * (TWO_PI * k / diag[torsion_idx[t]])
                   for t, k in enumerate(combo))
        c_lam = sum(lam_psi[torsion_idx[t]] * (TWO_PI * k / diag[torsion_idx[t]])
                    for t, k in enumerate(combo))
        a_coef = mu_psi[f]
        b_coef = lam_psi[f]
        probe = tuple(
            canonicalize(a_coef * t + c_mu, b_coef * t + c_lam).as_tuple()
            for t in (0.0, 1.0, 2.0, 3.0))
        key = tuple((round(x, 9), round(y, 9)) for x, y in probe)
        if key in seen:
            continue
        seen.add(key)
        line = _line_polyline(a_coef, b_coef, c_mu, c_lam, samples_per_turn)
        if line is not None:
            lines.append(line)
    return lines


def _line_polyline(a_coef, b_coef, c_mu, c_lam, samples_per_turn):
    rate = max(abs(a_coef), abs(b_coef), 1)
    steps = int(samples_per_turn * rate)
    ts = np.linspace(0.0, TWO_PI, steps, endpoint=False)
    pts = [canonicalize(a_coef * t + c_mu, b_coef * t + c_lam) for t in ts]
    # collapse consecutive duplicates (constant lines in one coordinate)
    cleaned = [pts[0]]
    for p in pts[1:]:
        if pillowcase_distance(cleaned[-1], p) > 1e-12:
            cleaned.append(p)
    if len(cleaned) < 2:
        return None
    return PillowcasePolyline(tuple(cleaned), closed=True)


def _chain_points(records, threshold):
    """Greedy nearest-neighbor chaining of witness points into polylines."""
    pts = [r.point for r in records]
    n = len(pts)
    if n == 0:
        return [], []
    adj = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if pillowcase_distance(pts[i], pts[j]) < threshold:
                adj[i].append(j)
                adj[j].append(i)
    seen = [False] * n
    arcs = []
    isolated = []
    for start in range(n):
        if seen[start]:
            continue
        # collect the component
        comp = []
        stack = [start]
        seen[start] = True
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in adj[v]:
                if not seen[u]:
                    seen[u] = True
                    stack.append(u)
        if len(comp) == 1:
            isolated.append(records[comp[0]])
            continue

        def walk(start, pool):
            order = [start]
            left = set(pool) - {start}
            while left:
                last = order[-1]
                nxt = min(left, key=lambda j: (pillowcase_distance(pts[last], pts[j]), j))
                if pillowcase_distance(pts[last], pts[nxt]) > 3 * threshold:
                    break
                order.append(nxt)
                left.remove(nxt)
            return order, left

        # first walk finds one end of the chain, second walk spans it
        probe, _ = walk(min(comp), comp)
        order, remaining = walk(probe[-1], comp)
        for leftover in sorted(remaining):
            isolated.append(records[leftover])
        closed = (len(order) > 3 and
                  pillowcase_distance(pts[order[0]], pts[order[-1]]) < threshold)
        arcs.append(PillowcasePolyline(
            tuple(pts[i] for i in order), closed=closed))
    return arcs, isolated


def sample_pillowcase_image(model: KnotExteriorModel, resolution: int | None = None,
                            config: SolverConfig | None = None) -> PillowcaseImage:
    """Sweep the meridian angle over a uniform grid and image the solutions.

    Collects boundary angles of every solver solution, attaches the
    analytically enumerated reducible lines, and chains nearby numeric
    points into arcs (isolated points are reported separately).
    """
    config = config or SolverConfig()
    resolution = resolution or config.resolution
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    pres = model.presentation
    grid = np.linspace(0.0, math.pi, resolution)
    grid_step = float(grid[1] - grid[0])

    def solve_node(i):
        return solve_at_meridian_angle(pres, float(grid[i]), config, _seed_extra=i)

    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            all_sols = list(pool.map(solve_node, range(resolution)))
    else:
        all_sols = [solve_node(i) for i in range(resolution)]

    records = []
    for i, sols in enumerate(all_sols):
        for rep in sols:
            pt = boundary_angles(rep, pres)
            records.append(ImagePoint(point=pt, witness=rep,
                                      gap=irreducibility_gap(rep)))
    lines = [l for l in reducible_lines(model) if l is not None]
    # points sitting on an analytic line are kept as witnesses but do not
    # seed numeric arcs of their own
    def on_line(pt):
        return any(line.min_distance_to(pt) < 1e-6 for line in lines)

    chainable = [r for r in records if r.gap > config.irreducible_gap
                 or not on_line(r.point)]
    threshold = config.chain_factor * grid_step
    arcs, isolated = _chain_points(chainable, threshold)
    return PillowcaseImage(
        model=model,
        resolution=resolution,
        grid_step=grid_step,
        chain_threshold=threshold,
        points=tuple(records),
        arcs=tuple(arcs) + tuple(lines),
        isolated=tuple(isolated),
    )


# ---------------------------------------------------------------------------
# cut-open lift and essential curves

@dataclass(frozen=True)
class LiftResult:
    """Outcome of lifting an image off the pillowcase edge folds.

    The lift to [0, pi] x (R/2piZ) exists iff no image point sits on the
    edges alpha in {0, pi} away from beta = 0; violating witnesses mean the
    ambient manifold admits a non-abelian SU(2) representation, so they are
    reported rather than discarded.
    """

    ok: bool
    violations: tuple[ImagePoint, ...]
    image: PillowcaseImage | None


def lift_to_cut_open(img: PillowcaseImage, tol: float = 1e-6) -> LiftResult:
    violations = []
    for rec in img.points:
        a, b = rec.point.alpha, rec.point.beta
        on_edge = a < tol or a > math.pi - tol
        beta_zero = line_offset(rec.point, 0.0, 1.0, 0.0) < tol
        if on_edge and not beta_zero:
            violations.append(rec)
    for arc in img.arcs:
        for v in arc.vertices:
            on_edge = v.alpha < tol or v.alpha > math.pi - tol
            beta_zero = line_offset(v, 0.0, 1.0, 0.0) < tol
            if on_edge and not beta_zero:
                violations.append(ImagePoint(point=v, witness=Representation(()),
                                             gap=0.0))
                break
    if violations:
        return LiftResult(ok=False, violations=tuple(violations), image=None)
    return LiftResult(ok=True, violations=(), image=img)


def _split_polyline(curve: PillowcasePolyline, cuts):
    """Split at (segment_index, parameter) pairs; returns open sub-polylines.

    Cut parameters landing on a vertex split there; others insert a new
    vertex at the interpolated point.
    """
    lifts = curve.lifted_vertices()
    nseg = len(lifts) - 1
    params = []
    for seg, t in cuts:
        s = seg + min(max(t, 0.0), 1.0)
        s = min(max(s, 0.0), float(nseg))
        if abs(s - round(s)) < 1e-9:
            s = float(round(s))
        params.append(s)
    cut_params = [0.0, float(nseg)]
    for s in sorted(params):
        if all(abs(s - c) > 1e-9 for c in cut_params):
            cut_params.append(s)
    cut_params.sort()
    by_seg = {}
    for s in cut_params:
        if s != int(s):
            by_seg.setdefault(int(s), []).append(s - int(s))
    stations = []  # (global parameter, plane point)
    for i in range(nseg):
        x1, y1 = lifts[i]
        x2, y2 = lifts[i + 1]
        stations.append((float(i), (x1, y1)))
        for t in sorted(by_seg.get(i, [])):
            stations.append((i + t, (x1 + t * (x2 - x1), y1 + t * (y2 - y1))))
    stations.append((float(nseg), lifts[-1]))
    pieces = []
    for lo, hi in zip(cut_params[:-1], cut_params[1:]):
        verts = [pt for (s, pt) in stations if lo - 1e-12 <= s <= hi + 1e-12]
        if len(verts) < 2:
            continue
        canon = [canonicalize(x, y) for x, y in verts]
        cleaned = [canon[0]]
        for p in canon[1:]:
            if pillowcase_distance(cleaned[-1], p) > 1e-12:
                cleaned.append(p)
        if len(cleaned) >= 2:
            pieces.append(PillowcasePolyline(tuple(cleaned), closed=False))
    return pieces


def _project_endpoint_cuts(curves, node_tol):
    """Cuts where some curve's endpoint lands on another curve's interior."""
    cuts = {i: [] for i in range(len(curves))}
    endpoints = []
    for i, c in enumerate(curves):
        if not c.closed:
            endpoints.append(c.vertices[0])
            endpoints.append(c.vertices[-1])
    for j, c in enumerate(curves):
        segs = c.lifted_segments()
        for pt in endpoints:
            best = None
            for si, ((x1, y1), (x2, y2)) in enumerate(segs):
                for (px, py) in _reps_near(pt, 0.5 * (x1 + x2), 0.5 * (y1 + y2)):
                    dx, dy = x2 - x1, y2 - y1
                    L2 = dx * dx + dy * dy
                    if L2 == 0:
                        continue
                    t = ((px - x1) * dx + (py - y1) * dy) / L2
                    t = min(max(t, 0.0), 1.0)
                    d = math.hypot(px - (x1 + t * dx), py - (y1 + t * dy))
                    if d < node_tol and (best is None or d < best[0]):
                        best = (d, si, t)
            if best is not None:
                cuts[j].append((best[1], best[2]))
    return cuts


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, i):
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i, j):
        self.parent[self.find(i)] = self.find(j)


def _fundamental_cycles(n_nodes, edges):
    """Cycles of a multigraph: one per non-forest edge, via BFS forest paths."""
    adj = [[] for _ in range(n_nodes)]
    for ei, (u, v, _) in enumerate(edges):
        adj[u].append((v, ei))
        adj[v].append((u, ei))
    parent = [None] * n_nodes
    depth = [0] * n_nodes
    visited = [False] * n_nodes
    tree_edges = set()
    order = []
    for root in range(n_nodes):
        if visited[root]:
            continue
        visited[root] = True
        queue = [root]
        while queue:
            u = queue.pop(0)
            order.append(u)
            for (v, ei) in adj[u]:
                if not visited[v]:
                    visited[v] = True
                    parent[v] = (u, ei)
                    depth[v] = depth[u] + 1
                    tree_edges.add(ei)
                    queue.append(v)
    cycles = []
    for ei, (u, v, _) in enumerate(edges):
        if ei in tree_edges:
            continue
        if u == v:
            cycles.append([ei])
            continue
        pu, pv = u, v
        path_u, path_v = [], []
        while depth[pu] > depth[pv]:
            pnode, pedge = parent[pu]
            path_u.append(pedge)
            pu = pnode
        while depth[pv] > depth[pu]:
            pnode, pedge = parent[pv]
            path_v.append(pedge)
            pv = pnode
        while pu != pv:
            pnode, pedge = parent[pu]
            path_u.append(pedge)
            pu = pnode
            pnode, pedge = parent[pv]
            path_v.append(pedge)
            pv = pnode
        # walk u --ei--> v --path_v--> LCA --reversed path_u--> u
        cycles.append([ei] + path_v + path_u[::-1])
    return cycles


def _assemble_cycle(edge_ids, edges):
    """Concatenate edge paths around a cycle into one closed polyline."""
    if len(edge_ids) == 1:
        u, v, path = edges[edge_ids[0]]
        if u == v:
            return PillowcasePolyline(path.vertices, closed=True)
    # orient edges to walk the cycle
    verts = []
    # build node sequence
    first_u, first_v, _ = edges[edge_ids[0]]
    # determine starting node: the shared node of first and last edge
    last_u, last_v, _ = edges[edge_ids[-1]]
    if first_u in (last_u, last_v):
        current = first_u
    else:
        current = first_v
    for ei in edge_ids:
        u, v, path = edges[ei]
        pts = list(path.vertices)
        if u == current:
            nxt = v
        elif v == current:
            nxt = u
            pts = pts[::-1]
        else:
            raise ValueError("cycle edges are not contiguous")
        if verts:
            pts = pts[1:] if pillowcase_distance(verts[-1], pts[0]) < 1e-6 else pts
        verts.extend(pts)
        current = nxt
    # drop closing duplicate
    while len(verts) > 2 and pillowcase_distance(verts[0], verts[-1]) < 1e-9:
        verts.pop()
    if len(verts) < 3:
        return None
    return PillowcasePolyline(tuple(verts), closed=True)


def extract_essential_curve(img: PillowcaseImage,
                            node_tol: float | None = None) -> PillowcasePolyline | None:
    """Find a closed curve of nonzero class in the arcs of an image.

    Builds the planar graph of all arcs (splitting at mutual intersections
    and at endpoints resting on other arcs), then tests the fundamental
    cycles for nonzero winding around the marked points.  Returns one
    essential cycle or None.
    """
    curves = [c for c in img.arcs if c is not None]
    if not curves:
        return None
    node_tol = node_tol if node_tol is not None else max(img.chain_threshold, 1e-7)
    candidates = []
    # closed single arcs are cycle candidates on their own
    for c in curves:
        if c.closed:
            try:
                cls = essential_class(c)
            except DegenerateCurveError:
                continue
            if cls != 0:
                candidates.append((abs(cls), c))
    if candidates and min(c for c, _ in candidates) == 1:
        return min(candidates, key=lambda item: (item[0], item[1].length()))[1]
    cuts = {i: [] for i in range(len(curves))}
    for i in range(len(curves)):
        for j in range(i + 1, len(curves)):
            for (pt, trans, i1, t1, i2, t2) in detailed_intersections(curves[i], curves[j]):
                cuts[i].append((i1, t1))
                cuts[j].append((i2, t2))
    for j, extra in _project_endpoint_cuts(curves, node_tol).items():
        cuts[j].extend(extra)
    pieces = []
    for i, c in enumerate(curves):
        pieces.extend(_split_polyline(c, cuts[i]))
    if not pieces:
        return None
    # merge endpoints into graph nodes
    endpoints = []
    for p in pieces:
        endpoints.append(p.vertices[0])
        endpoints.append(p.vertices[-1])
    uf = _UnionFind(len(endpoints))
    for i in range(len(endpoints)):
        for j in range(i + 1, len(endpoints)):
            if pillowcase_distance(endpoints[i], endpoints[j]) < node_tol:
                uf.union(i, j)
    labels = {}
    node_points = []
    node_of = []
    for i in range(len(endpoints)):
        root = uf.find(i)
        if root not in labels:
            labels[root] = len(node_points)
            node_points.append(endpoints[i])
        node_of.append(labels[root])
    edges = []
    for k, p in enumerate(pieces):
        u = node_of[2 * k]
        v = node_of[2 * k + 1]
        edges.append((u, v, p))
    for cyc in _fundamental_cycles(len(node_points), edges):
        try:
            curve = _assemble_cycle(cyc, edges)
        except ValueError:
            continue
        if curve is None:
            continue
        try:
            cls = essential_class(curve)
        except DegenerateCurveError:
            continue
        if cls != 0:
            candidates.append((abs(cls), curve))
    if not candidates:
        return None
    return min(candidates, key=lambda item: (item[0], item[1].length()))[1]


# ---------------------------------------------------------------------------
# surgery representations and diagnostics

def find_surgery_representation(img: PillowcaseImage, p: int, q: int,
                                config: SolverConfig | None = None):
    """Representation of the (p, q) Dehn filling found on the image.

    Scans the image arcs for points with p*alpha + q*beta = 0 mod 2pi that
    are carried by an irreducible witness, then refines with the filling
    relator appended.  Returns (representation, boundary_point) or None.
    """
    if math.gcd(p, q) != 1:
        raise ValueError(f"slope ({p}, {q}) is not primitive")
    config = config or SolverConfig()
    pres = img.model.presentation
    filling = concat(pow_word(pres.meridian, p), pow_word(pres.longitude, q))
    candidates = []
    for ai, arc in enumerate(img.arcs):
        segs = arc.lifted_segments()
        for si, ((x1, y1), (x2, y2)) in enumerate(segs):
            f1 = p * x1 + q * y1
            f2 = p * x2 + q * y2
            lo, hi = min(f1, f2), max(f1, f2)
            k_lo = math.ceil(lo / TWO_PI - 1e-12)
            k_hi = math.floor(hi / TWO_PI + 1e-12)
            for k in range(k_lo, k_hi + 1):
                target = TWO_PI * k
                if abs(f2 - f1) < 1e-15:
                    continue
                t = (target - f1) / (f2 - f1)
                if not (-1e-9 <= t <= 1 + 1e-9):
                    continue
                pt = canonicalize(x1 + t * (x2 - x1), y1 + t * (y2 - y1))
                candidates.append((ai, si, k, pt))
    tried = []
    for (ai, si, k, pt) in candidates:
        witness = _nearest_witness(img, pt, config)
        if witness is None:
            continue
        refined = refine_representation(pres, witness.witness, config,
                                        extra_relators=(filling,))
        if refined is None:
            tried.append((pt, None))
            continue
        gap = irreducibility_gap(refined)
        res = relator_residual(refined, pres.with_relator(filling))
        if res < config.tol and gap > config.irreducible_gap:
            return refined, boundary_angles(refined, pres)
        tried.append((pt, res))
    return None


def _nearest_witness(img: PillowcaseImage, pt: PillowcasePoint,
                     config: SolverConfig):
    best = None
    best_d = math.inf
    for rec in img.points:
        if rec.gap <= config.irreducible_gap:
            continue
        d = pillowcase_distance(rec.point, pt)
        if d < best_d:
            best_d = d
            best = rec
    if best is not None and best_d < 2 * img.chain_threshold:
        return best
    return None


def corner_diagnostics(img: PillowcaseImage, eps: float = 0.05,
                       gap_threshold: float = 1e-4):
    """Irreducible witnesses within eps of the corners (0,0) and (pi,0).

    Such witnesses flag possible limits of irreducibles at the corners,
    which obstruct SU(2)-abelianness of every filling; numerically we can
    only report proximity, not decide the limit.
    """
    corners = (canonicalize(0.0, 0.0), canonicalize(math.pi, 0.0))
    out = []
    for rec in img.points:
        if rec.gap <= gap_threshold:
            continue
        if any(pillowcase_distance(rec.point, c) < eps for c in corners):
            out.append(rec)
    return out
