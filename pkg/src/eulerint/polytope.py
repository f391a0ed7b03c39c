"""Lattice polytopes: Cayley supports, normalized volumes, and cone facets.

All computations use exact integer / rational arithmetic; the configurations
handled here are desk-scale (dimension <= 6, a few dozen points).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from . import intlinalg as ila
from .laurent import IntegrandSpec


@dataclass(frozen=True)
class LatticePointSet:
    dim: int
    points: tuple

    def __init__(self, dim: int, points):
        if dim < 1:
            raise ValueError("dim must be positive")
        seen = []
        for p in points:
            p = tuple(int(x) for x in p)
            if len(p) != dim:
                raise ValueError(f"point {p} has wrong dimension")
            if p not in seen:
                seen.append(p)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "points", tuple(seen))


@dataclass(frozen=True)
class VolumeReport:
    normalized_volume: int
    affine_dim: int
    lattice_index_note: str


def cayley_support(spec: IntegrandSpec) -> LatticePointSet:
    """Support points (alpha, e_j) of the auxiliary polynomial sum_j x_{n+j} f_j."""
    n = spec.nvars
    ell = spec.npolys
    pts = []
    for j, p in enumerate(spec.f):
        for alpha in p.support():
            pts.append(tuple(alpha) + tuple(1 if k == j else 0 for k in range(ell)))
    return LatticePointSet(n + ell, pts)


def _affine_rank_points(points):
    if len(points) <= 1:
        return 0
    p0 = points[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    return ila.rank(diffs)


def _hull_facets(points):
    """Facets of the full-dimensional polytope conv(points) in Z^r.

    Returns a list of (normal, offset, vertex_index_tuple) with normal.p >= offset
    for all points and equality exactly on the facet.
    """
    r = len(points[0])
    m = len(points)
    if r == 1:
        lo = min(range(m), key=lambda i: points[i][0])
        hi = max(range(m), key=lambda i: points[i][0])
        return [((1,), points[lo][0], (lo,)), ((-1,), -points[hi][0], (hi,))]
    facets = {}
    for sub in combinations(range(m), r):
        base = points[sub[0]]
        diffs = [[points[i][k] - base[k] for k in range(r)] for i in sub[1:]]
        null = ila.rational_nullspace(diffs)
        if len(null) != 1:
            continue
        normal = ila.primitive_integer(null[0])
        offset = sum(a * b for a, b in zip(normal, base))
        vals = [sum(a * b for a, b in zip(normal, p)) - offset for p in points]
        if all(v >= 0 for v in vals):
            pass
        elif all(v <= 0 for v in vals):
            normal = tuple(-x for x in normal)
            offset = -offset
            vals = [-v for v in vals]
        else:
            continue
        on = tuple(i for i, v in enumerate(vals) if v == 0)
        facets[(tuple(normal), offset)] = on
    return [(n, o, on) for (n, o), on in sorted(facets.items())]


def _triangulate(points):
    """Triangulation of conv(points) for full-dimensional integer point sets.

    Star triangulation from the lexicographically smallest point over a
    recursive triangulation of the facets not containing it.  Returns tuples of
    indices into `points`.
    """
    r = len(points[0])
    idx = sorted(range(len(points)), key=lambda i: points[i])
    v0 = idx[0]
    if r == 1:
        hi = max(range(len(points)), key=lambda i: points[i][0])
        return [(v0, hi)] if points[hi] != points[v0] else []
    simplices = []
    for normal, offset, on in _hull_facets(points):
        if v0 in on:
            continue
        fpts = [points[i] for i in on]
        # project the facet to Z^(r-1): affine coordinates over Q, scaled to Z
        base = fpts[0]
        diffs = [[p[k] - base[k] for k in range(r)] for p in fpts]
        basis = ila.lattice_basis(diffs)
        coords = []
        for d in diffs:
            c = ila.lattice_coords(basis, d)
            coords.append(tuple(c))
        for sub in _triangulate(coords):
            simplices.append(tuple(sorted((v0,) + tuple(on[i] for i in sub))))
    return simplices


def _normalized_volume_fulldim(points):
    """Sum of |det| over a triangulation: r! times the Euclidean volume."""
    r = len(points[0])
    vol = 0
    for simplex in _triangulate(points):
        base = points[simplex[0]]
        mat = [[points[i][k] - base[k] for k in range(r)] for i in simplex[1:]]
        vol += abs(ila.det_bareiss(mat))
    return vol


def normalized_volume(pts: LatticePointSet) -> VolumeReport:
    """Lattice-normalized volume of conv({0} union pts).

    The volume is measured against the lattice generated by the differences of
    the points together with one translate, i.e. the lattice affinely generated
    by the points, with the origin appended as cone apex.
    """
    points = list(pts.points)
    if not points:
        raise ValueError("empty point set")
    p0 = min(points)
    diffs = [[a - b for a, b in zip(p, p0)] for p in points]
    r = ila.rank(diffs)
    if r == 0:
        return VolumeReport(0, 0, "degenerate: single point")
    lat = ila.lattice_basis(diffs + [list(p0)])
    coords = [tuple([0] * len(lat))] + [
        tuple(ila.lattice_coords(lat, p)) for p in points]
    vol = _normalized_volume_fulldim(coords)
    index = ila.lattice_index_in_saturation(diffs)
    if index == 1:
        note = "difference lattice is saturated in the ambient lattice"
    else:
        note = (f"difference lattice has index {index} in the ambient lattice "
                "intersected with the affine span; volume is measured against "
                "the affinely generated sublattice")
    return VolumeReport(int(vol), int(r), note)


def facets(pts: LatticePointSet):
    """Irredundant facet description of the cone spanned by the points.

    Returns (primitive integer inner normal, offset) pairs with offset 0 and
    normal . p >= 0 for every point.
    """
    gens = [list(p) for p in pts.points]
    d = pts.dim
    r = ila.rank(gens)
    if r == 0:
        raise ValueError("zero-dimensional cone")
    basis = ila.lattice_basis(gens)  # r x d, rows span the rational span
    coords = []
    for g in gens:
        c = ila.solve_rational([[basis[i][k] for i in range(r)] for k in range(d)], g)
        coords.append(c)
    if r == 1:
        # a single ray: its unique facet functional in the span is the ray itself
        out = [_lift_normal([Fraction(1)], basis, d)]
        return sorted(out)
    found = {}
    for sub in combinations(range(len(gens)), r - 1):
        mat = [coords[i] for i in sub]
        null = ila.rational_nullspace(mat)
        if len(null) != 1:
            continue
        u = null[0]
        vals = [sum(a * b for a, b in zip(u, c)) for c in coords]
        if all(v >= 0 for v in vals):
            pass
        elif all(v <= 0 for v in vals):
            u = [-x for x in u]
            vals = [-v for v in vals]
        else:
            continue
        # equality set must span a (r-1)-dimensional subspace
        on = [coords[i] for i, v in enumerate(vals) if v == 0]
        if _frac_rank(on) != r - 1:
            continue
        found[tuple(ila.primitive_integer(u))] = True
    out = [_lift_normal(list(u), basis, d) for u in found]
    return sorted(out)


def _frac_rank(m):
    if not m:
        return 0
    rows = [[Fraction(x) for x in row] for row in m]
    cols = len(rows[0])
    rank = 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = 1 / rows[rank][c]
        rows[rank] = [x * inv for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _lift_normal(u_coords, basis, d):
    """Lift a facet functional from span coordinates to a primitive ambient vector.

    The lift is chosen inside the rational row space of the generators, which
    makes it canonical; for full-rank configurations it is the unique normal
    direction.
    """
    r = len(basis)
    # solve (B B^T) w = u, then normal = B^T w
    bbt = [[sum(basis[i][k] * basis[j][k] for k in range(d)) for j in range(r)]
           for i in range(r)]
    w = ila.solve_rational(bbt, u_coords)
    normal = [sum(Fraction(basis[i][k]) * w[i] for i in range(r)) for k in range(d)]
    return tuple(ila.primitive_integer(normal))


def pointset_to_json(pts: LatticePointSet) -> dict:
    return {"dim": pts.dim, "points": [list(p) for p in pts.points]}


def pointset_from_json(obj: dict) -> LatticePointSet:
    return LatticePointSet(int(obj["dim"]), obj["points"])
