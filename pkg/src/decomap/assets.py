"""Built-in test geometries: scalar fields on small closed surfaces and curves.

Everything returns a ``(SimplicialComplex, ScalarField)`` pair built through
:func:`decomap.simplicial.build_complex`.  Heights are exact rationals
(floats are converted exactly), so preimage membership tests never see
rounding.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .simplicial import build_complex

HEX_CORNER_HEIGHTS = (0, 1, 2, 3, 2, 1)


def hexagon_circle(subdivisions=1):
    """PL circle with corner heights 0,1,2,3,2,1, each edge split *m* ways.

    subdivisions=1 is the bare 6-vertex hexagon; larger values interpolate
    the heights linearly, keeping the same critical values while shrinking
    the per-edge height gap to 1/m.
    """
    m = int(subdivisions)
    if m < 1:
        raise ValueError("subdivisions must be >= 1")
    n = 6 * m
    values = {}
    for k in range(n):
        corner, t = divmod(k, m)
        a = HEX_CORNER_HEIGHTS[corner]
        b = HEX_CORNER_HEIGHTS[(corner + 1) % 6]
        values[k] = Fraction(a) + Fraction(t, m) * (b - a)
    edges = [(k, (k + 1) % n) for k in range(n)]
    return build_complex(edges, values)


def sphere_tetrahedron():
    """Boundary of the 3-simplex: the minimal triangulated 2-sphere."""
    tris = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
    return build_complex(tris, {v: v for v in range(4)})


def torus_seven_vertex():
    """The 7-vertex triangulated torus (14 triangles on K7)."""
    tris = []
    for i in range(7):
        tris.append(tuple(sorted((i, (i + 1) % 7, (i + 3) % 7))))
        tris.append(tuple(sorted((i, (i + 2) % 7, (i + 3) % 7))))
    return build_complex(tris, {v: v for v in range(7)})


def klein_bottle_grid(cells=3):
    """Klein bottle from an n x n grid square with one flipped gluing."""
    n = int(cells)
    if n < 3:
        raise ValueError("need at least 3 cells per side")

    def node(x, y):
        if y == n:
            return ((n - x) % n) * n + 0
        return (x % n) * n + y

    tris = []
    for x in range(n):
        for y in range(n):
            a, b = node(x, y), node(x + 1, y)
            c, d = node(x + 1, y + 1), node(x, y + 1)
            tris.append((a, b, c))
            tris.append((a, d, c))
    verts = {v for t in tris for v in t}
    return build_complex(tris, {v: v for v in verts})


def standing_torus(n_theta=36, n_phi=18):
    """Triangulated torus standing on end, decorated by a height field.

    The height 3/2 + 3/4 (1 + cos phi) sin theta has a single minimum at 0,
    a single maximum at 3, and both saddle crossings on one level set at
    3/2 (the tilt where the two saddle values of a standing torus
    coincide), so the critical values are {0, 3/2, 3} with gaps of 3/2.
    Each grid cell is split into four triangles around a center vertex,
    which keeps the largest per-edge height gap small enough for
    moderately fine covers to be admissible.
    """
    N, M = int(n_theta), int(n_phi)
    if N < 3 or M < 3:
        raise ValueError("need at least 3 subdivisions each way")

    def sincos(i, n):
        # pin the axis values so the critical level sets are exact
        r = i % n
        if 4 * r % n == 0:
            return ((0, 1), (1, 0), (0, -1), (-1, 0))[4 * r // n]
        a = 2 * math.pi * r / n
        return math.sin(a), math.cos(a)

    def height(i, j):
        s, _ = sincos(i, N)
        _, c = sincos(j, M)
        return Fraction(3, 2) + Fraction(3 * (1 + c) * s) / 4

    def grid(i, j):
        return (i % N) * M + (j % M)

    def center(i, j):
        return N * M + i * M + j

    values = {}
    for i in range(N):
        for j in range(M):
            values[grid(i, j)] = height(i, j)
    tris = []
    for i in range(N):
        for j in range(M):
            a = grid(i, j)
            b = grid(i + 1, j)
            c = grid(i + 1, j + 1)
            d = grid(i, j + 1)
            o = center(i, j)
            values[o] = (values[a] + values[b] + values[c] + values[d]) / 4
            tris.extend([(o, a, b), (o, b, c), (o, c, d), (o, d, a)])
    return build_complex(tris, values)
