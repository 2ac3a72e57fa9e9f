"""Homology of cellular cosheaves on 1-dimensional complexes.

A cosheaf here assigns a graded vector space to each vertex and edge of a
graph together with extension maps from each edge value into its two
endpoint values.  Per degree, the chain complex is a single block matrix
from the edge-block to the vertex-block; H0 is its cokernel (kept as
representatives plus an explicit projection) and H1 its kernel.

The functions work on a plain :class:`CosheafData` record, so they apply
to any graph — not only nerves of interval covers (whose nerves are
disjoint unions of paths and never have cycles).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .exactlinalg import (
    GF2,
    Matrix,
    NotInSpan,
    SpanSolver,
    cokernel_basis,
    kernel_basis,
)
from .homology import NestingViolation


class SolveFailure(Exception):
    """Internal inconsistency: a chain that must be solvable was not."""


@dataclass
class CosheafData:
    """Graded cosheaf on a graph: dims per cell and edge-to-vertex maps.

    ``maps[(u, v)]`` holds two per-degree matrix lists ``(to_u, to_v)``.
    """

    vertices: tuple
    edges: tuple
    vdims: dict
    edims: dict
    maps: dict
    field: str
    max_deg: int
    _cache: dict = dc_field(default_factory=dict, repr=False)

    def restrict(self, vertices, edges):
        vset = set(vertices)
        eset = set(edges)
        if not vset <= set(self.vertices) or not eset <= set(self.edges):
            raise NestingViolation("restriction members are not part of this cosheaf")
        return CosheafData(
            tuple(v for v in self.vertices if v in vset),
            tuple(e for e in self.edges if e in eset),
            {v: self.vdims[v] for v in vset},
            {e: self.edims[e] for e in eset},
            {e: self.maps[e] for e in eset},
            self.field,
            self.max_deg,
        )


def constant_cosheaf(n_vertices, edges, field=GF2):
    """The constant cosheaf k on a graph: 1-dimensional stalks, identity maps."""
    verts = tuple(range(n_vertices))
    edges = tuple(sorted(tuple(sorted(e)) for e in edges))
    ident = Matrix.identity(1, field)
    return CosheafData(
        verts,
        edges,
        {v: [1] for v in verts},
        {e: [1] for e in edges},
        {e: ([ident], [ident]) for e in edges},
        field,
        0,
    )


class CosheafChainComplex:
    """Edge-block -> vertex-block boundary in one fixed degree."""

    def __init__(self, data: CosheafData, n, orientation=1):
        self.degree = n
        self.field = data.field
        self.vertex_offsets = {}
        off = 0
        for v in data.vertices:
            self.vertex_offsets[v] = off
            off += _dim(data.vdims[v], n)
        self.vertex_dim = off
        self.edge_offsets = {}
        off = 0
        for e in data.edges:
            self.edge_offsets[e] = off
            off += _dim(data.edims[e], n)
        self.edge_dim = off
        b = Matrix.zeros(self.vertex_dim, self.edge_dim, data.field)
        for e in data.edges:
            u, v = e
            d = _dim(data.edims[e], n)
            if d == 0:
                continue
            to_u, to_v = data.maps[e]
            mu = _degree_matrix(to_u, n, _dim(data.vdims[u], n), d, data.field)
            mv = _degree_matrix(to_v, n, _dim(data.vdims[v], n), d, data.field)
            c0 = self.edge_offsets[e]
            ru = self.vertex_offsets[u]
            rv = self.vertex_offsets[v]
            # boundary of the edge (u, v), u < v: +r_v - r_u
            if data.field == GF2:
                b.data[rv : rv + mv.rows, c0 : c0 + d] ^= mv.data
                b.data[ru : ru + mu.rows, c0 : c0 + d] ^= mu.data
            else:
                sign = 1 if orientation >= 0 else -1
                b.data[rv : rv + mv.rows, c0 : c0 + d] += sign * mv.data
                b.data[ru : ru + mu.rows, c0 : c0 + d] -= sign * mu.data
        self.boundary = b


def _dim(dims, n):
    return dims[n] if 0 <= n < len(dims) else 0


def _degree_matrix(mats, n, rows, cols, field):
    if 0 <= n < len(mats):
        return mats[n]
    return Matrix.zeros(rows, cols, field)


def cosheaf_boundary(data, n, orientation=1) -> CosheafChainComplex:
    """Assemble the degree-n block boundary matrix of the cosheaf."""
    return CosheafChainComplex(_as_data(data), n, orientation)


class DegreeHomology:
    """H0 (representatives + projection) and H1 (kernel basis) in one degree."""

    def __init__(self, chain: CosheafChainComplex):
        self.chain = chain
        self.h0_reps, self.h0_proj = cokernel_basis(chain.boundary, chain.vertex_dim)
        self.h1_basis = kernel_basis(chain.boundary)
        self._h1_solver = None

    @property
    def h0_dim(self):
        return self.h0_reps.cols

    @property
    def h1_dim(self):
        return self.h1_basis.cols

    def h1_solver(self) -> SpanSolver:
        if self._h1_solver is None:
            self._h1_solver = SpanSolver(self.h1_basis)
        return self._h1_solver


class CosheafHomology:
    """Per-degree homology of a cosheaf on a graph."""

    def __init__(self, data: CosheafData, max_deg=None, orientation=1):
        data = _as_data(data)
        if max_deg is None:
            max_deg = data.max_deg
        self.data = data
        self.max_deg = max_deg
        self.degrees = [
            DegreeHomology(CosheafChainComplex(data, n, orientation))
            for n in range(max_deg + 1)
        ]

    def h0_dims(self):
        return tuple(d.h0_dim for d in self.degrees)

    def h1_dims(self):
        return tuple(d.h1_dim for d in self.degrees)

    def euler_ok(self):
        """dim H0 - dim H1 == vertex block - edge block, degree-wise."""
        return all(
            d.h0_dim - d.h1_dim == d.chain.vertex_dim - d.chain.edge_dim
            for d in self.degrees
        )


def _as_data(d) -> CosheafData:
    if isinstance(d, CosheafData):
        return d
    return d.cosheaf_data()


def cosheaf_homology(d, max_deg=None) -> CosheafHomology:
    """H0 and H1 of the cosheaf in every degree up to max_deg."""
    return CosheafHomology(_as_data(d), max_deg)


def homology_of_restriction(full, vertices, edges, max_deg=None,
                            orientation=1) -> CosheafHomology:
    """Cached cosheaf homology of a restriction of *full*."""
    data = _as_data(full)
    key = (tuple(vertices), tuple(edges), max_deg, orientation)
    got = data._cache.get(key)
    if got is None:
        got = CosheafHomology(data.restrict(vertices, edges), max_deg, orientation)
        data._cache[key] = got
    return got


def _extend_block(vec: Matrix, small_offsets, big_offsets, dims, n, big_dim):
    out = Matrix.zeros(big_dim, vec.cols, vec.field)
    for cell, off in small_offsets.items():
        d = _dim(dims[cell], n)
        if d:
            out.data[big_offsets[cell] : big_offsets[cell] + d, :] = vec.data[
                off : off + d, :
            ]
    return out


def induced_cosheaf_map(d, k_small, k_big, max_deg=None, orientation=1):
    """Maps on cosheaf homology induced by an inclusion of subgraphs.

    Returns one ``(h0_matrix, h1_matrix)`` pair per degree.  H1 classes are
    zero-extended kernel chains re-expressed in the big kernel basis; H0
    classes are zero-extended vertex representatives pushed through the big
    cokernel projection.
    """
    data = _as_data(d)
    sv, se = _members(k_small)
    bv, be = _members(k_big)
    if not set(sv) <= set(bv) or not set(se) <= set(be):
        raise NestingViolation("the small subgraph is not inside the big one")
    small = homology_of_restriction(data, sv, se, max_deg, orientation)
    big = homology_of_restriction(data, bv, be, max_deg, orientation)
    out = []
    for n in range(small.max_deg + 1):
        s = small.degrees[n]
        b = big.degrees[n]
        ext_reps = _extend_block(
            s.h0_reps, s.chain.vertex_offsets, b.chain.vertex_offsets,
            data.vdims, n, b.chain.vertex_dim,
        )
        h0 = b.h0_proj @ ext_reps
        if s.h1_dim == 0 or b.h1_dim == 0:
            h1 = Matrix.zeros(b.h1_dim, s.h1_dim, data.field)
        else:
            ext_ker = _extend_block(
                s.h1_basis, s.chain.edge_offsets, b.chain.edge_offsets,
                data.edims, n, b.chain.edge_dim,
            )
            try:
                h1 = b.h1_solver().solve(ext_ker)
            except NotInSpan as exc:  # pragma: no cover - indicates a bug
                raise SolveFailure(
                    "extended kernel chain escaped the big kernel"
                ) from exc
        out.append((h0, h1))
    return out


def _members(k):
    if isinstance(k, tuple):
        return k
    return tuple(k.vertices), tuple(k.edges)
