"""Cellular cosheaf of a scalar field over a cover nerve, and its
component-refined form, the decorated mapper graph.

The cellular cosheaf assigns to each nerve vertex the graded homology of
the combinatorial preimage of its cover element, to each nerve edge the
homology of the overlap preimage, and to each face relation the
inclusion-induced map (edge value into both endpoint values).

The decorated mapper graph refines this by connected components: one node
per component of an element preimage, one multigraph edge per component of
an overlap preimage, each decorated with its own graded homology and the
two induced maps into the unique containing node components.  Forgetting
degrees >= 1 recovers the classical mapper graph.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cosheaf_homology import CosheafData
from .exactlinalg import GF2
from .homology import GradedLinearMap, GradedVectorSpace, homology, induced_map
from .interval_cover import Cover, SubNerve, admissible, nerve
from .simplicial import connected_components, preimage_subcomplex


class NotAdmissible(Exception):
    def __init__(self, offender):
        super().__init__(
            f"simplex {offender} has vertex values inside no single cover element"
        )
        self.offender = offender


class ForeignSubNerve(Exception):
    pass


class CellularCosheaf:
    """Graded homology data over the nerve of an admissible interval cover."""

    def __init__(self, x, f, cover, nerve_complex, field, max_deg,
                 vertex_handles, vertex_values, edge_handles, edge_values, edge_maps):
        self.complex = x
        self.field_fn = f
        self.cover = cover
        self.nerve = nerve_complex
        self.field = field
        self.max_deg = max_deg
        self.vertex_handles = vertex_handles
        self.vertex_values = vertex_values
        self.edge_handles = edge_handles
        self.edge_values = edge_values
        self.edge_maps = edge_maps
        self._data = None
        # memoized by the convergence layer: MV witnesses per sub-nerve and
        # boundary factorizations per (vertex, degree)
        self.witness_cache = {}
        self.chain_solvers = {}

    def vertex_space(self, i) -> GradedVectorSpace:
        return self.vertex_values[i]

    def edge_space(self, e) -> GradedVectorSpace:
        return self.edge_values[e]

    def cosheaf_data(self) -> CosheafData:
        """Dimension/matrix view consumed by the cosheaf homology engine."""
        if self._data is None:
            deg = self.max_deg
            self._data = CosheafData(
                tuple(self.nerve.vertices),
                tuple(self.nerve.edges),
                {i: list(self.vertex_values[i].dims()) for i in self.nerve.vertices},
                {e: list(self.edge_values[e].dims()) for e in self.nerve.edges},
                {
                    e: (
                        [self.edge_maps[e][0].matrix(n) for n in range(deg + 1)],
                        [self.edge_maps[e][1].matrix(n) for n in range(deg + 1)],
                    )
                    for e in self.nerve.edges
                },
                self.field,
                deg,
            )
        return self._data

    def full_subnerve(self) -> SubNerve:
        return SubNerve(self.nerve, self.nerve.vertices, self.nerve.edges)


def build_cellular_leray(x, f, c: Cover, field=GF2, max_deg=None) -> CellularCosheaf:
    """Cosheaf on the nerve decorated with preimage homology and induced maps.

    Requires a 1-dimensional nerve and an admissible cover; both are
    validated up front so downstream exactness arguments hold.
    """
    nv = nerve(c)
    adm = admissible(c, x, f)
    if not adm:
        raise NotAdmissible(adm.offender)
    if max_deg is None:
        max_deg = max(x.max_dim, 0)
    vertex_handles = {i: preimage_subcomplex(x, f, c[i]) for i in nv.vertices}
    vertex_values = {i: homology(h, field, max_deg) for i, h in vertex_handles.items()}
    edge_handles = {}
    edge_values = {}
    edge_maps = {}
    for e in nv.edges:
        i, j = e
        handle = preimage_subcomplex(x, f, c.edge_interval(i, j))
        gvs = homology(handle, field, max_deg)
        edge_handles[e] = handle
        edge_values[e] = gvs
        edge_maps[e] = (
            induced_map(gvs, vertex_values[i]),
            induced_map(gvs, vertex_values[j]),
        )
    return CellularCosheaf(
        x, f, c, nv, field, max_deg,
        vertex_handles, vertex_values, edge_handles, edge_values, edge_maps,
    )


def restrict(d: CellularCosheaf, k: SubNerve) -> CellularCosheaf:
    """Keep exactly the sub-nerve's spaces and maps."""
    if k.nerve is not d.nerve or not SubNerve(
        d.nerve, d.nerve.vertices, d.nerve.edges
    ).contains(k):
        raise ForeignSubNerve("sub-nerve does not belong to this cosheaf's nerve")
    verts = tuple(k.vertices)
    edges = tuple(k.edges)
    sub = SubNerveView(verts, edges)
    return CellularCosheaf(
        d.complex, d.field_fn, d.cover, sub, d.field, d.max_deg,
        {i: d.vertex_handles[i] for i in verts},
        {i: d.vertex_values[i] for i in verts},
        {e: d.edge_handles[e] for e in edges},
        {e: d.edge_values[e] for e in edges},
        {e: d.edge_maps[e] for e in edges},
    )


@dataclass(frozen=True)
class SubNerveView:
    vertices: tuple
    edges: tuple


@dataclass
class MapperNode:
    node_id: str
    cover_index: int
    component_index: int
    value: GradedVectorSpace
    vertices: tuple


@dataclass
class MapperEdge:
    edge_id: str
    cover_pair: tuple
    component_index: int
    value: GradedVectorSpace
    source: int
    target: int
    to_source: GradedLinearMap
    to_target: GradedLinearMap


class DecoratedMapperGraph:
    """Multigraph of preimage components decorated with graded homology."""

    def __init__(self, cover, field, max_deg, nodes, edges, cosheaf):
        self.cover = cover
        self.field = field
        self.max_deg = max_deg
        self.nodes = nodes
        self.edges = edges
        self.cosheaf = cosheaf

    def node_betti(self, k):
        return self.nodes[k].value.dims()

    def classical_mapper(self):
        """Degree-0 shadow: node ids and one edge per overlap component."""
        return (
            [n.node_id for n in self.nodes],
            [(self.nodes[e.source].node_id, self.nodes[e.target].node_id)
             for e in self.edges],
        )


def build_decorated_mapper(x, f, c: Cover, field=GF2, max_deg=None) -> DecoratedMapperGraph:
    """Component-refined cellular cosheaf (one node per preimage component)."""
    d = build_cellular_leray(x, f, c, field, max_deg)
    nodes = []
    node_of_vertex = {}  # (cover index, complex vertex) -> node position
    for i in d.nerve.vertices:
        comps = connected_components(d.vertex_handles[i])
        for ci, comp in enumerate(comps):
            pos = len(nodes)
            nodes.append(
                MapperNode(
                    f"n{i}_{ci}", i, ci,
                    homology(comp, field, d.max_deg),
                    tuple(sorted(comp.vertices)),
                )
            )
            for v in comp.vertices:
                node_of_vertex[(i, v)] = pos
    edges = []
    for (i, j) in d.nerve.edges:
        comps = connected_components(d.edge_handles[(i, j)])
        for ci, comp in enumerate(comps):
            gvs = homology(comp, field, d.max_deg)
            anchor = next(iter(comp.vertices))
            src = node_of_vertex[(i, anchor)]
            tgt = node_of_vertex[(j, anchor)]
            edges.append(
                MapperEdge(
                    f"e{i}_{j}_{ci}", (i, j), ci, gvs, src, tgt,
                    induced_map(gvs, nodes[src].value),
                    induced_map(gvs, nodes[tgt].value),
                )
            )
    return DecoratedMapperGraph(c, field, d.max_deg, nodes, edges, d)
