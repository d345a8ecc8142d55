"""Combinatorial degenerations: a surface degenerated to a union of planes.

A degeneration is recorded purely combinatorially: numbered planes, edges
(each the intersection line of two planes), and vertices (points where
three or four edges meet).  This module parses and validates such data,
classifies vertices into inner 3-points and inner 4-points, finds the
parasitic edge pairs (pairs of lines that meet only after projecting to
the plane), and builds the dual graph whose vertices are the planes.

All types are immutable values; every operation is a pure function.
"""

from __future__ import annotations

import json
from dataclasses import dataclass


class ComplexError(Exception):
    """Base class for errors raised by this module."""


class ComplexParseError(ComplexError):
    """Malformed degeneration file; carries a human-readable location."""

    def __init__(self, message, location=None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)


class UnsupportedMultiplicity(ComplexError):
    """Vertex with a number of edges other than 3 or 4."""


class ClassificationError(ComplexError):
    """Vertex whose incidence structure is not an inner 3- or 4-point."""


@dataclass(frozen=True)
class Edge:
    """Intersection line of two planes."""

    id: int
    planes: tuple[int, int]

    def plane_set(self):
        return frozenset(self.planes)


@dataclass(frozen=True)
class Vertex:
    """Point of the degeneration where several edges meet."""

    id: int
    edges: frozenset[int]


@dataclass(frozen=True)
class PresentationOverrides:
    """Extra relation-grammar lines attached to a dataset.

    Inner 4-points contribute relations that cannot be derived from the
    incidence data alone, so datasets with 4-points must supply them here.
    ``projective_relator``, when present, is appended last.
    """

    extra_relators: tuple[str, ...] = ()
    projective_relator: str | None = None


@dataclass(frozen=True)
class DegenerationComplex:
    """A degenerated surface: planes, intersection edges, and vertices."""

    name: str
    plane_count: int
    edges: tuple[Edge, ...]
    vertices: tuple[Vertex, ...]
    overrides: PresentationOverrides | None = None

    @property
    def edge_count(self):
        return len(self.edges)

    def edge(self, edge_id: int) -> Edge:
        for e in self.edges:
            if e.id == edge_id:
                return e
        raise KeyError(f"no edge with id {edge_id}")


@dataclass(frozen=True)
class Inner3:
    """Inner 3-point: three planes meeting pairwise in the three edges."""

    edges: tuple[int, int, int]


@dataclass(frozen=True)
class Inner4:
    """Inner 4-point: four edges in cyclic order around the point.

    Consecutive edges of ``cycle`` share a plane; diagonally opposite
    edges share none.
    """

    cycle: tuple[int, int, int, int]

    @property
    def diagonals(self):
        a, b, c, d = self.cycle
        return (tuple(sorted((a, c))), tuple(sorted((b, d))))


VertexClass = Inner3 | Inner4


@dataclass(frozen=True)
class DualGraph:
    """Graph with one vertex per plane and one edge per intersection line."""

    vertex_count: int
    edges: tuple[tuple[int, int, int], ...]  # (plane, plane, edge label)


@dataclass(frozen=True)
class ValidationReport:
    """Result of :func:`validate`: violations are data, not exceptions."""

    violations: tuple[str, ...]
    edges_in_two_vertices: bool
    notes: tuple[str, ...] = ()

    @property
    def valid(self):
        return not self.violations


_SPHERE_NOTE = "surface (sphere) condition: local incidence checks only, not verified"


def _require(cond, message, location=None):
    if not cond:
        raise ComplexParseError(message, location)


def parse_complex(text: str) -> DegenerationComplex:
    """Parse a degeneration file (JSON) into a :class:`DegenerationComplex`.

    Raises :class:`ComplexParseError` on malformed syntax, duplicate ids,
    or plane indices out of range.  Softer structural defects (degenerate
    edges, wrong vertex multiplicities, ...) are left to :func:`validate`.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ComplexParseError(
            f"invalid JSON: {exc.msg}", f"line {exc.lineno}, column {exc.colno}"
        ) from exc
    _require(isinstance(data, dict), "top-level value must be an object")

    name = data.get("name", "")
    _require(isinstance(name, str), "'name' must be a string", "field name")
    planes = data.get("planes")
    _require(
        isinstance(planes, int) and not isinstance(planes, bool) and planes >= 1,
        "'planes' must be a positive integer",
        "field planes",
    )

    raw_edges = data.get("edges")
    _require(isinstance(raw_edges, list), "'edges' must be a list", "field edges")
    edges = []
    seen_edge_ids = set()
    for pos, item in enumerate(raw_edges):
        loc = f"edges[{pos}]"
        _require(isinstance(item, dict), "edge must be an object", loc)
        eid = item.get("id")
        _require(isinstance(eid, int) and eid >= 1, "edge id must be an integer >= 1", loc)
        _require(eid not in seen_edge_ids, f"duplicate edge id {eid}", loc)
        seen_edge_ids.add(eid)
        pl = item.get("planes")
        _require(
            isinstance(pl, list) and len(pl) == 2 and all(isinstance(p, int) for p in pl),
            "edge planes must be a pair of integers",
            loc,
        )
        for p in pl:
            _require(1 <= p <= planes, f"plane index {p} out of range 1..{planes}", loc)
        edges.append(Edge(id=eid, planes=(pl[0], pl[1])))

    raw_vertices = data.get("vertices")
    _require(isinstance(raw_vertices, list), "'vertices' must be a list", "field vertices")
    vertices = []
    seen_vertex_ids = set()
    for pos, item in enumerate(raw_vertices):
        loc = f"vertices[{pos}]"
        _require(isinstance(item, dict), "vertex must be an object", loc)
        vid = item.get("id")
        _require(isinstance(vid, int) and vid >= 1, "vertex id must be an integer >= 1", loc)
        _require(vid not in seen_vertex_ids, f"duplicate vertex id {vid}", loc)
        seen_vertex_ids.add(vid)
        ve = item.get("edges")
        _require(
            isinstance(ve, list) and all(isinstance(x, int) for x in ve),
            "vertex edges must be a list of integers",
            loc,
        )
        vertices.append(Vertex(id=vid, edges=frozenset(ve)))

    overrides = None
    if "overrides" in data and data["overrides"] is not None:
        raw = data["overrides"]
        _require(isinstance(raw, dict), "'overrides' must be an object", "field overrides")
        extra = raw.get("extra_relators", [])
        _require(
            isinstance(extra, list) and all(isinstance(s, str) for s in extra),
            "'extra_relators' must be a list of strings",
            "field overrides",
        )
        proj = raw.get("projective_relator")
        _require(
            proj is None or isinstance(proj, str),
            "'projective_relator' must be a string",
            "field overrides",
        )
        overrides = PresentationOverrides(tuple(extra), proj)

    return DegenerationComplex(
        name=name,
        plane_count=planes,
        edges=tuple(edges),
        vertices=tuple(vertices),
        overrides=overrides,
    )


def serialize_complex(c: DegenerationComplex) -> str:
    """Inverse of :func:`parse_complex` on the data model."""
    data = {
        "name": c.name,
        "planes": c.plane_count,
        "edges": [{"id": e.id, "planes": list(e.planes)} for e in c.edges],
        "vertices": [{"id": v.id, "edges": sorted(v.edges)} for v in c.vertices],
    }
    if c.overrides is not None:
        ov = {"extra_relators": list(c.overrides.extra_relators)}
        if c.overrides.projective_relator is not None:
            ov["projective_relator"] = c.overrides.projective_relator
        data["overrides"] = ov
    return json.dumps(data, indent=2)


def validate(c: DegenerationComplex) -> ValidationReport:
    """Check the structural invariants of a complex.

    Returns a report listing every violated invariant; a valid complex
    yields an empty list.  Also reports whether every edge lies in exactly
    two vertices (each intersection line has two endpoints).
    """
    violations = []
    edge_ids = [e.id for e in c.edges]
    by_id = {e.id: e for e in c.edges}

    if sorted(edge_ids) != list(range(1, len(edge_ids) + 1)):
        violations.append(f"edge ids are not consecutive 1..{len(edge_ids)}")

    for e in c.edges:
        a, b = e.planes
        if a == b:
            violations.append(f"edge {e.id}: degenerate edge (planes {a},{b})")
        for p in e.planes:
            if not 1 <= p <= c.plane_count:
                violations.append(f"edge {e.id}: plane {p} out of range 1..{c.plane_count}")

    for v in c.vertices:
        missing = sorted(x for x in v.edges if x not in by_id)
        for x in missing:
            violations.append(f"vertex {v.id} references missing edge {x}")
        k = len(v.edges)
        if k < 3:
            violations.append(f"vertex {v.id} has {k} edges (at least 3 required)")
        elif k > 4:
            violations.append(
                f"vertex {v.id} has multiplicity {k}: unsupported (only 3- and 4-points)"
            )
        # two edges with the same plane pair through one vertex would mean
        # two intersection lines of the same pair of planes meeting there
        pairs = {}
        for x in sorted(v.edges):
            if x not in by_id:
                continue
            key = by_id[x].plane_set()
            if key in pairs and len(key) == 2:
                i = pairs[key]
                violations.append(
                    f"edges {i} and {x} repeat plane pair {tuple(sorted(key))} at vertex {v.id}"
                )
            else:
                pairs[key] = x

    counts = {e.id: 0 for e in c.edges}
    for v in c.vertices:
        for x in v.edges:
            if x in counts:
                counts[x] += 1
    two_endpoints = True
    for eid in sorted(counts):
        if counts[eid] != 2:
            two_endpoints = False
            violations.append(f"edge {eid} has {counts[eid]} endpoints")

    return ValidationReport(
        violations=tuple(violations),
        edges_in_two_vertices=two_endpoints,
        notes=(_SPHERE_NOTE,),
    )


def classify_vertex(c: DegenerationComplex, v: Vertex) -> VertexClass:
    """Classify a vertex as an inner 3-point or inner 4-point.

    Inner 3-points are returned with ascending edge ids.  Inner 4-points
    are returned in cyclic order (consecutive edges share a plane,
    diagonal edges share none), normalized to start at the smallest edge
    id and proceed toward its smaller-id neighbor.
    """
    k = len(v.edges)
    if k not in (3, 4):
        raise UnsupportedMultiplicity(
            f"vertex {v.id} has multiplicity {k}; only 3- and 4-points are supported"
        )
    ids = sorted(v.edges)
    if k == 3:
        return Inner3(edges=(ids[0], ids[1], ids[2]))

    by_id = {e.id: e for e in c.edges}
    shares = {
        x: [y for y in ids if y != x and by_id[x].plane_set() & by_id[y].plane_set()]
        for x in ids
    }
    if any(len(nbrs) != 2 for nbrs in shares.values()):
        raise ClassificationError(
            f"vertex {v.id}: plane-sharing relation of its edges is not a 4-cycle"
        )
    start = ids[0]
    second = min(shares[start])
    third = next(y for y in shares[second] if y != start)
    fourth = next(y for y in shares[start] if y != second)
    cycle = (start, second, third, fourth)
    if third == fourth or len(set(cycle)) != 4:
        raise ClassificationError(
            f"vertex {v.id}: plane-sharing relation of its edges is not a 4-cycle"
        )
    # diagonals must be plane-disjoint for an inner 4-point
    for a, b in ((cycle[0], cycle[2]), (cycle[1], cycle[3])):
        if by_id[a].plane_set() & by_id[b].plane_set():
            raise ClassificationError(
                f"vertex {v.id}: diagonal edges {a},{b} share a plane"
            )
    return Inner4(cycle=cycle)


def classify_all(c: DegenerationComplex) -> dict[int, VertexClass]:
    """Classify every vertex, keyed by vertex id."""
    return {v.id: classify_vertex(c, v) for v in c.vertices}


def adjacent_pairs(c: DegenerationComplex) -> list[tuple[int, int]]:
    """Unordered edge-id pairs that occur together in at least one vertex."""
    seen = set()
    for v in c.vertices:
        ids = sorted(v.edges)
        for i, a in enumerate(ids):
            for b in ids[i + 1 :]:
                seen.add((a, b))
    return sorted(seen)


def parasitic_pairs(c: DegenerationComplex) -> list[tuple[int, int]]:
    """Unordered pairs of edges sharing no vertex, sorted lexicographically.

    These are the line pairs that intersect only after projection.
    """
    together = set(adjacent_pairs(c))
    ids = sorted(e.id for e in c.edges)
    return [
        (a, b)
        for i, a in enumerate(ids)
        for b in ids[i + 1 :]
        if (a, b) not in together
    ]


def dual_graph(c: DegenerationComplex) -> DualGraph:
    """Dual graph: one vertex per plane, one edge per intersection line."""
    edges = tuple(
        (min(e.planes), max(e.planes), e.id) for e in c.edges
    )
    return DualGraph(vertex_count=c.plane_count, edges=edges)


def betti(g: DualGraph) -> int:
    """First Betti number: edges - vertices + connected components."""
    parent = list(range(g.vertex_count + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b, _ in g.edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra
    components = len({find(x) for x in range(1, g.vertex_count + 1)})
    return len(g.edges) - g.vertex_count + components
