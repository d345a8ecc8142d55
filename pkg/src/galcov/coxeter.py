"""Second route to the Galois-cover group: the Coxeter-type quotient.

After Tietze reduction, the group of the double tetrahedron (minus its
projective relator) is the quotient group of a cycle graph: generators
are the graph edges, adjacent edges braid, disjoint edges commute.  For a
graph with one independent cycle that quotient is S_n acting on the
rank-(n-1) lattice spanned by the differences u_{i,j} = e_i - e_j, with
sigma carrying u_{i,j} to u_{sigma(i),sigma(j)}.

The projective relator then lands inside the lattice, and the kernel of
the map onto S_n becomes the quotient of the lattice by the sublattice
generated by the S_n-orbit of that one vector -- conjugation by lattice
elements is trivial on an abelian normal subgroup, so the orbit generates
the whole normal closure.  Smith normal form of the orbit matrix finishes
the computation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .kernel import StructureVerdict, smith_normal_form
from .permutations import Permutation
from .presentation import (
    GroupPresentation,
    Word,
    canonical_key,
    commutator_word,
    eliminate_and_rewrite,
    free_reduce,
    invert_word,
    parse_word,
    triple_word,
)


class CoxeterError(Exception):
    pass


# ---------------------------------------------------------------------------
# semidirect product elements


@dataclass(frozen=True)
class SemidirectElement:
    """Element sigma * u(vec) of the semidirect product of S_n with the
    sum-zero integer lattice; vec lives in e-coordinates."""

    perm: Permutation
    vec: tuple[int, ...]

    def __post_init__(self):
        if len(self.vec) != self.perm.degree:
            raise ValueError("vector length must match permutation degree")
        if sum(self.vec) != 0:
            raise ValueError("vector must have coordinate sum zero")

    @staticmethod
    def identity(n: int) -> "SemidirectElement":
        return SemidirectElement(Permutation.identity(n), (0,) * n)

    @staticmethod
    def from_perm(perm: Permutation) -> "SemidirectElement":
        return SemidirectElement(perm, (0,) * perm.degree)

    @staticmethod
    def u(n: int, i: int, j: int) -> "SemidirectElement":
        """The lattice generator u_{i,j} = e_i - e_j."""
        if i == j or not (1 <= i <= n and 1 <= j <= n):
            raise ValueError(f"bad lattice generator u_{i},{j} on 1..{n}")
        vec = [0] * n
        vec[i - 1] += 1
        vec[j - 1] -= 1
        return SemidirectElement(Permutation.identity(n), tuple(vec))

    @property
    def degree(self):
        return self.perm.degree

    def is_identity(self) -> bool:
        return self.perm.is_identity() and not any(self.vec)

    def __mul__(self, other: "SemidirectElement") -> "SemidirectElement":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        moved = _act(other.perm, self.vec)
        vec = tuple(a + b for a, b in zip(moved, other.vec))
        return SemidirectElement(self.perm * other.perm, vec)

    def inverse(self) -> "SemidirectElement":
        pinv = self.perm.inverse()
        moved = _act(pinv, self.vec)
        return SemidirectElement(pinv, tuple(-a for a in moved))

    def __str__(self):
        parts = [self.perm.cycle_string()]
        for i, c in enumerate(self.vec):
            if c:
                parts.append(f"{c:+d}*e{i + 1}")
        return " ".join(parts)


def _act(perm: Permutation, vec):
    """Coordinate action sending u_{i,j} to u_{perm(i),perm(j)}."""
    out = [0] * len(vec)
    for i, c in enumerate(vec):
        out[perm(i + 1) - 1] = c
    return tuple(out)


def sd_multiply(x: SemidirectElement, y: SemidirectElement) -> SemidirectElement:
    return x * y


def sd_inverse(x: SemidirectElement) -> SemidirectElement:
    return x.inverse()


def eval_word(images, word) -> SemidirectElement:
    """Left-to-right product of the images of a word's letters."""
    images = list(images)
    if not images:
        raise CoxeterError("empty assignment")
    acc = SemidirectElement.identity(images[0].degree)
    for x in word:
        k = abs(x)
        if not 1 <= k <= len(images):
            raise CoxeterError(f"word references unassigned generator {k}")
        g = images[k - 1]
        acc = acc * (g if x > 0 else g.inverse())
    return acc


# ---------------------------------------------------------------------------
# graphs and the standard assignment


@dataclass(frozen=True)
class CoxeterGraph:
    """Labeled graph whose edges are group generators, with a chosen
    spanning tree."""

    vertex_count: int
    edges: tuple[tuple[str, tuple[int, int]], ...]  # (label, (i, j)), i < j
    tree: frozenset[str]

    def betti(self) -> int:
        parent = list(range(self.vertex_count + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for _, (a, b) in self.edges:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra
        components = len({find(x) for x in range(1, self.vertex_count + 1)})
        return len(self.edges) - self.vertex_count + components

    def is_connected(self) -> bool:
        if self.vertex_count == 0:
            return True
        parent = list(range(self.vertex_count + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for _, (a, b) in self.edges:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra
        return len({find(x) for x in range(1, self.vertex_count + 1)}) == 1


def standard_assignment(graph: CoxeterGraph) -> dict[str, SemidirectElement]:
    """Images of the edge generators in the semidirect product.

    Spanning-tree edges map to the transposition of their endpoints; the
    single non-tree edge (i, j) maps to that transposition times u_{i,j}.
    Only the one-cycle case (first Betti number 1) is supported.
    """
    n = graph.vertex_count
    for _, (a, b) in graph.edges:
        if not (1 <= a <= n and 1 <= b <= n) or a == b:
            raise CoxeterError(f"edge ({a},{b}) is not a pair of distinct vertices")
    if not graph.is_connected():
        raise CoxeterError("graph is disconnected")
    t = graph.betti()
    if t != 1:
        raise CoxeterError(f"graph has first Betti number {t}; only t=1 is implemented")
    labels = [label for label, _ in graph.edges]
    if len(set(labels)) != len(labels):
        raise CoxeterError("duplicate edge labels")
    non_tree = [e for e in graph.edges if e[0] not in graph.tree]
    tree_edges = [e for e in graph.edges if e[0] in graph.tree]
    if len(non_tree) != 1 or len(tree_edges) != n - 1:
        raise CoxeterError("tree must be a spanning tree missing exactly one edge")

    out = {}
    for label, (a, b) in tree_edges:
        out[label] = SemidirectElement.from_perm(Permutation.transposition(n, a, b))
    label, (a, b) = non_tree[0]
    i, j = min(a, b), max(a, b)
    out[label] = SemidirectElement(
        Permutation.transposition(n, i, j), SemidirectElement.u(n, i, j).vec
    )
    return out


# ---------------------------------------------------------------------------
# the lattice quotient


def u_basis_coords(vec) -> tuple[int, ...]:
    """Coordinates of a sum-zero vector in the basis u_{k,k+1} = e_k - e_{k+1}."""
    if sum(vec) != 0:
        raise CoxeterError("vector has nonzero coordinate sum")
    coords = []
    acc = 0
    for v in vec[:-1]:
        acc += v
        coords.append(acc)
    return tuple(coords)


def vector_from_u_coords(coords, n: int) -> tuple[int, ...]:
    coords = list(coords)
    if len(coords) != n - 1:
        raise CoxeterError(f"expected {n - 1} coordinates, got {len(coords)}")
    vec = []
    prev = 0
    for c in coords:
        vec.append(c - prev)
        prev = c
    vec.append(-prev)
    return tuple(vec)


@dataclass(frozen=True)
class LatticeQuotient:
    """Invariant factors of Z^{n-1} modulo the orbit lattice."""

    invariants: tuple[int, ...]
    order: int | None  # None when the quotient is infinite

    def describe(self) -> str:
        nontrivial = [d for d in self.invariants if d > 1]
        free = sum(1 for d in self.invariants if d == 0)
        parts = []
        if nontrivial:
            if all(d == 2 for d in nontrivial):
                parts.append(f"Z2^{len(nontrivial)}" if len(nontrivial) > 1 else "Z2")
            else:
                parts.append(" x ".join(f"Z{d}" for d in nontrivial))
        if free:
            parts.append(f"Z^{free}" if free > 1 else "Z")
        return " x ".join(parts) if parts else "trivial"

    def verdict(self) -> StructureVerdict:
        nontrivial = tuple(d for d in self.invariants if d > 1)
        free = sum(1 for d in self.invariants if d == 0)
        if free:
            return StructureVerdict(
                kind="AbelianInvariantFactors",
                factors=nontrivial + (0,) * free,
                order=None,
            )
        if not nontrivial:
            return StructureVerdict(kind="Trivial", order=1)
        if all(d == 2 for d in nontrivial):
            return StructureVerdict(
                kind="ElementaryAbelian2",
                rank=len(nontrivial),
                order=self.order,
                factors=nontrivial,
            )
        return StructureVerdict(
            kind="AbelianInvariantFactors", factors=nontrivial, order=self.order
        )


def lattice_quotient(proj_vec_u, n: int) -> LatticeQuotient:
    """Quotient of the sum-zero lattice by the S_n-orbit of one vector.

    ``proj_vec_u`` is given in the u-basis (u_{1,2}, ..., u_{n-1,n}).
    The orbit under coordinate permutations generates the sublattice cut
    out by the normal closure; its Smith normal form gives the quotient.
    """
    vec = vector_from_u_coords(proj_vec_u, n)
    if not any(vec):
        return LatticeQuotient(invariants=(0,) * (n - 1), order=None)
    orbit = sorted(set(itertools.permutations(vec)))
    rows = [u_basis_coords(w) for w in orbit]
    diag = smith_normal_form(rows)
    invariants = tuple(diag[: n - 1]) + (0,) * max(0, n - 1 - len(diag))
    order = None
    if all(d > 0 for d in invariants):
        order = 1
        for d in invariants:
            order *= d
    return LatticeQuotient(invariants=invariants, order=order)


# ---------------------------------------------------------------------------
# the full route: reduce, recognize the cycle, evaluate, quotient


@dataclass(frozen=True)
class CoxeterRoute:
    """Everything the Coxeter-quotient route produced, or why it could not run."""

    supported: bool
    reason: str | None = None
    reduced: GroupPresentation | None = None
    graph: CoxeterGraph | None = None
    assignment: dict[str, SemidirectElement] | None = None
    relator_failures: tuple[int, ...] = ()
    proj_element: SemidirectElement | None = None
    proj_u_coords: tuple[int, ...] | None = None
    quotient: LatticeQuotient | None = None

    def verdict(self) -> StructureVerdict | None:
        return self.quotient.verdict() if self.quotient is not None else None


def _generator_number(name: str):
    return int(name[1:]) if name.startswith("g") and name[1:].isdigit() else None


def _auto_plan_step(pres):
    """Largest generator having a relator in which it occurs exactly once,
    with the derived replacement word; None when no such generator exists."""
    best = None
    for gen in range(pres.generator_count, 0, -1):
        for r in pres.relators:
            positions = [t for t, x in enumerate(r) if abs(x) == gen]
            if len(positions) != 1:
                continue
            t = positions[0]
            rot = r[t:] + r[:t]
            if rot[0] == gen:
                w = invert_word(rot[1:])
            else:
                w = rot[1:]
            best = (gen, free_reduce(w))
            break
        if best:
            break
    return best


def reduce_presentation(pres, proj: Word | None, plan=None, table=None):
    """Apply the elimination plan (or auto-derived syntactic eliminations)
    to the presentation, rewriting the projective relator along.

    Planned eliminations whose defining relation is not syntactically
    present are verified by tracing through ``table`` (a closed coset
    table of the presentation together with the projective relator).
    """
    from .presentation import _defining_relator_present, _holds_in_regular_representation

    companions = (proj,) if proj is not None else ()

    if plan:
        # plan words refer to the original generator names; verify all
        # relations against the original table before any renumbering
        for name, word_text in plan:
            gen = pres.id_of(name)
            w = parse_word(word_text, pres.names)
            if any(abs(x) == gen for x in w):
                raise CoxeterError(f"plan word for {name} mentions {name}")
            if not _defining_relator_present(pres, gen, w):
                if table is None:
                    raise CoxeterError(
                        f"plan relation {name} = {word_text} is not a stated relator "
                        "and no coset table was supplied to verify it"
                    )
                check = free_reduce((-gen,) + w)
                if not _holds_in_regular_representation(pres, check, table):
                    raise CoxeterError(
                        f"plan relation {name} = {word_text} does not hold in the group"
                    )
        for name, word_text in plan:
            w = parse_word(word_text, pres.names)
            pres, companions = eliminate_and_rewrite(pres, name, w, companions)
    else:
        while True:
            step = _auto_plan_step(pres)
            if step is None:
                break
            gen, w = step
            pres, companions = eliminate_and_rewrite(pres, gen, w, companions)

    proj_out = companions[0] if companions else None
    return pres, proj_out


def recognize_cycle(pres) -> CoxeterGraph:
    """Read the braid/commutator structure off the relators and build the
    cycle graph with its canonical labeling.

    Every generator must braid with exactly two others, the braid pairs
    must close into a single cycle through all generators, and every
    remaining pair must commute.  Vertex labels start the walk at the
    highest-numbered generator, toward its higher-numbered braid partner.
    """
    m = pres.generator_count
    if m < 3:
        raise CoxeterError("fewer than three generators; no cycle structure")
    keys = {canonical_key(r) for r in pres.relators}
    braid = {g: set() for g in range(1, m + 1)}
    for i in range(1, m + 1):
        if canonical_key((i, i)) not in keys:
            raise CoxeterError(f"generator {pres.names[i - 1]} has no square relator")
        for j in range(i + 1, m + 1):
            has_triple = canonical_key(triple_word(i, j)) in keys
            has_comm = canonical_key(commutator_word(i, j)) in keys
            if has_triple:
                braid[i].add(j)
                braid[j].add(i)
            elif not has_comm:
                raise CoxeterError(
                    f"pair ({pres.names[i - 1]}, {pres.names[j - 1]}) neither "
                    "braids nor commutes; not a cycle quotient presentation"
                )
    for g, partners in braid.items():
        if len(partners) != 2:
            raise CoxeterError(
                f"generator {pres.names[g - 1]} braids with {len(partners)} others; "
                "the braid structure is not a single cycle (t=1 required)"
            )

    numbers = {}
    for g in range(1, m + 1):
        num = _generator_number(pres.names[g - 1])
        numbers[g] = num if num is not None else g

    start = max(range(1, m + 1), key=lambda g: numbers[g])
    nxt = max(braid[start], key=lambda g: numbers[g])
    sequence = [start, nxt]
    while True:
        prev, cur = sequence[-2], sequence[-1]
        following = next(x for x in braid[cur] if x != prev)
        if following == start:
            break
        sequence.append(following)
    if len(sequence) != m:
        raise CoxeterError("braid cycle does not pass through every generator")

    edges = []
    for pos, g in enumerate(sequence):
        if pos < m - 1:
            pair = (pos + 1, pos + 2)
        else:
            pair = (1, m)
        edges.append((pres.names[g - 1], pair))
    tree = frozenset(name for name, _ in edges[:-1])
    return CoxeterGraph(vertex_count=m, edges=tuple(edges), tree=tree)


def coxeter_route(pres, proj: Word | None, plan=None, table=None) -> CoxeterRoute:
    """Run the whole route on a presentation (projective relator separate).

    Returns an unsupported result, with a reason, whenever the input falls
    outside the implemented one-cycle construction.
    """
    try:
        reduced, proj_reduced = reduce_presentation(pres, proj, plan=plan, table=table)
        graph = recognize_cycle(reduced)
        assignment = standard_assignment(graph)
    except CoxeterError as exc:
        return CoxeterRoute(supported=False, reason=str(exc))

    images = [assignment[name] for name in reduced.names]
    failures = tuple(
        i for i, r in enumerate(reduced.relators) if not eval_word(images, r).is_identity()
    )
    if failures:
        return CoxeterRoute(
            supported=False,
            reason="assignment fails to satisfy the reduced relators",
            reduced=reduced,
            graph=graph,
            assignment=assignment,
            relator_failures=failures,
        )
    if proj_reduced is None:
        return CoxeterRoute(
            supported=False,
            reason="no projective relator to quotient by",
            reduced=reduced,
            graph=graph,
            assignment=assignment,
        )
    element = eval_word(images, proj_reduced)
    if not element.perm.is_identity():
        return CoxeterRoute(
            supported=False,
            reason="projective relator has a non-identity permutation part; "
            "its normal closure is not a lattice",
            reduced=reduced,
            graph=graph,
            assignment=assignment,
            proj_element=element,
        )
    coords = u_basis_coords(element.vec)
    quotient = lattice_quotient(coords, graph.vertex_count)
    return CoxeterRoute(
        supported=True,
        reduced=reduced,
        graph=graph,
        assignment=assignment,
        proj_element=element,
        proj_u_coords=coords,
        quotient=quotient,
    )
