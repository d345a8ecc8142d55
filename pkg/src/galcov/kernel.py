"""The kernel of the quotient group's map onto the symmetric group.

The exact sequence 0 -> pi1 -> G -> S_n -> 0 identifies the fundamental
group of the Galois cover with the kernel of the symmetric-group map, so
everything here is about that kernel: its coset table (indexed by the n!
permutations), a presentation via Reidemeister-Schreier rewriting, its
abelian invariants via Smith normal form or GF(2) rank, and the final
structure verdict.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .enumeration import CosetTable, _column
from .permutations import (
    Permutation,
    SymmetricAssignment,
    permutation_group_order,
    verify_homomorphism,
)
from .presentation import GroupPresentation, free_reduce


class KernelError(Exception):
    pass


def kernel_coset_table(pres: GroupPresentation, a: SymmetricAssignment) -> CosetTable:
    """Coset table of ker(assignment) in the presented group.

    Cosets are indexed by the n! permutations in lexicographic image
    order, so coset 0 is the kernel itself; generator g acts by
    sigma -> sigma * a(g).  Requires the assignment to be a relator-
    preserving map onto the full symmetric group.
    """
    report = verify_homomorphism(pres, a)
    if not report.holds:
        raise KernelError(
            f"assignment is not a homomorphism; failing relators {report.failures}"
        )
    n = a.degree
    image_order = permutation_group_order(a.images[: pres.generator_count])
    full = _factorial(n)
    if image_order != full:
        raise KernelError(
            f"assignment is not surjective: image order {image_order} != {n}! = {full}"
        )

    elements = [
        Permutation(images) for images in itertools.permutations(range(1, n + 1))
    ]
    index = {perm.images: i for i, perm in enumerate(elements)}
    gens = a.images[: pres.generator_count]
    inverses = [g.inverse() for g in gens]
    rows = []
    for sigma in elements:
        row = []
        for g, ginv in zip(gens, inverses):
            row.append(index[(sigma * g).images])
            row.append(index[(sigma * ginv).images])
        rows.append(tuple(row))
    return CosetTable(generator_count=pres.generator_count, rows=tuple(rows))


def _factorial(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def schreier_transversal(table: CosetTable):
    """Breadth-first spanning tree of the coset table.

    Columns are tried in generator order (g1..gm, then inverses), giving
    shortest representatives deterministically.  Returns the set of tree
    edges as (coset, generator) pairs oriented along positive letters.
    """
    m = table.generator_count
    order = [_column(k) for k in range(1, m + 1)] + [
        _column(-k) for k in range(1, m + 1)
    ]
    seen = {0}
    tree_edges = set()
    frontier = [0]
    while frontier:
        nxt = []
        for c in frontier:
            row = table.rows[c]
            for col in order:
                d = row[col]
                if d not in seen:
                    seen.add(d)
                    nxt.append(d)
                    # orient the edge along the positive generator
                    if col % 2 == 0:
                        tree_edges.add((c, col // 2 + 1))
                    else:
                        tree_edges.add((d, col // 2 + 1))
        frontier = nxt
    if len(seen) != table.coset_count:
        raise KernelError("coset table is not connected")
    return tree_edges


def reidemeister_schreier(pres: GroupPresentation, table: CosetTable) -> GroupPresentation:
    """Presentation of the subgroup whose coset table is given.

    Generators are the Schreier generators of the non-tree edges of a
    breadth-first transversal (index*m - (index-1) of them); relators are
    the rewrites of every relator of ``pres`` traced from every coset.
    """
    m = pres.generator_count
    n = table.coset_count
    tree = schreier_transversal(table)

    gen_id = {}
    names = []
    for c in range(n):
        for k in range(1, m + 1):
            if (c, k) not in tree:
                gen_id[(c, k)] = len(names) + 1
                names.append(f"x{c}_{k}" if n > 1 else f"x{k}")

    rows = table.rows
    relators = []
    for w in pres.relators:
        for c in range(n):
            d = c
            word = []
            for x in w:
                if x > 0:
                    sid = gen_id.get((d, x))
                    if sid is not None:
                        word.append(sid)
                    d = rows[d][_column(x)]
                else:
                    d2 = rows[d][_column(x)]
                    sid = gen_id.get((d2, -x))
                    if sid is not None:
                        word.append(-sid)
                    d = d2
            if d != c:
                raise KernelError("relator does not close; table is inconsistent")
            relators.append(free_reduce(word))
    return GroupPresentation.make(names, relators)


# ---------------------------------------------------------------------------
# Smith normal form and abelianization


def smith_normal_form(matrix) -> tuple[int, ...]:
    """Diagonal of the Smith normal form of an integer matrix.

    Returns min(rows, cols) nonnegative invariants d1 | d2 | ... with
    zeros padding any rank deficiency.
    """
    a = [list(row) for row in matrix]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    if any(len(row) != ncols for row in a):
        raise ValueError("ragged matrix")
    size = min(nrows, ncols)
    invariants = []
    t = 0
    while t < size:
        # smallest nonzero entry in the remaining block becomes the pivot
        pivot = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                v = a[i][j]
                if v and (pivot is None or abs(v) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        if i != t:
            a[t], a[i] = a[i], a[t]
        if j != t:
            for row in a:
                row[t], row[j] = row[j], row[t]
        if a[t][t] < 0:
            a[t] = [-v for v in a[t]]

        dirty = False
        for i in range(t + 1, nrows):
            q = a[i][t] // a[t][t]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[t])]
            if a[i][t]:
                dirty = True
        for j in range(t + 1, ncols):
            q = a[t][j] // a[t][t]
            if q:
                for row in a:
                    row[j] -= q * row[t]
            if a[t][j]:
                dirty = True
        if dirty:
            continue
        # pivot must divide the whole remaining block
        d = a[t][t]
        offender = None
        for i in range(t + 1, nrows):
            for j in range(t + 1, ncols):
                if a[i][j] % d:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            a[t] = [x + y for x, y in zip(a[t], a[offender])]
            continue
        invariants.append(d)
        t += 1
    invariants.extend([0] * (size - len(invariants)))
    return tuple(invariants)


def _exponent_matrix(pres: GroupPresentation):
    rows = []
    for w in pres.relators:
        row = [0] * pres.generator_count
        for x in w:
            row[abs(x) - 1] += 1 if x > 0 else -1
        rows.append(row)
    return rows


def abelian_invariants(pres: GroupPresentation) -> tuple[int, ...]:
    """Invariant factors of the abelianization: torsion factors > 1 in
    divisibility order, then one 0 per free rank."""
    n = pres.generator_count
    matrix = _exponent_matrix(pres)
    if not matrix:
        return (0,) * n
    diag = smith_normal_form(matrix)
    rank = sum(1 for d in diag if d)
    return tuple(d for d in diag if d > 1) + (0,) * (n - rank)


def mod2_corank(pres: GroupPresentation) -> int:
    """Dimension of the elementary-abelian-2 quotient: generator count
    minus the GF(2) rank of the relator exponent matrix."""
    pivots = {}
    for w in pres.relators:
        v = 0
        for x in w:
            v ^= 1 << (abs(x) - 1)
        while v:
            low = v & -v
            if low in pivots:
                v ^= pivots[low]
            else:
                pivots[low] = v
                break
    return pres.generator_count - len(pivots)


def abelianization(pres: GroupPresentation, mode: str = "integers"):
    """Abelian invariants ('integers') or mod-2 co-rank ('mod2')."""
    if mode == "integers":
        return abelian_invariants(pres)
    if mode == "mod2":
        return mod2_corank(pres)
    raise ValueError(f"unknown abelianization mode {mode!r}")


# ---------------------------------------------------------------------------
# structure verdicts


@dataclass(frozen=True)
class StructureVerdict:
    """What the kernel is, as far as the collected evidence decides it.

    kind is one of 'Trivial', 'ElementaryAbelian2',
    'AbelianInvariantFactors', 'Undetermined'.
    """

    kind: str
    rank: int | None = None
    factors: tuple[int, ...] | None = None
    order: int | None = None
    mod2_corank: int | None = None
    note: str | None = None

    def describe(self) -> str:
        if self.kind == "Trivial":
            return "trivial"
        if self.kind == "ElementaryAbelian2":
            return f"Z2^{self.rank}"
        if self.kind == "AbelianInvariantFactors":
            return " x ".join(f"Z{d}" if d else "Z" for d in self.factors)
        detail = f"order {self.order}"
        if self.mod2_corank is not None:
            detail += f", mod-2 co-rank {self.mod2_corank}"
        if self.note:
            detail += f"; {self.note}"
        return f"undetermined ({detail})"


def _is_power_of_two(x):
    return x > 0 and x & (x - 1) == 0


def identify_structure(order, mod2_corank=None, invariant_factors=None) -> StructureVerdict:
    """Decide the kernel structure from its order and abelian evidence.

    Order 1 is trivial.  Order 2^k with mod-2 co-rank k forces the
    elementary abelian group of that rank (the abelianized quotient
    already exhausts the order).  Invariant factors whose product equals
    the order pin down an abelian group.  Anything else, including
    inconsistent evidence, stays undetermined with the evidence attached.
    """
    if order < 1:
        raise ValueError("order must be a positive integer")
    if order == 1:
        return StructureVerdict(kind="Trivial", order=1, mod2_corank=mod2_corank)

    if invariant_factors is not None:
        factors = tuple(invariant_factors)
        if 0 in factors:
            return StructureVerdict(
                kind="Undetermined",
                order=order,
                mod2_corank=mod2_corank,
                factors=factors,
                note="abelianization has free rank but the order is finite",
            )
        prod = 1
        for d in factors:
            prod *= d
        if prod > order:
            return StructureVerdict(
                kind="Undetermined",
                order=order,
                mod2_corank=mod2_corank,
                factors=factors,
                note=f"inconsistent evidence: product of factors {prod} exceeds order",
            )
        if prod == order:
            if factors and all(d == 2 for d in factors):
                return StructureVerdict(
                    kind="ElementaryAbelian2",
                    rank=len(factors),
                    order=order,
                    factors=factors,
                    mod2_corank=mod2_corank,
                )
            return StructureVerdict(
                kind="AbelianInvariantFactors",
                factors=factors,
                order=order,
                mod2_corank=mod2_corank,
            )

    if mod2_corank is not None and _is_power_of_two(order):
        k = order.bit_length() - 1
        if mod2_corank == k:
            return StructureVerdict(
                kind="ElementaryAbelian2",
                rank=k,
                order=order,
                mod2_corank=mod2_corank,
                factors=(2,) * k,
            )

    return StructureVerdict(
        kind="Undetermined",
        order=order,
        mod2_corank=mod2_corank,
        factors=tuple(invariant_factors) if invariant_factors is not None else None,
    )
