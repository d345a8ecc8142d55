"""Coset enumeration for finitely presented groups.

Classic relator-scanning (HLT) enumeration with immediate coincidence
processing through a union-find table:

* cosets are created in scan order, at the first undefined entry of the
  relator being traced, so two runs on the same input build identical
  tables;
* every live coset scans every relator; gaps of width one become
  deductions, wider gaps trigger definitions, mismatched closures merge
  cosets;
* after the queue of coincidences drains, all entries of live rows point
  at live cosets again, so the scanning loops need no find() calls;
* once all scans close, remaining undefined entries are filled with fresh
  definitions, and the final table is compressed to consecutive numbering.

Enumerations that would allocate more than ``max_cosets`` cosets raise
:class:`EnumerationOverflow`: the answer is undecided at that bound, not
proven infinite.  A returned table is always closed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .permutations import Permutation


class EnumerationOverflow(RuntimeError):
    """Coset allocation hit the bound before the table closed."""

    def __init__(self, max_cosets):
        self.max_cosets = max_cosets
        super().__init__(
            f"coset enumeration exceeded {max_cosets} cosets (undecided at this bound)"
        )


def _column(letter: int) -> int:
    return 2 * letter - 2 if letter > 0 else -2 * letter - 1


def _inverse_column(col: int) -> int:
    return col ^ 1


@dataclass(frozen=True)
class CosetTable:
    """Closed coset table: rows[c][col] is the target coset, 0-based.

    Column ``2k-2`` is the action of generator k, column ``2k-1`` of its
    inverse.  Each generator column is a permutation of the cosets and
    every relator traces back to its starting coset.
    """

    generator_count: int
    rows: tuple[tuple[int, ...], ...]
    subgroup_words: tuple[tuple[int, ...], ...] = ()

    @property
    def coset_count(self):
        return len(self.rows)

    def target(self, coset: int, letter: int) -> int:
        return self.rows[coset][_column(letter)]

    def trace(self, coset: int, word) -> int:
        rows = self.rows
        for x in word:
            coset = rows[coset][_column(x)]
        return coset


def coset_enumeration(pres, subgroup_words=(), max_cosets=1_000_000) -> CosetTable:
    """Enumerate the cosets of the subgroup generated by ``subgroup_words``
    in the group of ``pres``.  Deterministic for fixed input."""
    if max_cosets < 1:
        raise ValueError("max_cosets must be at least 1")
    ngens = pres.generator_count
    ncols = 2 * ngens
    relator_cols = [tuple(_column(x) for x in w) for w in pres.relators if w]
    subgroup_cols = [tuple(_column(x) for x in w) for w in subgroup_words]
    for w in subgroup_words:
        for x in w:
            if not 1 <= abs(x) <= ngens:
                raise ValueError(f"subgroup word references generator {abs(x)}")

    table = [[-1] * ncols]
    p = [0]

    def rep(k):
        r = k
        while p[r] != r:
            r = p[r]
        while p[k] != r:
            p[k], k = r, p[k]
        return r

    def define(alpha, col):
        if len(table) >= max_cosets:
            raise EnumerationOverflow(max_cosets)
        beta = len(table)
        table.append([-1] * ncols)
        p.append(beta)
        table[alpha][col] = beta
        table[beta][col ^ 1] = alpha
        return beta

    def coincidence(a, b):
        queue = []

        def merge(x, y):
            x, y = rep(x), rep(y)
            if x != y:
                if x > y:
                    x, y = y, x
                p[y] = x
                queue.append(y)

        merge(a, b)
        qi = 0
        while qi < len(queue):
            gamma = queue[qi]
            qi += 1
            row = table[gamma]
            table[gamma] = None
            for col in range(ncols):
                delta = row[col]
                if delta < 0:
                    continue
                drow = table[delta]
                if drow is not None and drow[col ^ 1] == gamma:
                    drow[col ^ 1] = -1
                mu, nu = rep(gamma), rep(delta)
                mrow, nrow = table[mu], table[nu]
                if mrow[col] >= 0:
                    merge(nu, mrow[col])
                elif nrow[col ^ 1] >= 0:
                    merge(mu, nrow[col ^ 1])
                else:
                    mrow[col] = nu
                    nrow[col ^ 1] = mu

    def scan_and_fill(alpha, cols):
        f, b = alpha, alpha
        i, j = 0, len(cols) - 1
        while True:
            frow = table[f]
            while i <= j and frow[cols[i]] >= 0:
                f = frow[cols[i]]
                frow = table[f]
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            brow = table[b]
            while j >= i and brow[cols[j] ^ 1] >= 0:
                b = brow[cols[j] ^ 1]
                brow = table[b]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if j == i:
                frow[cols[i]] = b
                brow[cols[i] ^ 1] = f
                return
            define(f, cols[i])

    for cols in subgroup_cols:
        if cols:
            scan_and_fill(0, cols)

    alpha = 0
    while alpha < len(table):
        if p[alpha] == alpha:
            for cols in relator_cols:
                scan_and_fill(alpha, cols)
                if p[alpha] != alpha:
                    break
            if p[alpha] == alpha:
                row = table[alpha]
                for col in range(ncols):
                    if row[col] < 0:
                        define(alpha, col)
                        row = table[alpha]
        alpha += 1

    # compress to consecutive numbering, preserving definition order
    live = [i for i in range(len(table)) if p[i] == i]
    renumber = {old: new for new, old in enumerate(live)}
    rows = tuple(
        tuple(renumber[rep(x)] for x in table[old]) for old in live
    )
    return CosetTable(
        generator_count=ngens,
        rows=rows,
        subgroup_words=tuple(tuple(w) for w in subgroup_words),
    )


def group_order(table: CosetTable) -> int:
    """Order of the group: coset count over the trivial subgroup."""
    if table.subgroup_words:
        raise ValueError("table was built over a non-trivial subgroup")
    return table.coset_count


def generator_permutations(table: CosetTable) -> tuple[Permutation, ...]:
    """Action of each generator on the cosets, as permutations of 1..N."""
    perms = []
    for k in range(1, table.generator_count + 1):
        col = _column(k)
        perms.append(Permutation(tuple(row[col] + 1 for row in table.rows)))
    return tuple(perms)


def verify_table(pres, table: CosetTable) -> None:
    """Exhaustive closure check, independent of the enumeration strategy.

    Every generator column must be a permutation of the cosets and every
    relator must trace back to its starting coset from every coset.
    """
    n = table.coset_count
    for k in range(1, table.generator_count + 1):
        col = _column(k)
        images = [row[col] for row in table.rows]
        if sorted(images) != list(range(n)):
            raise AssertionError(f"generator {k} does not act as a permutation")
        for c, img in enumerate(images):
            if table.rows[img][col ^ 1] != c:
                raise AssertionError(f"inverse column of generator {k} inconsistent")
    for w in pres.relators:
        cols = [_column(x) for x in w]
        for c in range(n):
            d = c
            for col in cols:
                d = table.rows[d][col]
            if d != c:
                raise AssertionError(
                    f"relator {w} does not trace to identity from coset {c}"
                )
