"""Permutations of {1..n}, the plane-transposition map, and group orders.

Composition convention, fixed once and used everywhere: (p * q)(x) =
q(p(x)), i.e. the left factor acts first.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Permutation:
    """Bijection of {1..n}; images[i-1] is the image of i."""

    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if sorted(self.images) != list(range(1, n + 1)):
            raise ValueError(f"not a permutation of 1..{n}: {self.images}")

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(tuple(range(1, n + 1)))

    @staticmethod
    def transposition(n: int, i: int, j: int) -> "Permutation":
        if i == j or not (1 <= i <= n and 1 <= j <= n):
            raise ValueError(f"bad transposition ({i} {j}) on 1..{n}")
        images = list(range(1, n + 1))
        images[i - 1], images[j - 1] = j, i
        return Permutation(tuple(images))

    @property
    def degree(self):
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return Permutation(tuple(other.images[x - 1] for x in self.images))

    def inverse(self) -> "Permutation":
        images = [0] * self.degree
        for i, x in enumerate(self.images):
            images[x - 1] = i + 1
        return Permutation(tuple(images))

    def is_identity(self) -> bool:
        return all(x == i + 1 for i, x in enumerate(self.images))

    def cycle_string(self) -> str:
        seen = set()
        parts = []
        for i in range(1, self.degree + 1):
            if i in seen or self(i) == i:
                continue
            cyc = [i]
            j = self(i)
            while j != i:
                seen.add(j)
                cyc.append(j)
                j = self(j)
            parts.append("(" + " ".join(map(str, cyc)) + ")")
        return "".join(parts) or "()"

    def __str__(self):
        return self.cycle_string()


@dataclass(frozen=True)
class SymmetricAssignment:
    """Images of the presentation generators in a symmetric group."""

    degree: int
    images: tuple[Permutation, ...]  # images[k-1] for generator k

    def image(self, generator: int) -> Permutation:
        return self.images[generator - 1]


def plane_transposition_map(c) -> SymmetricAssignment:
    """Send the generator of each edge to the transposition of its planes."""
    n = c.plane_count
    images = []
    for e in sorted(c.edges, key=lambda e: e.id):
        a, b = e.planes
        images.append(Permutation.transposition(n, a, b))
    return SymmetricAssignment(degree=n, images=tuple(images))


def word_image(a: SymmetricAssignment, word) -> Permutation:
    """Evaluate a word left-to-right under the assignment."""
    acc = Permutation.identity(a.degree)
    for x in word:
        g = a.images[abs(x) - 1]
        acc = acc * (g if x > 0 else g.inverse())
    return acc


@dataclass(frozen=True)
class HomomorphismReport:
    holds: bool
    failures: tuple[int, ...]  # indices into the relator list


def verify_homomorphism(pres, a: SymmetricAssignment) -> HomomorphismReport:
    """Check that every relator maps to the identity permutation."""
    if len(a.images) < pres.generator_count:
        raise ValueError("assignment does not cover all generators")
    failures = tuple(
        i for i, w in enumerate(pres.relators) if not word_image(a, w).is_identity()
    )
    return HomomorphismReport(holds=not failures, failures=failures)


def permutation_group_order(gens) -> int:
    """Order of the group generated by ``gens`` via a stabilizer chain.

    Deterministic Schreier-Sims: base points are the smallest moved
    points, transversals grow breadth-first, and Schreier generators are
    sifted until none leaves a residue.  The order is the product of the
    orbit sizes along the chain.
    """
    strong = [g for g in gens if not g.is_identity()]
    if not strong:
        return 1
    degree = strong[0].degree
    if any(g.degree != degree for g in strong):
        raise ValueError("generators must share a degree")

    base: list[int] = []
    transversals: list[dict[int, Permutation]] = []

    def first_moved_base(g):
        for i, b in enumerate(base):
            if g(b) != b:
                return i
        return len(base)

    def level_gens(level):
        return [g for g in strong if first_moved_base(g) >= level]

    def extend_base_for(g):
        for x in range(1, degree + 1):
            if g(x) != x:
                base.append(x)
                transversals.append({})
                return
        raise AssertionError("identity cannot extend the base")

    def rebuild(level):
        point = base[level]
        transversal = {point: Permutation.identity(degree)}
        frontier = [point]
        here = level_gens(level)
        while frontier:
            nxt = []
            for a in frontier:
                t = transversal[a]
                for g in here:
                    b = g(a)
                    if b not in transversal:
                        transversal[b] = t * g
                        nxt.append(b)
            frontier = nxt
        transversals[level] = transversal

    def sift(g):
        for level in range(len(base)):
            b = g(base[level])
            if b not in transversals[level]:
                return g
            g = g * transversals[level][b].inverse()
        return g

    def add(g):
        residue = sift(g)
        if residue.is_identity():
            return False
        if first_moved_base(residue) == len(base):
            extend_base_for(residue)
        strong.append(residue)
        for level in range(len(base)):
            rebuild(level)
        return True

    extend_base_for(strong[0])
    for level in range(len(base)):
        rebuild(level)
    for g in list(strong):
        add(g)

    # fixpoint: every Schreier generator must sift to the identity
    done = False
    while not done:
        done = True
        for level in range(len(base) - 1, -1, -1):
            transversal = transversals[level]
            for a in sorted(transversal):
                t = transversal[a]
                for g in level_gens(level):
                    schreier = t * g * transversal[g(a)].inverse()
                    if add(schreier):
                        done = False
            if not done:
                break

    order = 1
    for t in transversals:
        order *= len(t)
    return order
