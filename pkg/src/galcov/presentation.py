"""Words, finitely presented groups, and relation templates.

Words are tuples of nonzero signed integers: ``k`` is generator number
``k`` (1-based), ``-k`` its inverse.  A presentation stores generator
names together with free-reduced relator words, deduplicated up to cyclic
rotation and inversion so the enumerator never scans the same relation
twice.

The quotient group of interest is the branch-curve complement group
modulo the squares of all standard generators.  With those squares in
place the generator attached to each intersection line coincides with its
primed partner, so the presentation is generated by one involution per
edge of the complex.  :func:`build_tilde_presentation` emits, per the
relation templates of the half-twist dictionary:

* a square for every generator,
* a triple (braid) relation for every vertex-sharing edge pair with a
  common plane,
* a commutator for every parasitic pair and every 4-point diagonal pair,
* a branch relation ``g_k g_i g_j g_i`` for every 3-point ``i < j < k``,
* any dataset-supplied override relations, the projective relator last.

For complexes whose vertices are all 3-points the projective relator is a
product of squares once primed generators are identified, hence trivial
and omitted.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .complexes import (
    DegenerationComplex,
    Inner3,
    Inner4,
    classify_vertex,
    parasitic_pairs,
)

Word = tuple[int, ...]


class PresentationError(Exception):
    """Base class for presentation-level errors."""


class RelationSyntaxError(PresentationError):
    """Relation-grammar line that fails to parse; carries a position."""

    def __init__(self, message, line=None, position=None):
        self.line = line
        self.position = position
        where = ""
        if position is not None:
            where = f" (at token {position})"
        super().__init__(f"{message}{where}" + (f" in {line!r}" if line else ""))


class MissingFourPointData(PresentationError):
    """Complex has inner 4-points but no override relations were supplied."""


# ---------------------------------------------------------------------------
# words


def free_reduce(word) -> Word:
    """Cancel adjacent inverse pairs; idempotent; empty word is identity."""
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def invert_word(word) -> Word:
    return tuple(-x for x in reversed(word))


def substitute(word, gen: int, replacement) -> Word:
    """Replace every occurrence of ``gen``^(+-1) by ``replacement``^(+-1)."""
    repl = tuple(replacement)
    repl_inv = invert_word(repl)
    out = []
    for x in word:
        if x == gen:
            out.extend(repl)
        elif x == -gen:
            out.extend(repl_inv)
        else:
            out.append(x)
    return free_reduce(out)


def renumber_word(word, mapping) -> Word:
    return tuple(mapping[x] if x > 0 else -mapping[-x] for x in word)


def canonical_key(word) -> Word:
    """Smallest rotation of the word or its inverse; dedup key for relators."""
    w = free_reduce(word)
    if not w:
        return w
    best = None
    for cand in (w, invert_word(w)):
        for i in range(len(cand)):
            rot = cand[i:] + cand[:i]
            if best is None or rot < best:
                best = rot
    return best


def involution_reduce(word, involutions) -> Word:
    """Reduce a word modulo free cancellation plus g*g = e for the listed
    involution generators (their exponents are forced positive first).

    Not a free-group operation: it uses the square relators, e.g. the
    adjacent g8 g8 inside the double tetrahedron's projective word cancels
    here but not under :func:`free_reduce`.
    """
    out = []
    for x in word:
        y = abs(x) if abs(x) in involutions else x
        if out and ((y in involutions and out[-1] == y) or out[-1] == -y):
            out.pop()
        else:
            out.append(y)
    return tuple(out)


# ---------------------------------------------------------------------------
# presentations


@dataclass(frozen=True)
class GroupPresentation:
    """Generator names plus free-reduced relator words.

    Construct through :meth:`make`, which normalizes: free reduction,
    removal of empty relators, deduplication up to cyclic rotation and
    inversion (first occurrence kept, order preserved).
    """

    names: tuple[str, ...]
    relators: tuple[Word, ...]

    @classmethod
    def make(cls, names, relators) -> "GroupPresentation":
        names = tuple(names)
        if len(set(names)) != len(names):
            raise PresentationError("duplicate generator names")
        n = len(names)
        seen = set()
        normalized = []
        for w in relators:
            w = free_reduce(w)
            for x in w:
                if not 1 <= abs(x) <= n:
                    raise PresentationError(
                        f"relator references generator {abs(x)} outside 1..{n}"
                    )
            if not w:
                continue
            key = canonical_key(w)
            if key in seen:
                continue
            seen.add(key)
            normalized.append(w)
        return cls(names=names, relators=tuple(normalized))

    @property
    def generator_count(self):
        return len(self.names)

    def id_of(self, name: str) -> int:
        try:
            return self.names.index(name) + 1
        except ValueError:
            raise PresentationError(f"unknown generator {name!r}") from None

    def involutions(self) -> frozenset[int]:
        """Generators g with an explicit relator g^2."""
        out = set()
        for w in self.relators:
            if len(w) == 2 and w[0] == w[1]:
                out.add(abs(w[0]))
        return frozenset(out)

    def total_relator_length(self):
        return sum(len(w) for w in self.relators)

    def __str__(self):
        rels = ", ".join(format_word(w, self.names) for w in self.relators)
        return f"< {', '.join(self.names)} | {rels} >"


# ---------------------------------------------------------------------------
# braid relation templates


@dataclass(frozen=True)
class BraidDescriptor:
    """One singular point of the branch curve, by braid type.

    kind 'branch' records the line j; 'node' and 'cusp' record the two
    lines i, j involved.
    """

    kind: str
    i: int
    j: int | None = None

    def __post_init__(self):
        if self.kind not in ("branch", "node", "cusp"):
            raise ValueError(f"unknown braid kind {self.kind!r}")
        if self.kind == "branch":
            if self.j is not None:
                raise ValueError("branch braids involve a single line")
        else:
            if self.j is None or self.i == self.j:
                raise ValueError(f"{self.kind} braid needs two distinct lines")


def triple_word(i: int, j: int) -> Word:
    """Cusp relation <g_i, g_j>: g_i g_j g_i = g_j g_i g_j as a relator."""
    return (i, j, i, -j, -i, -j)


def commutator_word(i: int, j: int) -> Word:
    return (i, j, -i, -j)


def vk_relation(b: BraidDescriptor, prime_offset: int | None = None) -> Word:
    """Relator induced by a braid under the standard dictionary.

    Branch point -> g_j = g_{j'}; node -> commutator; cusp -> triple.
    Branch relators involve the primed partner, addressed as generator
    ``j + prime_offset``; nodes and cusps ignore the offset.
    """
    if b.kind == "node":
        return commutator_word(b.i, b.j)
    if b.kind == "cusp":
        return triple_word(b.i, b.j)
    if prime_offset is None:
        raise ValueError("branch relators need prime_offset to address g_{j'}")
    return free_reduce((b.i, -(b.i + prime_offset)))


# ---------------------------------------------------------------------------
# relation grammar
#
#   sq K | triple I J | comm I J | ccomm I : W | eq: W1 = W2 | word: W
#   where W is whitespace-separated tokens gK or gK^-1.


def _parse_tokens(tokens, names, line, offset):
    word = []
    for pos, tok in enumerate(tokens):
        base = tok
        exp = 1
        if tok.endswith("^-1"):
            base = tok[:-3]
            exp = -1
        elif "^" in tok:
            raise RelationSyntaxError(
                f"bad exponent in token {tok!r}", line, offset + pos
            )
        if base not in names:
            raise RelationSyntaxError(
                f"unknown generator {base!r}", line, offset + pos
            )
        word.append(exp * (names.index(base) + 1))
    return tuple(word)


def _parse_index(tok, names, line, pos):
    if not tok.isdigit():
        raise RelationSyntaxError(f"expected generator number, got {tok!r}", line, pos)
    name = f"g{tok}"
    if name not in names:
        raise RelationSyntaxError(f"unknown generator {name!r}", line, pos)
    return names.index(name) + 1


def parse_relation(line: str, names) -> Word:
    """Parse one relation-grammar line into a relator word."""
    names = tuple(names)
    tokens = line.split()
    if not tokens:
        raise RelationSyntaxError("empty relation line", line, 0)
    head = tokens[0]
    if head == "sq":
        if len(tokens) != 2:
            raise RelationSyntaxError("usage: sq K", line, len(tokens))
        k = _parse_index(tokens[1], names, line, 1)
        return (k, k)
    if head in ("triple", "comm"):
        if len(tokens) != 3:
            raise RelationSyntaxError(f"usage: {head} I J", line, len(tokens))
        i = _parse_index(tokens[1], names, line, 1)
        j = _parse_index(tokens[2], names, line, 2)
        return triple_word(i, j) if head == "triple" else commutator_word(i, j)
    if head == "ccomm":
        if len(tokens) < 4 or tokens[2] != ":":
            raise RelationSyntaxError("usage: ccomm I : W", line, 2)
        i = _parse_index(tokens[1], names, line, 1)
        w = _parse_tokens(tokens[3:], names, line, 3)
        return free_reduce((i,) + w + (-i,) + invert_word(w))
    if head == "eq:":
        if "=" not in tokens:
            raise RelationSyntaxError("eq: needs '=' between two words", line, 1)
        sep = tokens.index("=")
        w1 = _parse_tokens(tokens[1:sep], names, line, 1)
        w2 = _parse_tokens(tokens[sep + 1 :], names, line, sep + 1)
        if not w1 or not w2:
            raise RelationSyntaxError("eq: needs two non-empty words", line, sep)
        return free_reduce(w1 + invert_word(w2))
    if head == "word:":
        w = _parse_tokens(tokens[1:], names, line, 1)
        if not w:
            raise RelationSyntaxError("word: needs a non-empty word", line, 1)
        return w
    raise RelationSyntaxError(f"unknown relation form {head!r}", line, 0)


def format_word(word, names) -> str:
    return " ".join(
        names[abs(x) - 1] + ("" if x > 0 else "^-1") for x in word
    ) or "1"


def format_relation(word, names) -> str:
    """Render a relator in the relation grammar (recognizing sq/triple/comm)."""
    w = free_reduce(word)

    def num(x):
        name = names[abs(x) - 1]
        return name[1:] if name.startswith("g") and name[1:].isdigit() else None

    if len(w) == 2 and w[0] == w[1] and w[0] > 0 and num(w[0]):
        return f"sq {num(w[0])}"
    if len(w) == 4 and w[0] > 0 and w[1] > 0 and (w[2], w[3]) == (-w[0], -w[1]):
        if num(w[0]) and num(w[1]):
            return f"comm {num(w[0])} {num(w[1])}"
    if (
        len(w) == 6
        and w[0] > 0
        and w[1] > 0
        and w[:3] == (w[0], w[1], w[0])
        and w[3:] == (-w[1], -w[0], -w[1])
        and num(w[0])
        and num(w[1])
    ):
        return f"triple {num(w[0])} {num(w[1])}"
    return "word: " + format_word(w, names)


# ---------------------------------------------------------------------------
# presentation generation from a complex


def build_tilde_presentation(
    c: DegenerationComplex, include_projective: bool = True
) -> GroupPresentation:
    """Generate the quotient-group presentation of a degeneration complex.

    One generator per edge; relators in the order squares, triples,
    commutators, branch relations, overrides, projective relator.
    Raises :class:`MissingFourPointData` when the complex has an inner
    4-point but no override relations.
    """
    edge_ids = sorted(e.id for e in c.edges)
    if edge_ids != list(range(1, len(edge_ids) + 1)):
        raise PresentationError("complex edge ids must be consecutive 1..E")
    names = tuple(f"g{i}" for i in edge_ids)
    by_id = {e.id: e for e in c.edges}

    classes = [classify_vertex(c, v) for v in c.vertices]
    has_four_point = any(isinstance(cl, Inner4) for cl in classes)
    if has_four_point and (c.overrides is None or not c.overrides.extra_relators):
        raise MissingFourPointData(
            f"complex {c.name!r} has inner 4-points; supply override relations"
        )

    relators = [(i, i) for i in edge_ids]

    braid_pairs = set()
    commuting_pairs = set()
    for v in c.vertices:
        ids = sorted(v.edges)
        for a, b in itertools.combinations(ids, 2):
            if by_id[a].plane_set() & by_id[b].plane_set():
                braid_pairs.add((a, b))
            else:
                commuting_pairs.add((a, b))
    commuting_pairs.update(parasitic_pairs(c))

    relators.extend(triple_word(a, b) for a, b in sorted(braid_pairs))
    relators.extend(commutator_word(a, b) for a, b in sorted(commuting_pairs))

    for cl in classes:
        if isinstance(cl, Inner3):
            i, j, k = cl.edges
            relators.append((k, i, j, i))

    projective = None
    if c.overrides is not None:
        for line in c.overrides.extra_relators:
            relators.append(parse_relation(line, names))
        if c.overrides.projective_relator is not None:
            projective = parse_relation(c.overrides.projective_relator, names)
    if include_projective and projective is not None:
        relators.append(projective)

    return GroupPresentation.make(names, relators)


def projective_relator(c: DegenerationComplex) -> Word | None:
    """The dataset's projective relator as a word, or None."""
    if c.overrides is None or c.overrides.projective_relator is None:
        return None
    names = tuple(f"g{e.id}" for e in sorted(c.edges, key=lambda e: e.id))
    return parse_relation(c.overrides.projective_relator, names)


# ---------------------------------------------------------------------------
# Tietze transformations


def _defining_relator_present(pres, gen, replacement):
    """Is g = w recorded as a relator, up to rotation, inversion, and the
    sign of involution generators?"""
    inv = pres.involutions()
    target = canonical_key(
        involution_reduce(free_reduce((gen,) + invert_word(replacement)), inv)
    )
    for r in pres.relators:
        if canonical_key(involution_reduce(r, inv)) == target:
            return True
    return False


def _holds_in_regular_representation(pres, word, table) -> bool:
    rows = table.rows
    cols = [2 * x - 2 if x > 0 else -2 * x - 1 for x in word]
    return all(
        _trace_row(rows, c, cols) == c for c in range(len(rows))
    )


def _trace_row(rows, c, cols):
    for col in cols:
        c = rows[c][col]
    return c


def eliminate_generator(pres, gen, replacement, *, table=None, max_cosets=200_000):
    """Tietze-eliminate ``gen``, substituting ``replacement`` everywhere.

    The equality gen = replacement must hold in the group.  It is accepted
    when a defining relator is present (up to rotation/inversion, with
    involution signs normalized), and otherwise verified by tracing the
    word through a closed coset table of the presentation -- supplied via
    ``table`` or enumerated on demand.  Returns a presentation on the
    remaining generators defining the same group.
    """
    from .enumeration import coset_enumeration  # cycle-free: enumeration has no presentation imports at module top

    if isinstance(gen, str):
        gen = pres.id_of(gen)
    if not 1 <= gen <= pres.generator_count:
        raise PresentationError(f"no generator {gen}")
    if isinstance(replacement, str):
        replacement = parse_word(replacement, pres.names)
    replacement = free_reduce(replacement)
    if any(abs(x) == gen for x in replacement):
        raise PresentationError(
            f"replacement word for {pres.names[gen - 1]} mentions the generator itself"
        )

    if not _defining_relator_present(pres, gen, replacement):
        if table is None:
            table = coset_enumeration(pres, (), max_cosets=max_cosets)
        elif table.generator_count != pres.generator_count:
            raise PresentationError(
                "verification table does not match the presentation "
                f"({table.generator_count} generators vs {pres.generator_count})"
            )
        check = free_reduce((-gen,) + replacement)
        if not _holds_in_regular_representation(pres, check, table):
            raise PresentationError(
                f"relation {pres.names[gen - 1]} = {format_word(replacement, pres.names)}"
                " does not hold; elimination refused"
            )

    new_pres, _ = eliminate_and_rewrite(pres, gen, replacement, ())
    return new_pres


def eliminate_and_rewrite(pres, gen, replacement, companions):
    """Substitute and drop ``gen`` (no validity check) and rewrite the
    companion words through the same substitution and renumbering.

    Internal workhorse behind :func:`eliminate_generator`; callers are
    responsible for having established gen = replacement.
    """
    if isinstance(gen, str):
        gen = pres.id_of(gen)
    mapping = {}
    new_names = []
    for old in range(1, pres.generator_count + 1):
        if old == gen:
            continue
        new_names.append(pres.names[old - 1])
        mapping[old] = len(new_names)

    def rewrite(word):
        return renumber_word(substitute(word, gen, replacement), mapping)

    new_relators = [rewrite(r) for r in pres.relators]
    new_pres = GroupPresentation.make(new_names, new_relators)
    return new_pres, tuple(rewrite(w) for w in companions)


def parse_word(text: str, names) -> Word:
    """Parse a bare whitespace-separated word of gK / gK^-1 tokens."""
    return _parse_tokens(text.split(), tuple(names), text, 0)


def simplify_presentation(pres, eliminate_up_to=4):
    """Cheap Tietze reduction for machine-generated presentations.

    Repeatedly (a) kills generators with a length-1 relator, (b) merges
    generator pairs identified by length-2 relators (one signed union-find
    pass handles them all at once), and (c) eliminates generators that
    occur exactly once in some relator of length <= ``eliminate_up_to``.
    Every step is a Tietze move, so the group (and its abelianization)
    is unchanged.  Rewritten subgroup presentations shrink from thousands
    of generators to a handful this way.
    """
    while True:
        pres, changed = _merge_short_relators(pres)
        if changed:
            continue
        step = _single_occurrence_elimination(pres, eliminate_up_to)
        if step is None:
            return pres
        gen, w = step
        pres, _ = eliminate_and_rewrite(pres, gen, w, ())


def _merge_short_relators(pres):
    """One batched pass over all length-1 and length-2 relators."""
    m = pres.generator_count
    parent = list(range(m + 1))
    sign = [1] * (m + 1)
    dead = [False] * (m + 1)

    def find(g):
        s = 1
        while parent[g] != g:
            s *= sign[g]
            g = parent[g]
        return g, s

    changed = False
    for w in pres.relators:
        if len(w) == 1:
            r, _ = find(abs(w[0]))
            if not dead[r]:
                dead[r] = True
                changed = True
        elif len(w) == 2:
            (ra, sa), (rb, sb) = find(abs(w[0])), find(abs(w[1]))
            pa = sa * (1 if w[0] > 0 else -1)
            pb = sb * (1 if w[1] > 0 else -1)
            if ra == rb:
                continue  # either trivial or a square; squares stay
            # ra^pa * rb^pb = e  =>  ra = rb^(-pa*pb)
            parent[ra] = rb
            sign[ra] = -pa * pb
            if dead[ra]:
                dead[ra] = False
                dead[rb] = True
            changed = True
    if not changed:
        return pres, False

    roots = []
    renumber = {}
    for g in range(1, m + 1):
        r, _ = find(g)
        if not dead[r] and r not in renumber:
            renumber[r] = len(roots) + 1
            roots.append(r)
    new_names = tuple(pres.names[r - 1] for r in roots)

    def rewrite(word):
        out = []
        for x in word:
            r, s = find(abs(x))
            if dead[r]:
                continue
            out.append((1 if x > 0 else -1) * s * renumber[r])
        return free_reduce(out)

    new_relators = [rewrite(w) for w in pres.relators]
    return GroupPresentation.make(new_names, new_relators), True


def _single_occurrence_elimination(pres, max_len):
    """A generator occurring exactly once in some short relator, with its
    derived replacement word; the cheapest such elimination, or None."""
    occurrences = [0] * (pres.generator_count + 1)
    for w in pres.relators:
        for x in w:
            occurrences[abs(x)] += 1
    best = None
    for w in pres.relators:
        if len(w) > max_len:
            continue
        for t, x in enumerate(w):
            g = abs(x)
            if sum(1 for y in w if abs(y) == g) != 1:
                continue
            rot = w[t:] + w[:t]
            repl = invert_word(rot[1:]) if rot[0] > 0 else rot[1:]
            cost = (len(w) - 1) * max(occurrences[g] - 1, 0)
            if best is None or cost < best[0]:
                best = (cost, g, free_reduce(repl))
        if best is not None and best[0] == 0:
            break
    if best is None:
        return None
    return best[1], best[2]
