"""Automorphism groups of K3 surfaces with a rank-2 Picard lattice.

An automorphism is an isometry of the Picard lattice that preserves the
Kahler chamber and whose action on the discriminant group agrees with that
of a Hodge isometry of the transcendental lattice.  Under the generic
assumption those are only +-Id, so the gluing test is "acts as +-1 on A_L".
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field

from . import cone, lattice
from .lattice import (
    DiscriminantGroup,
    GramForm,
    IsometryMatrix,
    discriminant_group,
    induced_disc_map,
)
from .quadratic import DomainError

DEFAULT_DEPTH = 8
CLOSURE_LENGTH = 12
MAX_FINITE_ORDER = 12

STRUCTURES = (
    "trivial",
    "Z2",
    "Z2xZ2",
    "Z",
    "ZxZ2",
    "Z2_star_Z2",
    "Z_star_Z2",
    "unknown",
)


def default_depth() -> int:
    return int(os.environ.get("K3AUT_DEPTH", DEFAULT_DEPTH))


@dataclass(frozen=True)
class GlueAssumption:
    mode: str = "generic"

    def __post_init__(self):
        if self.mode != "generic":
            raise DomainError(f"unsupported gluing mode {self.mode!r}")


GENERIC = GlueAssumption()


def gluing_filter(
    M: IsometryMatrix, A: DiscriminantGroup, assumption: GlueAssumption = GENERIC
) -> bool:
    action = induced_disc_map(M, A)
    return action.is_identity() or action.is_negation()


def finite_order(M: IsometryMatrix) -> int | None:
    """Order of M, or None if infinite.  Torsion in GL_2(Z) has order 1, 2, 3, 4 or 6."""
    P = M
    for k in range(1, MAX_FINITE_ORDER + 1):
        if P.is_identity():
            return k
        P = P @ M
    return None


# -- words and relations -------------------------------------------------------

Word = tuple[tuple[str, int], ...]


def word_str(word: Word) -> str:
    if not word:
        return "1"
    def show(name: str, e: int) -> str:
        if e == 1:
            return name
        if any(ch in name for ch in "^*-"):
            name = f"({name})"
        return f"{name}^{e}"

    return " ".join(show(name, e) for name, e in word)


def evaluate_word(word: Word, gens: dict[str, IsometryMatrix], gram: GramForm) -> IsometryMatrix:
    out = lattice.identity(gram)
    for name, e in word:
        out = out @ gens[name] ** e
    return out


@dataclass(frozen=True)
class Relation:
    """lhs == sign * rhs as matrices."""

    lhs: Word
    rhs: Word = ()
    sign: int = 1

    def holds(self, gens: dict[str, IsometryMatrix]) -> bool:
        gram = next(iter(gens.values())).gram
        left = evaluate_word(self.lhs, gens, gram)
        right = evaluate_word(self.rhs, gens, gram)
        return left == (right if self.sign == 1 else -right)

    def __str__(self) -> str:
        rhs = word_str(self.rhs)
        return f"{word_str(self.lhs)} = {'-' if self.sign < 0 else ''}{rhs}"


@dataclass(frozen=True)
class GroupPresentation:
    generators: dict[str, IsometryMatrix]
    relations: tuple[Relation, ...]
    structure: str
    certificate_depth: int
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if self.structure not in STRUCTURES:
            raise DomainError(f"unknown structure tag {self.structure}")
        for rel in self.relations:
            if not rel.holds(self.generators):
                raise AssertionError(f"relation {rel} does not hold")


def _distinct(words, gens, gram) -> tuple[Word, Word] | None:
    """First pair of words with equal matrices, or None."""
    seen: dict[tuple, Word] = {}
    for w in words:
        key = evaluate_word(w, gens, gram).entries
        if key in seen:
            return seen[key], w
        seen[key] = w
    return None


def _alternating_words(s: str, t: str, depth: int):
    yield ()
    for n in range(1, depth + 1):
        for first, second in ((s, t), (t, s)):
            yield tuple((first if i % 2 == 0 else second, 1) for i in range(n))


def _free_product_words(s: str, t: str, depth: int):
    """Normal forms of <s | s^2> * <t>: alternate s with nonzero powers of t."""

    def extend(word: Word, length: int, last: str | None):
        yield word
        if last != s and length + 1 <= depth:
            yield from extend(word + ((s, 1),), length + 1, s)
        if last != t:
            for e in range(1, depth - length + 1):
                for sgn in (1, -1):
                    yield from extend(word + ((t, sgn * e),), length + e, t)

    yield from extend((), 0, None)


def _dihedral_words(s: str, t: str, depth: int):
    """Normal forms t^k and s t^k of <s, t | s^2, s t s = t^-1>."""
    for k in range(-depth, depth + 1):
        yield ((t, k),) if k else ()
        yield ((s, 1), (t, k)) if k else ((s, 1),)


def free_product_certificate(
    s: IsometryMatrix, t: IsometryMatrix, depth: int
) -> tuple[Word, Word] | None:
    """Check that Z2 * Z normal forms in (s, t) of length <= depth give distinct matrices.

    Returns the first colliding pair of normal-form words, or None when all
    are distinct.
    """
    gens = {"s": s, "t": t}
    return _distinct(_free_product_words("s", "t", depth), gens, s.gram)


def _as_named(gens) -> dict[str, IsometryMatrix]:
    if isinstance(gens, dict):
        return dict(gens)
    return {f"g{i}": M for i, M in enumerate(gens)}


def _commute(a: IsometryMatrix, b: IsometryMatrix) -> bool:
    return a @ b == b @ a


def classify_group(gens, depth: int = DEFAULT_DEPTH) -> GroupPresentation:
    """Identify the group generated by ``gens`` with a finite-depth certificate.

    ``gens`` is a sequence of isometries or a name -> isometry mapping.  Free
    and dihedral products are certified by checking that all normal-form
    words up to ``depth`` give pairwise distinct matrices.
    """
    named = _as_named(gens)
    if not named:
        raise DomainError("need at least one generator")
    grams = {M.gram for M in named.values()}
    if len(grams) != 1:
        raise DomainError("generators act on different forms")
    gram = grams.pop()

    def done(structure, relations=(), certified=depth, notes=()):
        return GroupPresentation(named, tuple(relations), structure, certified, tuple(notes))

    live = {n: M for n, M in named.items() if not M.is_identity()}
    if not live:
        return done("trivial")
    orders = {n: finite_order(M) for n, M in live.items()}
    invol = [n for n in live if orders[n] == 2]
    infinite = [n for n in live if orders[n] is None]
    rels = [Relation(((n, 2),)) for n in invol]

    if len(live) == 1:
        (n,) = live
        if orders[n] == 2:
            return done("Z2", rels)
        if orders[n] is None:
            return done("Z")
        return done("unknown", notes=[f"{n} has order {orders[n]}"])

    if len(live) != 2 or len(invol) + len(infinite) != 2:
        return done("unknown", rels, 0, [f"unsupported generator orders {orders}"])

    a, b = live
    A, B = live[a], live[b]
    if len(invol) == 2:
        if _commute(A, B):
            if A == B:
                return done("unknown", rels, 0, ["repeated generator"])
            return done("Z2xZ2", rels + [Relation(((a, 1), (b, 1)), ((b, 1), (a, 1)))])
        if finite_order(A @ B) is not None:
            return done("unknown", rels, 0, [f"{a} {b} has finite order"])
        clash = _distinct(_alternating_words(a, b, depth), live, gram)
        if clash:
            return done("unknown", rels, 0, [f"collision {word_str(clash[0])} = {word_str(clash[1])}"])
        return done("Z2_star_Z2", rels)

    if len(invol) == 1 and len(infinite) == 1:
        s, t = invol[0], infinite[0]
        S, T = live[s], live[t]
        if _commute(S, T):
            rels.append(Relation(((s, 1), (t, 1)), ((t, 1), (s, 1))))
            words = [((t, k),) if k else () for k in range(-depth, depth + 1)]
            words += [((s, 1), (t, k)) if k else ((s, 1),) for k in range(-depth, depth + 1)]
            clash = _distinct(words, live, gram)
            return done("unknown" if clash else "ZxZ2", rels, 0 if clash else depth)
        notes = []
        fp_clash = _distinct(_free_product_words(s, t, depth), live, gram)
        if fp_clash is None:
            return done("Z_star_Z2", rels)
        notes.append(
            f"free product normal forms collide: {word_str(fp_clash[0])} = {word_str(fp_clash[1])}"
        )
        if S @ T @ S == T.inverse():
            rels.append(Relation(((s, 1), (t, 1), (s, 1)), ((t, -1),)))
            clash = _distinct(_dihedral_words(s, t, depth), live, gram)
            if clash is None:
                notes.append(f"{s} {t} is an involution: infinite dihedral group")
                return done("Z2_star_Z2", rels, depth, notes)
        return done("unknown", rels, 0, notes)

    return done("unknown", rels, 0, [f"unsupported generator orders {orders}"])


# -- assembly -------------------------------------------------------------------


def word_ball(
    gens: dict[str, IsometryMatrix], length: int = CLOSURE_LENGTH
) -> dict[tuple, tuple[IsometryMatrix, tuple[str, ...]]]:
    """All products of at most ``length`` generators or their inverses, keyed by entries."""
    gens = _with_inverses(gens)
    gram = next(iter(gens.values())).gram
    start = lattice.identity(gram)
    ball = {start.entries: (start, ())}
    frontier = deque([(start, ())])
    for _ in range(length):
        nxt = deque()
        for M, word in frontier:
            for name, G in gens.items():
                P = M @ G
                if P.entries not in ball:
                    ball[P.entries] = (P, word + (name,))
                    nxt.append((P, word + (name,)))
        frontier = nxt
    return ball


def _letter(name: str) -> tuple[str, int]:
    return (name[:-3], -1) if name.endswith("^-1") else (name, 1)


def render_word(word: tuple[str, ...]) -> str:
    """Compact name for a generator word, e.g. ('X', 'X') -> 'X^2', ('-I', 'Q') -> '-Q'."""
    negate = sum(1 for w in word if w == "-I") % 2 == 1
    parts: list[list] = []
    for base, e in (_letter(w) for w in word if w != "-I"):
        if parts and parts[-1][0] == base:
            parts[-1][1] += e
            if parts[-1][1] == 0:
                parts.pop()
        else:
            parts.append([base, e])
    if not parts:
        return "-I" if negate else "I"
    body = "*".join(n if e == 1 else f"{n}^{e}" for n, e in parts)
    return ("-" if negate else "") + body


def choose_generators(
    elements: list[tuple[IsometryMatrix, tuple[str, ...]]], length: int = CLOSURE_LENGTH
) -> dict[str, IsometryMatrix]:
    """A small generating set for a finite sample of a subgroup.

    The infinite-order element of least size comes first (ties: largest
    entries tuple), then finite-order elements by increasing size, each kept
    only if the elements chosen so far do not already reach it.
    """
    nontrivial = [(M, w) for M, w in elements if not M.is_identity()]
    key = lambda mw: (mw[0].matrix.size(), mw[0].entries)  # noqa: E731
    inf = [mw for mw in nontrivial if finite_order(mw[0]) is None]
    fin = sorted((mw for mw in nontrivial if finite_order(mw[0]) is not None), key=key)
    ordered = []
    if inf:
        smallest = min(M.matrix.size() for M, _ in inf)
        ordered.append(max((mw for mw in inf if mw[0].matrix.size() == smallest), key=lambda mw: mw[0].entries))
    ordered += fin + sorted(inf, key=key)
    chosen: dict[str, IsometryMatrix] = {}
    reached: set = {lattice.identity(elements[0][0].gram).entries}
    for M, w in ordered:
        if M.entries in reached:
            continue
        name = render_word(w)
        while name in chosen:
            name += "'"
        chosen[name] = M
        reached = set(word_ball(chosen, length))
    return chosen


def _with_inverses(gens: dict[str, IsometryMatrix]) -> dict[str, IsometryMatrix]:
    out = dict(gens)
    for n, M in gens.items():
        inv = M.inverse()
        if inv != M and n + "^-1" not in gens:
            out[n + "^-1"] = inv
    return out


def infinite_criterion(Q: GramForm, roots: lattice.RootClasses | None = None) -> bool:
    """True iff Q has provably no roots and no isotropic vectors."""
    lattice.require_hyperbolic(Q)
    if roots is None:
        roots = lattice.root_classes(Q, 50)
    return roots.proved_empty and not lattice.isotropic_classes(Q).vectors


@dataclass(frozen=True)
class AutReport:
    gram: GramForm
    family: tuple[str, int] | None
    roots: lattice.RootClasses
    isotropic: lattice.IsotropicClasses
    chamber: cone.Chamber
    discriminant: DiscriminantGroup
    isometry_generators: lattice.IsometryGenerators
    aut_generators: dict[str, IsometryMatrix]
    presentation: GroupPresentation
    infinite: bool
    reference: dict = field(default_factory=dict)
    discrepancies: tuple[str, ...] = ()

    def __post_init__(self):
        for name, M in self.aut_generators.items():
            if not cone.preserves_chamber(M, self.chamber):
                raise AssertionError(f"{name} does not preserve the chamber")
            if not gluing_filter(M, self.discriminant):
                raise AssertionError(f"{name} fails the gluing condition")


def published_expectation(family: tuple[str, int] | None) -> dict:
    """What the literature states for the two families (empty for other forms)."""
    if family is None:
        return {}
    name, d = family
    if name == "L":
        return {
            "structure": "Z2",
            "generators": {"-S0-": [1, d, 0, -1]},
            "roots_exist": True,
            "infinite": False,
        }
    return {
        "structure": "Z_star_Z2",
        "generators": {"P": [-1, 0, d, 1], "X^2": [d * d - 1, d, -d, -1]},
        "roots_exist": False,
        "infinite": True,
    }


def _discrepancies(report_bits: dict, family) -> list[str]:
    if family is None:
        return []
    name, d = family
    out = []
    if name == "M" and report_bits["roots"]:
        r = min(report_bits["roots"], key=lambda v: (abs(v[0]) + abs(v[1]), v))
        out.append(
            f"M_{d} has roots (e.g. {tuple(r)}) although no (-2)-classes are claimed"
        )
    if name == "M" and not report_bits["roots"]:
        if report_bits["structure"] != "Z_star_Z2":
            out.append(
                f"Aut(M_{d}) computed as {report_bits['structure']}, claimed Z_star_Z2"
            )
    if name == "L" and d == 3:
        out.append("-I lies in O(L_3) but not in <Q0+, Q0->; O(L_3) = <Q0+, Q0-> x {+-I}")
    return out


def aut_group(
    Q: GramForm,
    assumption: GlueAssumption = GENERIC,
    depth: int | None = None,
    root_bound: int = cone.DEFAULT_ROOT_BOUND,
) -> AutReport:
    """Kahler-cone preserving, gluing-compatible isometries of Q and their group."""
    lattice.require_hyperbolic(Q)
    depth = default_depth() if depth is None else depth
    roots = lattice.root_classes(Q, root_bound)
    chamber = cone.chamber_walls(Q, roots)
    gens = lattice.isometry_generators(Q)
    A = discriminant_group(Q)
    ball = word_ball(gens.named, CLOSURE_LENGTH)
    kept = [
        (M, w)
        for M, w in ball.values()
        if cone.preserves_chamber(M, chamber) and gluing_filter(M, A, assumption)
    ]
    aut_gens = choose_generators(kept)
    presentation = classify_group(aut_gens or {"I": lattice.identity(Q)}, depth)
    family = gens.family
    infinite = infinite_criterion(Q, roots)
    bits = {"roots": roots.roots, "structure": presentation.structure}
    return AutReport(
        gram=Q,
        family=family,
        roots=roots,
        isotropic=lattice.isotropic_classes(Q),
        chamber=chamber,
        discriminant=A,
        isometry_generators=gens,
        aut_generators=aut_gens,
        presentation=presentation,
        infinite=infinite,
        reference=published_expectation(family),
        discrepancies=tuple(_discrepancies(bits, family)),
    )
