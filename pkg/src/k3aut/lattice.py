"""Rank-2 even lattices: forms, roots, isometries and discriminant groups.

Conventions: vectors are columns and an isometry ``M`` acts by ``v -> M v``,
so ``M`` is an isometry of the Gram matrix ``G`` when ``M^T G M = G``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import NamedTuple

from . import pell
from .quadratic import DomainError, is_perfect_square


class LatticeVector(NamedTuple):
    x: int
    y: int

    def __neg__(self) -> LatticeVector:
        return LatticeVector(-self.x, -self.y)

    def canonical(self) -> LatticeVector:
        """The representative of {v, -v} whose first nonzero coordinate is positive."""
        return self if (self.x, self.y) > (0, 0) else -self

    def primitive(self) -> LatticeVector:
        g = math.gcd(self.x, self.y)
        return LatticeVector(self.x // g, self.y // g) if g else self


@dataclass(frozen=True)
class GramForm:
    g00: int
    g01: int
    g11: int

    def __post_init__(self):
        if self.g00 % 2 or self.g11 % 2:
            raise DomainError(f"{self} is not even")
        if self.det == 0:
            raise DomainError(f"{self} is degenerate")

    @property
    def det(self) -> int:
        return self.g00 * self.g11 - self.g01 * self.g01

    @property
    def discriminant(self) -> int:
        """-det, the discriminant of the binary form (g00/2, g01, g11/2)."""
        return -self.det

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.g00, self.g01), (self.g01, self.g11))

    def pair(self, u, v):
        """Bilinear pairing; works for ints, Fractions and QuadRat coordinates."""
        return (
            u[0] * (self.g00 * v[0] + self.g01 * v[1])
            + u[1] * (self.g01 * v[0] + self.g11 * v[1])
        )

    def value(self, v):
        return self.pair(v, v)

    def dual_image(self, v) -> tuple[int, int]:
        """G v, the pairing functional of v in the dual basis."""
        return (self.g00 * v[0] + self.g01 * v[1], self.g01 * v[0] + self.g11 * v[1])

    def __str__(self) -> str:
        return f"[[{self.g00},{self.g01}],[{self.g01},{self.g11}]]"


def evaluate_form(Q: GramForm, v) -> int:
    return Q.value(v)


FAMILIES = ("L", "M")


def family_gram(family: str, d: int) -> GramForm:
    """L_d = [[2,d],[d,-2]] and M_d = [[2,d],[d,2]] for odd d >= 1."""
    if family not in FAMILIES:
        raise DomainError(f"unknown family {family!r}")
    if d < 1 or d % 2 == 0:
        raise DomainError(f"d must be a positive odd integer, got {d}")
    return GramForm(2, d, -2 if family == "L" else 2)


def detect_family(Q: GramForm) -> tuple[str, int] | None:
    if Q.g00 == 2 and Q.g01 > 0 and Q.g01 % 2 == 1:
        if Q.g11 == -2:
            return "L", Q.g01
        if Q.g11 == 2:
            return "M", Q.g01
    return None


def signature(Q: GramForm) -> tuple[int, int]:
    if Q.det < 0:
        return (1, 1)
    return (2, 0) if Q.g00 > 0 else (0, 2)


def require_hyperbolic(Q: GramForm) -> None:
    if signature(Q) != (1, 1):
        raise DomainError(f"{Q} has signature {signature(Q)}, need (1, 1)")


# -- 2x2 integer matrices -----------------------------------------------------


@dataclass(frozen=True)
class IntMatrix:
    m00: int
    m01: int
    m10: int
    m11: int

    @classmethod
    def identity(cls) -> IntMatrix:
        return cls(1, 0, 0, 1)

    @classmethod
    def from_rows(cls, rows) -> IntMatrix:
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.m00, self.m01, self.m10, self.m11)

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.m00, self.m01), (self.m10, self.m11))

    @property
    def det(self) -> int:
        return self.m00 * self.m11 - self.m01 * self.m10

    @property
    def trace(self) -> int:
        return self.m00 + self.m11

    def size(self) -> int:
        return max(abs(e) for e in self.entries)

    def __matmul__(self, o: IntMatrix) -> IntMatrix:
        return IntMatrix(
            self.m00 * o.m00 + self.m01 * o.m10,
            self.m00 * o.m01 + self.m01 * o.m11,
            self.m10 * o.m00 + self.m11 * o.m10,
            self.m10 * o.m01 + self.m11 * o.m11,
        )

    def __neg__(self) -> IntMatrix:
        return IntMatrix(-self.m00, -self.m01, -self.m10, -self.m11)

    def transpose(self) -> IntMatrix:
        return IntMatrix(self.m00, self.m10, self.m01, self.m11)

    def inverse(self) -> IntMatrix:
        det = self.det
        if det not in (1, -1):
            raise DomainError(f"{self.rows()} is not invertible over Z")
        return IntMatrix(self.m11 * det, -self.m01 * det, -self.m10 * det, self.m00 * det)

    def __pow__(self, n: int) -> IntMatrix:
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        result = IntMatrix.identity()
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def apply(self, v):
        return (self.m00 * v[0] + self.m01 * v[1], self.m10 * v[0] + self.m11 * v[1])

    def is_isometry_of(self, Q: GramForm) -> bool:
        (a, b), (c, d) = self.rows()
        col0, col1 = (a, c), (b, d)
        return (
            Q.value(col0) == Q.g00
            and Q.pair(col0, col1) == Q.g01
            and Q.value(col1) == Q.g11
        )


@dataclass(frozen=True)
class IsometryMatrix:
    """An integer matrix M with M^T Q M = Q; construction checks the identity."""

    matrix: IntMatrix
    gram: GramForm

    def __post_init__(self):
        if not self.matrix.is_isometry_of(self.gram):
            raise DomainError(f"{self.matrix.rows()} is not an isometry of {self.gram}")
        if self.matrix.det not in (1, -1):
            raise DomainError(f"{self.matrix.rows()} has det {self.matrix.det}")

    @classmethod
    def of(cls, rows, gram: GramForm) -> IsometryMatrix:
        return cls(IntMatrix.from_rows(rows), gram)

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return self.matrix.entries

    @property
    def det(self) -> int:
        return self.matrix.det

    @property
    def trace(self) -> int:
        return self.matrix.trace

    def rows(self):
        return self.matrix.rows()

    def _check(self, other: IsometryMatrix) -> None:
        if other.gram != self.gram:
            raise DomainError(f"isometries of different forms {self.gram} and {other.gram}")

    def __matmul__(self, other: IsometryMatrix) -> IsometryMatrix:
        self._check(other)
        return IsometryMatrix(self.matrix @ other.matrix, self.gram)

    def __neg__(self) -> IsometryMatrix:
        return IsometryMatrix(-self.matrix, self.gram)

    def __pow__(self, n: int) -> IsometryMatrix:
        return IsometryMatrix(self.matrix**n, self.gram)

    def inverse(self) -> IsometryMatrix:
        return IsometryMatrix(self.matrix.inverse(), self.gram)

    def is_identity(self) -> bool:
        return self.matrix == IntMatrix.identity()

    def apply(self, v):
        return self.matrix.apply(v)


def identity(Q: GramForm) -> IsometryMatrix:
    return IsometryMatrix(IntMatrix.identity(), Q)


# -- roots ---------------------------------------------------------------------


@dataclass(frozen=True)
class RootClasses:
    """Roots (v.v = -2) within a box, one per +-pair.

    ``proved_empty`` means the lattice has no roots at all; ``finite`` means
    the full root set is finite (square discriminant), in which case
    ``finite_roots`` lists it completely regardless of ``bound``.
    """

    gram: GramForm
    bound: int
    roots: tuple[LatticeVector, ...]
    proved_empty: bool
    finite: bool
    certificate: str = ""
    finite_roots: tuple[LatticeVector, ...] | None = None


def _roots_finite(Q: GramForm) -> list[LatticeVector] | None:
    """All roots when the discriminant is a square (finitely many), else None."""
    a, b, c = Q.g00 // 2, Q.g01, Q.g11 // 2
    Delta = Q.discriminant
    q = is_perfect_square(Delta)
    if q is None:
        return None
    found = set()
    if a == 0:
        # y (b x + c y) = -1 forces y = +-1
        for y in (1, -1):
            num = -y - c * y  # b x = -1/y - c y
            if num % b == 0:
                found.add(LatticeVector(num // b, y))
    else:
        # (X - q y)(X + q y) = -4a with X = 2a x + b y
        n = -4 * a
        for e in range(1, abs(n) + 1):
            if n % e:
                continue
            for e_s in (e, -e):
                f = n // e_s
                if (e_s + f) % 2 or (f - e_s) % (2 * q):
                    continue
                X, y = (e_s + f) // 2, (f - e_s) // (2 * q)
                if (X - b * y) % (2 * a) == 0:
                    found.add(LatticeVector((X - b * y) // (2 * a), y))
    roots = sorted({v.canonical() for v in found})
    assert all(Q.value(v) == -2 for v in roots)
    return roots


def scan_roots(Q: GramForm, bound: int) -> list[LatticeVector]:
    """Direct box scan for roots; the slow, obviously-correct reference path."""
    out = set()
    for x, y in product(range(-bound, bound + 1), repeat=2):
        if Q.value((x, y)) == -2:
            out.add(LatticeVector(x, y).canonical())
    return sorted(out)


def _roots_by_pell(Q: GramForm, bound: int) -> list[LatticeVector]:
    # a x^2 + b x y + c y^2 = -1 with a = g00/2, c = g11/2; for each y the
    # quadratic in x needs Delta y^2 - 4a to be a square.
    a, b, c = Q.g00 // 2, Q.g01, Q.g11 // 2
    Delta = Q.discriminant
    out = set()
    for y in range(-bound, bound + 1):
        if a == 0:
            # b x y + c y^2 = -1
            if y and (-1 - c * y * y) % (b * y) == 0:
                x = (-1 - c * y * y) // (b * y)
                if abs(x) <= bound:
                    out.add(LatticeVector(x, y).canonical())
            continue
        X = is_perfect_square(Delta * y * y - 4 * a)
        if X is None:
            continue
        for s in {X, -X}:
            if (s - b * y) % (2 * a) == 0:
                x = (s - b * y) // (2 * a)
                if abs(x) <= bound:
                    out.add(LatticeVector(x, y).canonical())
    return sorted(out)


def _root_emptiness(Q: GramForm) -> str | None:
    """A reason the lattice has no roots at all, or None."""
    finite = _roots_finite(Q)
    if finite is not None:
        return "finite root set enumerated by factoring" if not finite else None
    a = Q.g00 // 2
    D, N = Q.discriminant, -4 * a
    if a in (1, -1):
        if pell.is_solvable(pell.PellProblem(D, N)):
            return None
    cert = pell.unsolvability_certificate(D, N)
    if cert is None:
        return None
    return f"X^2 - {D} Y^2 = {N} unsolvable: {cert}"


def root_classes(Q: GramForm, bound: int, cross_check_limit: int = 60) -> RootClasses:
    """Roots with |x|, |y| <= bound via the Pell reduction, checked by scan for small bounds."""
    require_hyperbolic(Q)
    if bound < 0:
        raise DomainError("bound must be nonnegative")
    roots = _roots_by_pell(Q, bound)
    if bound <= cross_check_limit and roots != scan_roots(Q, bound):
        raise AssertionError(f"Pell path and scan disagree for {Q} at bound {bound}")
    finite = _roots_finite(Q)
    reason = _root_emptiness(Q)
    if reason is not None and roots:
        raise AssertionError(f"emptiness certificate contradicts roots {roots[:3]}")
    return RootClasses(
        gram=Q,
        bound=bound,
        roots=tuple(roots),
        proved_empty=reason is not None,
        finite=finite is not None,
        certificate=reason or "",
        finite_roots=tuple(finite) if finite is not None else None,
    )


@dataclass(frozen=True)
class IsotropicClasses:
    vectors: tuple[LatticeVector, ...]
    discriminant: int
    square_root: int | None


def isotropic_classes(Q: GramForm) -> IsotropicClasses:
    """Primitive isotropic directions; empty exactly when -det is not a square."""
    require_hyperbolic(Q)
    Delta = Q.discriminant
    q = is_perfect_square(Delta)
    if q is None:
        return IsotropicClasses((), Delta, None)
    if Q.g00 == 0:
        dirs = [LatticeVector(1, 0), LatticeVector(Q.g11, -2 * Q.g01)]
    else:
        dirs = [LatticeVector(-Q.g01 + q, Q.g00), LatticeVector(-Q.g01 - q, Q.g00)]
    vecs = tuple(sorted({v.primitive().canonical() for v in dirs}))
    assert all(Q.value(v) == 0 for v in vecs)
    return IsotropicClasses(vecs, Delta, q)


# -- isometries ---------------------------------------------------------------


@dataclass(frozen=True)
class IsometryGenerators:
    gram: GramForm
    named: dict[str, IsometryMatrix]
    family: tuple[str, int] | None
    verified: bool
    search_bound: int | None = None

    def items(self):
        return self.named.items()

    def matrices(self) -> list[IsometryMatrix]:
        return list(self.named.values())


def _vectors_of_value(Q: GramForm, n: int, bound: int) -> list[tuple[int, int]]:
    out = []
    for y in range(-bound, bound + 1):
        if Q.g00 == 0:
            lin, rest = 2 * Q.g01 * y, n - Q.g11 * y * y
            if lin == 0:
                if rest == 0:
                    out.extend((x, y) for x in range(-bound, bound + 1))
            elif rest % lin == 0 and abs(rest // lin) <= bound:
                out.append((rest // lin, y))
            continue
        disc = (Q.g01 * y) ** 2 - Q.g00 * (Q.g11 * y * y - n)
        s = is_perfect_square(disc)
        if s is None:
            continue
        for root in {s, -s}:
            num = -Q.g01 * y + root
            if num % Q.g00 == 0 and abs(num // Q.g00) <= bound:
                out.append((num // Q.g00, y))
    return out


def brute_force_isometries(Q: GramForm, bound: int) -> list[IsometryMatrix]:
    """Every isometry with all entries in [-bound, bound], sorted by entries.

    Exhaustive over the box, organised column by column: the first column
    must have square g00, the second square g11, and they must pair to g01.
    """
    if bound < 0:
        raise DomainError("bound must be nonnegative")
    firsts = _vectors_of_value(Q, Q.g00, bound)
    seconds = _vectors_of_value(Q, Q.g11, bound)
    out = []
    for u in firsts:
        for w in seconds:
            if Q.pair(u, w) == Q.g01:
                m = IntMatrix(u[0], w[0], u[1], w[1])
                if m.det in (1, -1):
                    out.append(IsometryMatrix(m, Q))
    out.sort(key=lambda M: M.entries)
    return out


def _proper_automorph(Q: GramForm) -> IsometryMatrix | None:
    """Generator of the infinite part of SO(Q), from t^2 - Delta' u^2 = 4."""
    a, b, c = Q.g00 // 2, Q.g01, Q.g11 // 2
    g = math.gcd(a, b, c)
    a, b, c = a // g, b // g, c // g
    Delta = b * b - 4 * a * c
    if is_perfect_square(Delta) is not None:
        return None
    sol = pell.solve_fundamental(pell.PellProblem(Delta, 4))
    t, u = sol.a, sol.b
    return IsometryMatrix(IntMatrix((t - b * u) // 2, -c * u, a * u, (t + b * u) // 2), Q)


def isometry_generators(Q: GramForm, search_bound: int = 30) -> IsometryGenerators:
    """Named generators of O(Q).

    The two families get closed-form generators.  Any other hyperbolic form
    gets -I, the fundamental proper automorph and the smallest improper
    isometry found by a bounded search; that set is flagged unverified.
    """
    require_hyperbolic(Q)
    fam = detect_family(Q)
    minus = IsometryMatrix(-IntMatrix.identity(), Q)
    if fam is not None:
        name, d = fam
        if name == "L":
            named = {
                "-I": minus,
                "S0+": IsometryMatrix.of(((-1, 0), (-d, 1)), Q),
                "S0-": IsometryMatrix.of(((-1, -d), (0, 1)), Q),
            }
        else:
            named = {
                "-I": minus,
                "X": IsometryMatrix.of(((d, 1), (-1, 0)), Q),
                "Y": IsometryMatrix.of(((0, 1), (1, 0)), Q),
                "P": IsometryMatrix.of(((-1, 0), (d, 1)), Q),
                "Q": IsometryMatrix.of(((-1, -d), (0, 1)), Q),
            }
        return IsometryGenerators(Q, named, fam, verified=True)

    named = {"-I": minus}
    rho = _proper_automorph(Q)
    if rho is not None:
        named["rho"] = rho
    found = brute_force_isometries(Q, search_bound)
    improper = [M for M in found if M.det == -1]
    if improper:
        named["sigma"] = min(improper, key=lambda M: (M.matrix.size(), M.entries))
    if rho is None:
        # isotropic case: O(Q) is finite, keep every proper element found
        for M in found:
            if M.det == 1 and not M.is_identity() and M != minus:
                named[f"g{len(named)}"] = M
    return IsometryGenerators(Q, named, None, verified=False, search_bound=search_bound)


# -- discriminant group --------------------------------------------------------


def smith_normal_form(A):
    """Smith form of a small integer matrix with unimodular transforms.

    Returns ``(S, U, V)`` with ``U A V = S`` diagonal, nonnegative, and each
    diagonal entry dividing the next.  Matrices are lists of lists.
    """
    n, m = len(A), len(A[0])
    S = [list(row) for row in A]
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    V = [[int(i == j) for j in range(m)] for i in range(m)]

    def swap_rows(M, i, j):
        M[i], M[j] = M[j], M[i]

    def swap_cols(M, i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]

    def add_row(M, src, dst, k):
        M[dst] = [x + k * y for x, y in zip(M[dst], M[src])]

    def add_col(M, src, dst, k):
        for row in M:
            row[dst] += k * row[src]

    for t in range(min(n, m)):
        while True:
            nz = [(abs(S[i][j]), i, j) for i in range(t, n) for j in range(t, m) if S[i][j]]
            if not nz:
                return S, U, V
            _, i, j = min(nz)
            swap_rows(S, t, i)
            swap_rows(U, t, i)
            swap_cols(S, t, j)
            swap_cols(V, t, j)
            p = S[t][t]
            clean = True
            for i in range(t + 1, n):
                k = S[i][t] // p
                add_row(S, t, i, -k)
                add_row(U, t, i, -k)
                clean &= S[i][t] == 0
            for j in range(t + 1, m):
                k = S[t][j] // p
                add_col(S, t, j, -k)
                add_col(V, t, j, -k)
                clean &= S[t][j] == 0
            if not clean:
                continue
            bad = next(
                ((i, j) for i in range(t + 1, n) for j in range(t + 1, m) if S[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(S, bad[0], t, 1)
            add_row(U, bad[0], t, 1)
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
    return S, U, V


@dataclass(frozen=True)
class DiscriminantGroup:
    """A_L = L^*/L as a product of cyclic groups.

    Elements of L^* are written y in dual-basis coordinates, i.e. the vector
    G^{-1} y of L (x) Q.  ``generators`` holds the y of each cyclic factor,
    ``U`` the row transform that reads off coordinates modulo the factors.
    """

    gram: GramForm
    invariant_factors: tuple[int, ...]
    generators: tuple[tuple[int, int], ...]
    U: tuple[tuple[int, int], tuple[int, int]] = field(repr=False)
    rows_used: tuple[int, ...] = field(repr=False, default=())

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    def coordinates(self, y) -> tuple[int, ...]:
        Uy = [self.U[i][0] * y[0] + self.U[i][1] * y[1] for i in range(2)]
        return tuple(Uy[i] % s for i, s in zip(self.rows_used, self.invariant_factors))

    def generator_vectors(self) -> list[tuple[Fraction, Fraction]]:
        """Generators as rational vectors of L (x) Q."""
        Q = self.gram
        det = Q.det
        out = []
        for y0, y1 in self.generators:
            out.append(
                (Fraction(Q.g11 * y0 - Q.g01 * y1, det), Fraction(-Q.g01 * y0 + Q.g00 * y1, det))
            )
        return out

    def elements(self):
        return product(*(range(s) for s in self.invariant_factors))


def discriminant_group(Q: GramForm) -> DiscriminantGroup:
    S, U, V = smith_normal_form([list(r) for r in Q.rows()])
    used = tuple(i for i in range(2) if S[i][i] > 1)
    # the columns U^{-1} e_i generate Z^2 / G Z^2
    Uinv = IntMatrix.from_rows(U).inverse()
    A = DiscriminantGroup(
        gram=Q,
        invariant_factors=tuple(S[i][i] for i in used),
        generators=tuple((Uinv.rows()[0][i], Uinv.rows()[1][i]) for i in used),
        U=(tuple(U[0]), tuple(U[1])),
        rows_used=used,
    )
    if A.order != abs(Q.det):
        raise AssertionError(f"|A_L| = {A.order} but |det| = {abs(Q.det)}")
    return A


@dataclass(frozen=True)
class DiscAction:
    """Images of the discriminant generators, as coordinate tuples."""

    invariant_factors: tuple[int, ...]
    images: tuple[tuple[int, ...], ...]

    def __call__(self, c) -> tuple[int, ...]:
        out = [0] * len(self.invariant_factors)
        for j, cj in enumerate(c):
            for i, v in enumerate(self.images[j]):
                out[i] += cj * v
        return tuple(v % s for v, s in zip(out, self.invariant_factors))

    def compose(self, other: DiscAction) -> DiscAction:
        """self o other."""
        return DiscAction(self.invariant_factors, tuple(self(img) for img in other.images))

    def is_identity(self) -> bool:
        return self == scalar_action(self.invariant_factors, 1)

    def is_negation(self) -> bool:
        return self == scalar_action(self.invariant_factors, -1)

    def is_automorphism(self) -> bool:
        n = math.prod(self.invariant_factors)
        seen = {self(c) for c in product(*(range(s) for s in self.invariant_factors))}
        return len(seen) == n


def scalar_action(factors: tuple[int, ...], k: int) -> DiscAction:
    images = tuple(
        tuple((k if i == j else 0) % s for i, s in enumerate(factors)) for j in range(len(factors))
    )
    return DiscAction(factors, images)


def induced_disc_map(M: IsometryMatrix, A: DiscriminantGroup | None = None) -> DiscAction:
    """Action of M on A_L.  In dual coordinates M acts by y -> M^{-T} y."""
    if A is None:
        A = discriminant_group(M.gram)
    elif A.gram != M.gram:
        raise DomainError("discriminant group of a different form")
    Minv_t = M.matrix.inverse().transpose()
    images = tuple(A.coordinates(Minv_t.apply(y)) for y in A.generators)
    action = DiscAction(A.invariant_factors, images)
    if not action.is_automorphism():
        raise AssertionError("induced map is not an automorphism")
    return action
