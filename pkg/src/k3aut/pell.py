"""Generalized Pell equations a^2 - D b^2 = N for N in {+-1, +-4}.

Solutions of the +-4 equations are exactly the units of the order of
``QuadInt`` values for ``D``; the +-1 equations pick out the units lying in
``Z[sqrt(D)]``.  Everything is therefore driven by the fundamental unit,
which comes from the continued fraction of sqrt(D).

Two independent negative certificates are provided for unsolvable
instances: a residue obstruction modulo a small integer, and an exhaustive
scan up to the classical Nagell bound on fundamental solutions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .quadratic import (
    DomainError,
    QuadInt,
    _check_radicand,
    is_perfect_square,
    period_end_convergent,
    sqrt_cf,
)

PELL_RHS = (1, -1, 4, -4)


@dataclass(frozen=True)
class PellProblem:
    D: int
    N: int

    def __post_init__(self):
        _check_radicand(self.D)
        if self.N not in PELL_RHS:
            raise DomainError(f"N must be one of {PELL_RHS}, got {self.N}")

    def __str__(self) -> str:
        return f"a^2 - {self.D} b^2 = {self.N}"


@dataclass(frozen=True)
class PellSolution:
    a: int
    b: int
    problem: PellProblem

    def __post_init__(self):
        p = self.problem
        if self.a * self.a - p.D * self.b * self.b != p.N:
            raise DomainError(f"({self.a}, {self.b}) does not solve {p}")

    def as_quadint(self) -> QuadInt:
        """The unit (a + b sqrt D)/2 for N = +-4, or a + b sqrt D for N = +-1."""
        if abs(self.problem.N) == 4:
            return QuadInt(self.a, self.b, self.problem.D)
        return QuadInt(2 * self.a, 2 * self.b, self.problem.D)


@dataclass(frozen=True)
class FundamentalUnit:
    u: QuadInt
    norm_sign: int

    def __post_init__(self):
        if self.u.norm() != self.norm_sign or self.norm_sign not in (1, -1):
            raise DomainError(f"{self.u} does not have norm {self.norm_sign}")
        if self.u.sign() <= 0 or (self.u - 1).sign() <= 0:
            raise DomainError(f"{self.u} is not > 1")

    @property
    def D(self) -> int:
        return self.u.D


def _cf_unit(m: int) -> tuple[int, int]:
    """Fundamental solution of x^2 - m y^2 = +-1."""
    return period_end_convergent(sqrt_cf(m))


def _cube_root_unit(u: QuadInt) -> QuadInt | None:
    """A unit e of the same order with e**3 == u, if one exists."""
    n = u.norm()
    target = u.trace()
    # t -> t^3 - 3 n t is increasing for t >= 2
    lo, hi = 1, max(2, target)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**3 - 3 * n * mid < target:
            lo = mid + 1
        else:
            hi = mid
    t = lo
    if t**3 - 3 * n * t != target:
        return None
    b2, rem = divmod(t * t - 4 * n, u.D)
    b = is_perfect_square(b2) if rem == 0 else None
    if not b:
        return None
    e = QuadInt(t, b, u.D)
    return e if e**3 == u else None


def fundamental_unit(D: int) -> FundamentalUnit:
    """Smallest unit > 1 of the order of ``QuadInt`` values with radicand D."""
    _check_radicand(D)
    if D % 4 == 0:
        # order is Z[sqrt(D/4)]; D/4 cannot be a square since D is not
        x, y = _cf_unit(D // 4)
        u = QuadInt(2 * x, y, D)
    else:
        x, y = _cf_unit(D)
        u = QuadInt(2 * x, 2 * y, D)
        if D % 4 == 1:
            # [O_D^* : Z[sqrt D]^*] divides 3 when D = 1 (mod 4)
            root = _cube_root_unit(u)
            if root is not None:
                u = root
    return FundamentalUnit(u, u.norm())


def _in_zsqrt(x: QuadInt) -> bool:
    return x.a % 2 == 0 and x.b % 2 == 0


def _generator_for(unit: FundamentalUnit, N: int) -> QuadInt:
    """Generator (mod +-1) of the units that carry solutions for this N."""
    if abs(N) == 4:
        return unit.u
    k, e = 1, unit.u
    while not _in_zsqrt(e):
        k, e = k + 1, e * unit.u
    return e


def _stream_step(unit: FundamentalUnit, N: int) -> QuadInt:
    g = _generator_for(unit, N)
    return g if g.norm() == 1 else g * g


def _from_unit(e: QuadInt, problem: PellProblem) -> PellSolution:
    if abs(problem.N) == 4:
        return PellSolution(e.a, e.b, problem)
    return PellSolution(e.a // 2, e.b // 2, problem)


def solve_fundamental(problem: PellProblem) -> PellSolution | None:
    """Solution with the smallest positive b (and positive a), or None."""
    unit = fundamental_unit(problem.D)
    g = _generator_for(unit, problem.N)
    sign = 1 if problem.N > 0 else -1
    if g.norm() == sign:
        return _from_unit(g, problem)
    if sign == 1:
        return _from_unit(g * g, problem)
    return None


def is_solvable(problem: PellProblem) -> bool:
    return solve_fundamental(problem) is not None


def solution_stream(fund: PellSolution, unit: FundamentalUnit, n: int) -> list[PellSolution]:
    """The first n positive solutions, starting from ``fund``."""
    if fund.problem.D != unit.D:
        raise DomainError(f"unit for D={unit.D} used with D={fund.problem.D}")
    step = _stream_step(unit, fund.problem.N)
    out = []
    x = fund.as_quadint()
    for _ in range(n):
        out.append(_from_unit(x, fund.problem))
        x = x * step
    return out


# -- negative certificates ---------------------------------------------------


def residue_obstruction(D: int, N: int, max_modulus: int = 200) -> int | None:
    """Smallest m <= max_modulus such that a^2 - D b^2 = N has no solution mod m."""
    for m in range(2, max_modulus + 1):
        squares = {x * x % m for x in range(m)}
        targets = {(N + D * s) % m for s in squares}
        if squares.isdisjoint(targets):
            return m
    return None


def nagell_bound(D: int, N: int) -> int:
    """Upper bound on b over the fundamental solutions of every class of a^2 - D b^2 = N."""
    if N == 0:
        raise DomainError("N must be nonzero")
    x1, y1 = _cf_unit(D)
    if x1 * x1 - D * y1 * y1 == -1:
        x1, y1 = x1 * x1 + D * y1 * y1, 2 * x1 * y1
    denom = 2 * (x1 + 1) if N > 0 else 2 * (x1 - 1)
    return math.isqrt(y1 * y1 * abs(N) // denom)


def scan_solutions(D: int, N: int, b_max: int, b_min: int = 0) -> list[tuple[int, int]]:
    """All (a, b) with a >= 0 and b_min <= b <= b_max solving a^2 - D b^2 = N."""
    out = []
    for b in range(b_min, b_max + 1):
        a = is_perfect_square(N + D * b * b)
        if a is not None:
            out.append((a, b))
    return out


@dataclass(frozen=True)
class Unsolvability:
    """Why a^2 - D b^2 = N has no integer solution."""

    kind: str  # "residue" or "exhaustive"
    modulus: int | None = None
    scanned_to: int | None = None

    def __str__(self) -> str:
        if self.kind == "residue":
            return f"no solutions modulo {self.modulus}"
        return f"no solutions with 0 <= b <= {self.scanned_to} (Nagell bound)"


def unsolvability_certificate(D: int, N: int, max_modulus: int = 200) -> Unsolvability | None:
    """An independent proof that the equation is unsolvable, or None if it is solvable."""
    m = residue_obstruction(D, N, max_modulus)
    if m is not None:
        return Unsolvability("residue", modulus=m)
    bound = nagell_bound(D, N)
    if not scan_solutions(D, N, bound):
        return Unsolvability("exhaustive", scanned_to=bound)
    return None
