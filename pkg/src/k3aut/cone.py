"""Chambers of the positive cone cut out by root hyperplanes.

In rank 2 the projectivised positive cone is an interval, and each root r
contributes the single point r^perp.  The chamber containing a fixed
interior point p is bounded on each side by the nearest such point; since
hyperbolic distance from p to r^perp grows with |r.p|, the nearest wall on a
side is the root of smallest pairing with p on that side.  Searching roots
level by level in r.p therefore certifies the walls.  Without roots the
chamber is the whole component, bounded by the isotropic rays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .lattice import (
    GramForm,
    IsometryMatrix,
    LatticeVector,
    RootClasses,
    isotropic_classes,
    require_hyperbolic,
    root_classes,
)
from .quadratic import DomainError, QuadRat, is_perfect_square

DEFAULT_ROOT_BOUND = 10_000


def _qr(v) -> QuadRat:
    return QuadRat.coerce(v)


def _det(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _sgn(v) -> int:
    if isinstance(v, QuadRat):
        return v.sign()
    return (v > 0) - (v < 0)


@dataclass(frozen=True)
class Ray:
    """A ray R_{>0} v, stored scaled so the first nonzero coordinate is +-1."""

    x: QuadRat
    y: QuadRat

    @classmethod
    def through(cls, v) -> Ray:
        x, y = _qr(v[0]), _qr(v[1])
        lead = x if x else y
        if not lead:
            raise DomainError("zero vector has no ray")
        scale = lead if lead.sign() > 0 else -lead
        return cls(x / scale, y / scale)

    @property
    def direction(self) -> tuple[QuadRat, QuadRat]:
        return (self.x, self.y)

    def __getitem__(self, i):
        return self.direction[i]

    def image(self, M: IsometryMatrix) -> Ray:
        (a, b), (c, d) = M.rows()
        return Ray.through((self.x * a + self.y * b, self.x * c + self.y * d))

    def to_json(self) -> list:
        return [self.x.to_json(), self.y.to_json()]

    def __str__(self) -> str:
        return f"({self.x}, {self.y})"


ROOT_WALL = "root_wall"
BOUNDARY_RAY = "boundary_ray"


@dataclass(frozen=True)
class Wall:
    kind: str
    ray: Ray
    root: LatticeVector | None = None

    def check(self, Q: GramForm) -> None:
        if self.kind == ROOT_WALL:
            if self.root is None or Q.value(self.root) != -2:
                raise AssertionError(f"root wall without a root: {self}")
            if Q.pair(self.ray, self.root):
                raise AssertionError(f"wall ray not orthogonal to its root: {self}")
        elif self.kind == BOUNDARY_RAY:
            if Q.value(self.ray):
                raise AssertionError(f"boundary ray is not isotropic: {self}")
        else:
            raise AssertionError(f"unknown wall kind {self.kind}")


@dataclass(frozen=True)
class Chamber:
    """The chamber containing ``interior``; ``walls[0]`` lies counterclockwise of it."""

    gram: GramForm
    walls: tuple[Wall, Wall]
    interior: LatticeVector
    certified: bool

    def __post_init__(self):
        Q = self.gram
        if Q.value(self.interior) <= 0:
            raise AssertionError("interior point must have positive square")
        for w in self.walls:
            w.check(Q)
            if w.kind == ROOT_WALL and Q.pair(self.interior, w.root) <= 0:
                raise AssertionError("root wall normal must pair positively with the interior")
        if not self.contains(self.interior):
            raise AssertionError("interior point is not inside the chamber")

    def rays(self) -> tuple[Ray, Ray]:
        return (self.walls[0].ray, self.walls[1].ray)

    def contains(self, w) -> bool:
        """Strict membership in the open cone spanned by the two wall rays."""
        u, v = self.rays()
        orient = _sgn(_det(u, v))
        return _sgn(_det(u, w)) == orient and _sgn(_det(w, v)) == orient

    def halfplanes(self) -> list[tuple[int, int]]:
        """Integer normals (a, b) of the root walls: the chamber satisfies a x + b y > 0."""
        return [self.gram.dual_image(w.root) for w in self.walls if w.kind == ROOT_WALL]


def _spiral():
    r = 1
    while True:
        ring = [
            (x, y)
            for x in range(-r, r + 1)
            for y in range(-r, r + 1)
            if max(abs(x), abs(y)) == r
        ]
        ring.sort(key=lambda v: (abs(v[0]) + abs(v[1]), -v[0], -v[1]))
        yield from ring
        r += 1


def _on_root_wall(Q: GramForm, p) -> bool:
    # p lies on r^perp for a root r iff the primitive generator of p^perp is a root
    a, b = Q.dual_image(p)
    g = math.gcd(a, b)
    return Q.value((b // g, -a // g)) == -2


def interior_point(Q: GramForm) -> LatticeVector:
    """(1, 0) when it has positive square, else the first spiral vector that does.

    Vectors lying on a root hyperplane are skipped so the point is interior.
    """
    require_hyperbolic(Q)
    for v in _spiral():
        if Q.value(v) > 0 and not _on_root_wall(Q, v):
            return LatticeVector(*v)
    raise AssertionError("unreachable")


def wall_ray(Q: GramForm, root, p) -> Ray:
    """The ray of root^perp lying in the component of p."""
    a, b = Q.dual_image(root)
    g = math.gcd(a, b)
    w = (b // g, -a // g)
    if Q.pair(w, p) < 0:
        w = (-w[0], -w[1])
    return Ray.through(w)


def effective(Q: GramForm, root, p) -> LatticeVector:
    r = LatticeVector(*root)
    return r if Q.pair(r, p) > 0 else -r


def isotropic_rays(Q: GramForm, p) -> list[Ray]:
    """The two isotropic rays bounding the component of the positive cone containing p."""
    iso = isotropic_classes(Q)
    if iso.vectors:
        cands = [tuple(v) for v in iso.vectors]
    else:
        # g11 t^2 + 2 g01 t + g00 = 0 for (1, t); g11 != 0 when -det is not a square
        D = Q.discriminant
        cands = [
            (_qr(1), QuadRat(Fraction(-Q.g01, Q.g11), Fraction(sgn, Q.g11), D))
            for sgn in (1, -1)
        ]
    rays = []
    for v in cands:
        if _sgn(Q.pair(v, p)) < 0:
            v = (-v[0], -v[1])
        rays.append(Ray.through(v))
    return rays


def _side(p, ray) -> int:
    return _sgn(_det(p, ray))


def roots_at_level(Q: GramForm, p, k: int) -> list[LatticeVector]:
    """All roots r with r.p == k (a finite set since p has positive square)."""
    l0, l1 = Q.dual_image(p)
    g = math.gcd(l0, l1)
    if k % g:
        return []
    # particular solution of l0 x + l1 y = k, then (x, y) + t w along p^perp
    s, t0, _ = _egcd(l0, l1)
    x0, y0 = s * (k // g), t0 * (k // g)
    w = (l1 // g, -l0 // g)
    A = Q.value(w)
    B = 2 * Q.pair((x0, y0), w)
    C = Q.value((x0, y0)) + 2
    disc = B * B - 4 * A * C
    r = is_perfect_square(disc)
    if r is None:
        return []
    out = []
    for num in {-B + r, -B - r}:
        if num % (2 * A) == 0:
            t = num // (2 * A)
            out.append(LatticeVector(x0 + t * w[0], y0 + t * w[1]))
    return sorted(out)


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (1 if a >= 0 else -1), 0, abs(a)
    x, y, g = _egcd(b, a % b)
    return y, x - (a // b) * y, g


def _nearest_by_level(Q: GramForm, p, max_level: int | None = None):
    """Walk levels k = 1, 2, ... until a root is found on each side of p."""
    found: dict[int, LatticeVector] = {}
    k = 0
    while len(found) < 2:
        k += 1
        if max_level is not None and k > max_level:
            break
        for r in roots_at_level(Q, p, k):
            side = _side(p, wall_ray(Q, r, p))
            found.setdefault(side, r)
    return found


def _nearest_by_angle(Q: GramForm, p, roots) -> dict[int, LatticeVector]:
    """Among the given roots, the wall ray angularly closest to p on each side."""
    best: dict[int, tuple[Ray, LatticeVector]] = {}
    for r in roots:
        ray = wall_ray(Q, r, p)
        side = _side(p, ray)
        cur = best.get(side)
        # on the same side, ray is closer to p iff it lies between p and cur
        if cur is None or _sgn(_det(ray, cur[0])) == side:
            best[side] = (ray, effective(Q, r, p))
    return {s: r for s, (_, r) in best.items()}


def chamber_walls(Q: GramForm, roots: RootClasses | None = None) -> Chamber:
    """The chamber of the positive cone containing ``interior_point(Q)``."""
    require_hyperbolic(Q)
    p = interior_point(Q)
    if roots is None:
        roots = root_classes(Q, DEFAULT_ROOT_BOUND)
    iso_rays = {_side(p, ray): ray for ray in isotropic_rays(Q, p)}

    certified = True
    if roots.finite:
        nearest = _nearest_by_angle(Q, p, roots.finite_roots or ())
    elif roots.proved_empty:
        nearest = {}
    elif roots.roots:
        # roots exist and the discriminant is not a square: infinitely many
        # roots accumulate at both isotropic ends, so the level walk stops
        nearest = {s: effective(Q, r, p) for s, r in _nearest_by_level(Q, p).items()}
        bounded = _nearest_by_angle(Q, p, roots.roots)
        if bounded != nearest:
            raise AssertionError(f"level walk {nearest} and bounded walk {bounded} disagree")
    else:
        nearest = {}
        certified = False

    walls = []
    for side in (1, -1):
        if side in nearest:
            r = nearest[side]
            walls.append(Wall(ROOT_WALL, wall_ray(Q, r, p), r))
        else:
            walls.append(Wall(BOUNDARY_RAY, iso_rays[side]))
    return Chamber(Q, (walls[0], walls[1]), p, certified)


def preserves_chamber(M: IsometryMatrix, C: Chamber) -> bool:
    """True iff M permutes the two wall rays and keeps the interior point inside."""
    if M.gram != C.gram:
        raise DomainError("isometry and chamber live on different forms")
    rays = set(C.rays())
    if {ray.image(M) for ray in rays} != rays:
        return False
    return C.contains(M.apply(C.interior))
