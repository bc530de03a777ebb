"""Acceptance criteria, one PASS/FAIL line each, all checks exact."""

import random

import sympy

from k3aut import aut, claims, cone, lattice, pell
from k3aut.lattice import GramForm, IntMatrix, IsometryMatrix, discriminant_group, family_gram, induced_disc_map
from k3aut.quadratic import DomainError, QuadInt, QuadRat, is_perfect_square


def fund(D, N):
    s = pell.solve_fundamental(pell.PellProblem(D, N))
    return None if s is None else (s.a, s.b)


def stream(D, N, n):
    f = pell.solve_fundamental(pell.PellProblem(D, N))
    return [(s.a, s.b) for s in pell.solution_stream(f, pell.fundamental_unit(D), n)]


def iso(entries, Q):
    return IsometryMatrix(IntMatrix(*entries), Q)


def test_criterion_01_pell_fundamentals(criterion):
    bad = []
    if fund(13, -4) != (3, 1):
        bad.append("(13,-4)")
    for d in (3, 5, 7):
        if fund(d * d + 4, -4) != (d, 1):
            bad.append(f"({d * d + 4},-4)")
    for d in (5, 7):
        if fund(d * d - 4, 4) != (d, 1):
            bad.append(f"({d * d - 4},4)")
    certs = []
    for d in (5, 7, 9):
        D = d * d - 4
        cert = pell.unsolvability_certificate(D, -4)
        if fund(D, -4) is not None or cert is None:
            bad.append(f"({D},-4) unsolvable")
        else:
            certs.append(f"{D}: {cert}")
        # q^2 = d^2 - 4 is strictly between consecutive squares
        if is_perfect_square(D) is not None or not (d - 1) ** 2 < D < d * d:
            bad.append(f"q^2={D}")
    criterion(1, "Pell fundamentals and unsolvability certificates", not bad, "; ".join(bad or certs))


def test_criterion_02_recurrences(criterion):
    bad = []
    sols = stream(13, -4, 6)
    for (a, b), nxt in zip(sols, sols[1:]):
        if ((11 * a + 39 * b) // 2, (3 * a + 11 * b) // 2) != nxt or (11 * a + 39 * b) % 2 or (3 * a + 11 * b) % 2:
            bad.append(f"D=13 at {(a, b)}")

    a, b, d = sympy.symbols("a b d")
    for fam in ("L", "M"):
        D = d**2 + 4 if fam == "L" else d**2 - 4
        r = sympy.sqrt(D)
        x = (a + b * r) / 2
        if fam == "L":
            step = ((d + r) / 2) ** 2
            rec = ((a * d**2 + 2 * a + b * d**3 + 4 * b * d) / 2, (a * d + b * d**2 + 2 * b) / 2)
        else:
            step = (d + r) / 2
            rec = ((a * d + b * (d**2 - 4)) / 2, (a + b * d) / 2)
        target = (rec[0] + rec[1] * r) / 2
        for dv in (3, 5, 7):
            diff = sympy.expand((x * step - target).subs(d, dv))
            if sympy.simplify(diff) != 0:
                bad.append(f"{fam} symbolic d={dv}")
            Dv = dv * dv + 4 if fam == "L" else dv * dv - 4
            N = -4 if fam == "L" else 4
            sols = stream(Dv, N, 5)
            f = sympy.lambdify((a, b), [e.subs(d, dv) for e in rec])
            for s, nxt in zip(sols, sols[1:]):
                if tuple(int(v) for v in f(*s)) != nxt:
                    bad.append(f"{fam} d={dv} at {s}")
    criterion(2, "recurrence fidelity (D=13, n<=5; L_d and M_d symbolic at d=3,5,7, n<=4)", not bad, "; ".join(bad))


def test_criterion_03_o_l3(criterion):
    Q = family_gram("L", 3)
    gens = lattice.isometry_generators(Q).named
    q0p = iso((-1, 0, -3, 1), Q)
    q0m = iso((-1, -3, 0, 1), Q)
    ok = q0p in gens.values() and q0m in gens.values()
    ok = ok and (q0m @ q0p).entries == (10, -3, -3, 1)
    ball = aut.word_ball({"Q0+": q0p, "Q0-": q0m}, aut.CLOSURE_LENGTH)
    minus = -lattice.identity(Q)
    words = {M.entries for M, _ in ball.values()} | {(minus @ M).entries for M, _ in ball.values()}
    words = {e for e in words if max(map(abs, e)) <= 30}
    oracle = {M.entries for M in lattice.brute_force_isometries(Q, 30)}
    ok = ok and oracle == words
    minus_in = minus.entries in ball
    criterion(3, "O(L_3) generators and bound-30 oracle = +-<Q0+, Q0->", ok and not minus_in,
              f"{len(oracle)} isometries; -I outside <Q0+, Q0->")


def test_criterion_04_kahler_cones(criterion):
    bad = []
    ch = cone.chamber_walls(family_gram("L", 3))
    if set(ch.rays()) != {cone.Ray.through((2, 3)), cone.Ray.through((11, -3))}:
        bad.append("L_3 rays")
    for d in (5, 7):
        ch = cone.chamber_walls(family_gram("L", d))
        if set(ch.halfplanes()) != {(d, -2), (d, d * d + 2)}:
            bad.append(f"L_{d} halfplanes {ch.halfplanes()}")
    for d in (5, 7):
        D = d * d - 4
        s = QuadRat(0, 1, D)
        Q = family_gram("M", d)
        ch = cone.chamber_walls(Q)
        want = {cone.Ray.through((QuadRat(2), -d + s)), cone.Ray.through((QuadRat(-2), d + s))}
        if set(ch.rays()) != want or any(Q.value(r) for r in ch.rays()):
            bad.append(f"M_{d} rays")
    criterion(4, "Kahler cone walls for L_3, L_5, L_7 and boundary rays for M_5, M_7", not bad, "; ".join(bad))


def test_criterion_05_aut_groups(criterion):
    bad = []
    for d in (3, 5, 7):
        rep = aut.aut_group(family_gram("L", d))
        gens = [M.entries for M in rep.aut_generators.values()]
        if rep.presentation.structure != "Z2" or gens != [(1, d, 0, -1)]:
            bad.append(f"L_{d}: {rep.presentation.structure} {gens}")
    for d in (5, 7):
        Q = family_gram("M", d)
        rep = aut.aut_group(Q, depth=8)
        P, X = iso((-1, 0, d, 1), Q), iso((d, 1, -1, 0), Q)
        X2 = X @ X
        same_gens = set(rep.aut_generators.values()) == {P, X2}
        collision = aut.free_product_certificate(P, X2, 8)
        pres = rep.presentation
        if not (same_gens and pres.structure == "Z_star_Z2" and pres.certificate_depth >= 8 and collision is None):
            shown = "none" if collision is None else f"{aut.word_str(collision[0])} == {aut.word_str(collision[1])}"
            bad.append(f"M_{d}: computed {pres.structure} with generators {sorted(rep.aut_generators)}, "
                       f"first free-product collision {shown} (s = P, t = X^2)")
    criterion(5, "Aut(L_d) = Z2 by [[1,d],[0,-1]]; Aut(M_d) = Z * Z2 by P, X^2 at depth 8", not bad, "; ".join(bad))


def test_criterion_06_relations(criterion):
    bad = []
    for d in (3, 5, 7):
        Q = family_gram("M", d)
        X, Y = iso((d, 1, -1, 0), Q), iso((0, 1, 1, 0), Q)
        P, Qm = iso((-1, 0, d, 1), Q), iso((-1, -d, 0, 1), Q)
        minus = -lattice.identity(Q)
        if not all((M @ M).is_identity() for M in (P, Qm, Y, minus)):
            bad.append(f"d={d} involutions")
        if Qm @ Y != -(Y @ P):
            bad.append(f"d={d} QY")
        if Qm @ P != -(X @ X):
            bad.append(f"d={d} QP")
    criterion(6, "involutions, Q Y = -Y P and Q P = -X^2 for d = 3, 5, 7", not bad, "; ".join(bad))


def test_criterion_07_gluing(criterion):
    bad = []
    Q = family_gram("L", 3)
    A = discriminant_group(Q)
    act = induced_disc_map(iso((1, 3, 0, -1), Q), A)
    if A.invariant_factors != (13,) or not (act.is_identity() or act.is_negation()):
        bad.append("L_3")
    for d in (3, 5, 7):
        Q = family_gram("L", d)
        A = discriminant_group(Q)
        act = induced_disc_map(iso((1, d, 0, -1), Q), A)
        if A.invariant_factors != (d * d + 4,) or not (act.is_identity() or act.is_negation()):
            bad.append(f"L_{d}")
        Q = family_gram("M", d)
        A = discriminant_group(Q)
        P, X = iso((-1, 0, d, 1), Q), iso((d, 1, -1, 0), Q)
        if A.invariant_factors != (d * d - 4,):
            bad.append(f"M_{d} order")
        if not induced_disc_map(P, A).is_negation() or not induced_disc_map(X @ X, A).is_identity():
            bad.append(f"M_{d} actions")
    criterion(7, "discriminant actions on Z/13, Z/(d^2+4), Z/(d^2-4)", not bad, "; ".join(bad))


def test_criterion_08_infinite(criterion):
    got = {name: aut.infinite_criterion(family_gram(name[0], int(name[1:]))) for name in ("M5", "M7", "L3", "L5", "M3")}
    want = {"M5": True, "M7": True, "L3": False, "L5": False, "M3": False}
    flagged = any("M_3 has roots" in s for s in aut.aut_group(family_gram("M", 3)).discrepancies)
    criterion(8, "infiniteness criterion", got == want and flagged, f"{got}")


def test_criterion_09_discrepancy_ledger(criterion):
    results = claims.run_case("all")
    counts = claims.summary(results)
    disc = [f"{r.case}: {r.claim}" for r in results if r.verdict == claims.DISCREPANCY]
    ok = counts[claims.FAIL] == 0 and counts[claims.DISCREPANCY] == 2
    criterion(9, "verify-paper: exactly two DISCREPANCY items, zero FAIL", ok,
              f"FAIL={counts[claims.FAIL]}, DISCREPANCY={counts[claims.DISCREPANCY]}: " + "; ".join(disc))


def test_criterion_10_property_suites(criterion):
    rng = random.Random(2024)
    bad = []
    # norm multiplicativity
    for _ in range(2000):
        D = rng.choice([D for D in range(2, 300) if is_perfect_square(D) is None])
        def draw():
            a, b = rng.randint(-10**8, 10**8), rng.randint(-10**8, 10**8)
            return QuadInt(a + (a - b) % 2, b, D) if D % 4 == 1 else QuadInt(2 * a, 2 * b, D)
        x, y = draw(), draw()
        if (x * y).norm() != x.norm() * y.norm():
            bad.append("norm")
            break
    # isometry constructor soundness
    for _ in range(2000):
        g00, g11, g01 = 2 * rng.randint(-5, 5), 2 * rng.randint(-5, 5), rng.randint(-7, 7)
        if g00 * g11 == g01 * g01:
            continue
        Q = GramForm(g00, g01, g11)
        m = IntMatrix(*(rng.randint(-4, 4) for _ in range(4)))
        (a, b), (c, d) = m.rows()
        expected = (
            Q.value((a, c)) == g00 and Q.pair((a, c), (b, d)) == g01 and Q.value((b, d)) == g11
            and abs(a * d - b * c) == 1
        )
        try:
            IsometryMatrix(m, Q)
            built = True
        except DomainError:
            built = False
        if built != expected:
            bad.append(f"constructor {m.entries} on {Q}")
            break
    # SNF order = |det|
    n = 0
    while n < 50:
        g00, g11, g01 = 2 * rng.randint(-20, 20), 2 * rng.randint(-20, 20), rng.randint(-30, 30)
        if g00 * g11 == g01 * g01:
            continue
        Q = GramForm(g00, g01, g11)
        if discriminant_group(Q).order != abs(Q.det):
            bad.append(f"SNF {Q}")
        n += 1
    # oracle against words
    for fam, d in (("L", 3), ("L", 5), ("L", 7), ("M", 3), ("M", 5), ("M", 7)):
        Q = family_gram(fam, d)
        ball = aut.word_ball(lattice.isometry_generators(Q).named, aut.CLOSURE_LENGTH)
        words = {e for e in ball if max(map(abs, e)) <= 30}
        if words != {M.entries for M in lattice.brute_force_isometries(Q, 30)}:
            bad.append(f"oracle {fam}_{d}")
    criterion(10, "property suites: norms, isometry constructor, SNF, oracle vs words", not bad, "; ".join(bad))
