"""Randomised checks of the algebraic invariants."""

import random
from decimal import Decimal, getcontext

from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix
from sympy.matrices.normalforms import invariant_factors

from k3aut.aut import evaluate_word, finite_order
from k3aut.lattice import (
    GramForm,
    IntMatrix,
    IsometryMatrix,
    discriminant_group,
    family_gram,
    induced_disc_map,
    isometry_generators,
    smith_normal_form,
)
from k3aut.pell import PellProblem, fundamental_unit, scan_solutions, solution_stream, solve_fundamental
from k3aut.quadratic import DomainError, QuadInt, is_perfect_square, sign_of, sqrt_cf

RADICANDS = [D for D in range(2, 200) if is_perfect_square(D) is None]


@st.composite
def quadints(draw, D=None):
    D = D if D is not None else draw(st.sampled_from(RADICANDS))
    b = draw(st.integers(-10**6, 10**6))
    a = draw(st.integers(-10**6, 10**6))
    if D % 4 == 1:
        a += (a - b) % 2  # same parity
    else:
        a, b = 2 * a, 2 * b
    return QuadInt(a, b, D)


@st.composite
def quadint_pairs(draw):
    D = draw(st.sampled_from(RADICANDS))
    return draw(quadints(D)), draw(quadints(D))


@settings(max_examples=300)
@given(quadint_pairs())
def test_norm_multiplicative(pair):
    x, y = pair
    assert (x * y).norm() == x.norm() * y.norm()


@settings(max_examples=300)
@given(quadint_pairs())
def test_conj_is_ring_homomorphism(pair):
    x, y = pair
    assert (x * y).conj() == x.conj() * y.conj()
    assert (x + y).conj() == x.conj() + y.conj()


def test_sign_against_high_precision():
    getcontext().prec = 120
    rng = random.Random(1)
    for D in (5, 13, 21, 29, 45, 53, 77, 125, 221):
        root = Decimal(D).sqrt()
        for _ in range(1000):
            # bias toward near-cancellation with convergent-like pairs
            b = rng.randint(-10**9, 10**9)
            a = 2 * int(Decimal(b) * root) + rng.randint(-3, 3)
            if D % 4 == 1:
                a += (a - b) % 2
                x = QuadInt(a, b, D)
            else:
                x = QuadInt(2 * a, 2 * b, D)
            value = Decimal(x.a) + Decimal(x.b) * root
            expected = (value > 0) - (value < 0)
            assert sign_of(x) == expected


def test_cf_parity_matches_unit_norm():
    for D in (5, 13, 21, 29, 45, 53, 77, 125):
        odd = sqrt_cf(D).period % 2 == 1
        assert (fundamental_unit(D).norm_sign == -1) == odd, D


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(RADICANDS), st.sampled_from((1, -1, 4, -4)))
def test_pell_against_scan(D, N):
    sol = solve_fundamental(PellProblem(D, N))
    found = scan_solutions(D, N, 10_000, b_min=1)
    if sol is None:
        assert found == []
    elif sol.b <= 10_000:
        assert found[0] == (sol.a, sol.b)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(RADICANDS), st.sampled_from((1, -1, 4, -4)))
def test_stream_solutions(D, N):
    sol = solve_fundamental(PellProblem(D, N))
    if sol is None:
        return
    sols = solution_stream(sol, fundamental_unit(D), 5)
    assert all(s.a * s.a - D * s.b * s.b == N for s in sols)
    assert all(x.b < y.b for x, y in zip(sols, sols[1:]))
    # consecutive quotients are one fixed unit
    q = [sols[i + 1].as_quadint() * sols[i].as_quadint().conj() for i in range(4)]
    assert len(set(q)) == 1


@st.composite
def even_forms(draw):
    g00 = 2 * draw(st.integers(-6, 6))
    g11 = 2 * draw(st.integers(-6, 6))
    g01 = draw(st.integers(-8, 8))
    if g00 * g11 - g01 * g01 == 0:
        g01 += 1 if g01 >= 0 else -1
        if g00 * g11 - g01 * g01 == 0:
            g01 += 1
    return GramForm(g00, g01, g11)


@settings(max_examples=300)
@given(even_forms(), st.tuples(*[st.integers(-6, 6)] * 4))
def test_isometry_constructor_sound(Q, e):
    m = IntMatrix(*e)
    # M^T G M computed from scratch
    (a, b), (c, d) = m.rows()
    G = [[Q.g00, Q.g01], [Q.g01, Q.g11]]
    Mt = [[a, c], [b, d]]
    Mm = [[a, b], [c, d]]
    MtG = [[sum(Mt[i][k] * G[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    R = [[sum(MtG[i][k] * Mm[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    ok = R == G and abs(a * d - b * c) == 1
    try:
        IsometryMatrix(m, Q)
        built = True
    except DomainError:
        built = False
    assert built == ok


def test_snf_order_equals_det():
    rng = random.Random(7)
    done = 0
    while done < 50:
        g00, g11 = 2 * rng.randint(-20, 20), 2 * rng.randint(-20, 20)
        g01 = rng.randint(-30, 30)
        if g00 * g11 == g01 * g01:
            continue
        Q = GramForm(g00, g01, g11)
        A = discriminant_group(Q)
        assert A.order == abs(Q.det)
        S, U, V = smith_normal_form([list(r) for r in Q.rows()])
        assert (Matrix(U) * Matrix(Q.rows()) * Matrix(V)).tolist() == S
        assert abs(Matrix(U).det()) == 1 and abs(Matrix(V).det()) == 1
        assert tuple(s for s in invariant_factors(Matrix(Q.rows())) if s != 1) == A.invariant_factors
        done += 1


def _random_words(rng, names, count, max_len):
    return [tuple((rng.choice(names), rng.choice((1, -1))) for _ in range(rng.randint(0, max_len))) for _ in range(count)]


def test_disc_action_functorial():
    rng = random.Random(3)
    for Q in (family_gram("L", 3), family_gram("M", 5), GramForm(4, 2, -6)):
        gens = isometry_generators(Q).named
        A = discriminant_group(Q)
        names = sorted(gens)
        for w1, w2 in zip(_random_words(rng, names, 100, 6), _random_words(rng, names, 100, 6)):
            M, N = evaluate_word(w1, gens, Q), evaluate_word(w2, gens, Q)
            assert induced_disc_map(M @ N, A) == induced_disc_map(M, A).compose(induced_disc_map(N, A))


def test_finite_order_against_power_iteration():
    rng = random.Random(5)
    for Q in (family_gram("L", 3), family_gram("M", 5), GramForm(0, 1, 0), GramForm(2, 2, 0)):
        gens = isometry_generators(Q).named
        for w in _random_words(rng, sorted(gens), 125, 8):
            M = evaluate_word(w, gens, Q)
            powers = [M**k for k in range(1, 13)]
            first = next((k for k, P in enumerate(powers, 1) if P.is_identity()), None)
            assert finite_order(M) == first
