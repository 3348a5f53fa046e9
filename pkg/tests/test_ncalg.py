from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from potentia.ncalg import (
    GenSet,
    NcPoly,
    NcTensor,
    cyclic_derivative,
    cyclic_sum,
    euler_check,
    hessian_symmetry_check,
    nc_mul,
    partial_derivative,
    potential_from_matrix,
    split_potential,
    substitute,
)

from conftest import invertible, rationals, square

G = GenSet.xyz()


def P(text):
    return NcPoly.parse(G, text)


def polys(gens=G, max_len=3, homogeneous=None):
    n = len(gens)
    lengths = st.just(homogeneous) if homogeneous is not None else st.integers(0, max_len)
    word = lengths.flatmap(lambda k: st.tuples(*[st.integers(0, n - 1)] * k))
    return st.dictionaries(word, rationals, max_size=5).map(lambda t: NcPoly(gens, t))


# --- examples ---------------------------------------------------------------


def test_products():
    assert nc_mul(P("x"), P("y")) == P("x*y")
    assert nc_mul(P("x + y"), P("z")) == P("x*z + y*z")
    assert nc_mul(P("y*x - x*y - x^2"), P("z")) == P("y*x*z - x*y*z - x^2*z")


def test_parse_and_print():
    p = P("x*y*z - 2 x^2*z + 1/2 z*x")
    assert str(p) == "1/2 z*x - 2 x^2*z + x*y*z"
    assert P(str(p)) == p
    assert str(NcPoly(G)) == "0"
    with pytest.raises(ValueError):
        NcPoly(G, {(3,): 1})


def test_generator_sets():
    assert GenSet.for_potential(1).names == ("x", "z")
    assert GenSet.for_potential(3).names == ("x1", "x2", "x3", "z")
    with pytest.raises(ValueError):
        GenSet(("z", "x"))
    with pytest.raises(ValueError):
        GenSet(("x", "x"))
    with pytest.raises(ValueError):
        nc_mul(P("x"), NcPoly.gen(GenSet.for_potential(1), "x"))


def test_cyclic_sum_examples():
    assert cyclic_sum(P("x*y*z")) == P("x*y*z + y*z*x + z*x*y")
    with pytest.raises(ValueError):
        cyclic_sum(P("x + y*z"))


def test_cyclic_sum_symplectic_is_antisymmetrizer():
    f, w = potential_from_matrix([[0, 1], [-1, 0]], G)
    ant = P("x*y*z + y*z*x + z*x*y - y*x*z - x*z*y - z*y*x")
    assert f == P("x*y - y*x")
    assert cyclic_sum(w) == ant


def test_cyclic_derivative_examples():
    f, w = potential_from_matrix([[1, 1], [-1, 0]], G)
    assert cyclic_derivative(w, "z") == f
    assert cyclic_derivative(w, "x") == P("x*z + z*x + y*z - z*y")
    assert cyclic_derivative(P("x^3"), "x") == P("3 x^2")
    with pytest.raises(ValueError):
        cyclic_derivative(w, "t")


def test_partial_derivative_examples():
    assert partial_derivative(P("x*y"), "x") == NcTensor(G, {((), (1,)): 1})
    assert partial_derivative(P("x^2"), "x") == NcTensor(G, {((), (0,)): 1, ((0,), ()): 1})
    assert partial_derivative(P("z*y"), "x").is_zero()


def test_euler_and_hessian_canonical():
    for M in ([[1, 1], [-1, 0]], [[0, -1], [1, 0]], [[0, Fraction(-1, 2)], [1, 0]]):
        _, w = potential_from_matrix(M, G)
        assert euler_check(w)
        assert hessian_symmetry_check(w)


def test_hessian_classical_cyclic_element():
    assert hessian_symmetry_check(cyclic_sum(P("x*y*z")))


def test_split_potential_rejects_malformed():
    with pytest.raises(ValueError):
        split_potential(P("x*z*y"))
    with pytest.raises(ValueError):
        split_potential(P("x*y"))


# --- oracles and properties --------------------------------------------------


def _cw_formula(M, gens):
    """``sum f_ij (x_i x_j z + z x_i x_j + x_j z x_i)``."""
    n = len(M)
    terms = []
    for i in range(n):
        for j in range(n):
            c = M[i][j]
            terms += [((i, j, n), c), ((n, i, j), c), ((j, n, i), c)]
    return NcPoly(gens, terms)


def _dx_formula(M, gens, i):
    """``sum_j f_ij x_j z + f_ji z x_j``."""
    n = len(M)
    terms = []
    for j in range(n):
        terms += [((j, n), M[i][j]), ((n, j), M[j][i])]
    return NcPoly(gens, terms)


@given(st.integers(1, 4).flatmap(lambda n: square(n, rationals)))
def test_potential_formulas(M):
    gens = GenSet.for_potential(len(M))
    f, w = potential_from_matrix(M, gens)
    if f.is_zero():
        return
    assert cyclic_sum(w) == _cw_formula(M, gens)
    for i in range(len(M)):
        assert cyclic_derivative(w, i) == _dx_formula(M, gens, i)
    assert cyclic_derivative(w, len(M)) == f


@given(st.integers(1, 4).flatmap(lambda n: invertible(n)))
def test_euler_and_hessian_random(M):
    _, w = potential_from_matrix(M)
    assert euler_check(w)
    assert hessian_symmetry_check(w)


@given(polys(homogeneous=3))
def test_hessian_on_cyclic_sums(a):
    assert hessian_symmetry_check(cyclic_sum(a))


@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    one = NcPoly.one(G)
    assert (a * b) * c == a * (b * c)
    assert a * one == a == one * a
    assert a * (b + c) == a * b + a * c


@given(polys(homogeneous=3))
def test_cyclic_sum_rotation_invariant(a):
    rotated = NcPoly(G, {w[1:] + w[:1]: c for w, c in a.terms.items()})
    assert cyclic_sum(rotated) == cyclic_sum(a)


@given(polys(max_len=2), polys(max_len=2), st.integers(0, 2))
def test_cyclic_derivative_kills_commutators(a, b, g):
    comm = a * b - b * a
    for d in comm.degrees():
        part = NcPoly(G, {w: c for w, c in comm.terms.items() if len(w) == d})
        assert cyclic_derivative(part, g).is_zero()


@given(polys(), polys())
def test_substitution_is_multiplicative(a, b):
    images = [P("x + z"), P("2 y"), P("x*y")]
    assert substitute(a * b, images) == substitute(a, images) * substitute(b, images)
