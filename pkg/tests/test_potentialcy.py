import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from potentia.exactla import RatMatrix, inverse, rank
from potentia.ncalg import GenSet, NcPoly
from potentia.potentialcy import (
    CLASSICAL,
    JORDAN,
    QuadMatrix,
    Type2Tag,
    apply_basis_change,
    block_diag,
    build_B,
    center_element,
    center_test,
    classify2,
    expected_relation_dim,
    hh_quantum_counts,
    is_alternating,
    isomorphic_B,
    koszul_hh,
    koszul_intersection,
    koszul_square_zero,
    preset,
    quantum_matrix,
    quantum_tag,
    relation_space,
    self_duality_check,
    sigma,
    sigma_relations_hold,
    sigma_scalar,
    swap_matrix,
    z_centrality,
    z_injective,
)

from conftest import invertible, square

G = GenSet.xyz()


def P(text):
    return NcPoly.parse(G, text)


# --- construction --------------------------------------------------------------


def test_jordan_relations():
    pa = build_B(JORDAN)
    assert pa.relations == [P("x*z + z*x + y*z - z*y"), P("z*x - x*z"), P("x^2 + x*y - y*x")]
    assert pa.rewrite is not None


def test_symplectic_relations_make_z_central():
    pa = build_B([[0, 1], [-1, 0]])
    assert pa.relations[:2] == [P("y*z - z*y"), P("z*x - x*z")]
    assert z_centrality([[0, 1], [-1, 0]])


def test_strict_relation_count():
    M = [[1, 1], [0, 0]]
    assert build_B(M).relation_dim() == 3 == expected_relation_dim(M)
    assert QuadMatrix(M).rank() + 1 == 2


def test_presets():
    assert preset("jordan") == JORDAN
    assert preset("Classical") == CLASSICAL
    assert preset("quantum:3") == quantum_matrix(3)
    assert preset("quantum") == quantum_matrix(2)
    with pytest.raises(ValueError):
        preset("elliptic")
    with pytest.raises(ValueError):
        quantum_matrix(0)
    with pytest.raises(ValueError):
        QuadMatrix([[1, 2]])


def test_zero_matrix_is_free():
    pa = build_B([[0, 0], [0, 0]])
    assert pa.is_free and pa.algebra.graded_dim(2) == 9


@given(st.integers(1, 4).flatmap(lambda n: square(n, st.integers(-2, 2))))
def test_relation_count_formula(M):
    assert build_B(M, with_rewrite=False).relation_dim() == expected_relation_dim(M)


# --- sigma and z ------------------------------------------------------------------


def test_sigma_examples():
    assert sigma(CLASSICAL).to_dense() == [[1, 0], [0, 1]]
    assert sigma(JORDAN).to_dense() == [[1, 0], [2, 1]]
    assert sigma(quantum_matrix(2)).to_dense() == [[2, 0], [0, Fraction(1, 2)]]
    with pytest.raises(ValueError):
        sigma([[1, 1], [0, 0]])


@given(st.integers(1, 3).flatmap(lambda n: invertible(n)))
def test_sigma_scales_f(M):
    c = sigma_scalar(M)
    assert c is not None and c != 0
    assert sigma_relations_hold(build_B(M, with_rewrite=False))


def test_z_centrality_examples():
    assert z_centrality(CLASSICAL)
    assert not z_centrality(JORDAN)
    alt = [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 2], [0, 0, -2, 0]]
    assert z_centrality(alt)


@given(st.sampled_from([2, 4]).flatmap(lambda n: invertible(n, st.integers(-2, 2))))
def test_z_central_iff_alternating(M):
    assert z_centrality(M) == is_alternating(M)


def test_z_injective():
    assert z_injective(build_B(JORDAN), 5)


# --- classification ------------------------------------------------------------------


def test_classify_examples():
    assert classify2([[0, -1], [1, 0]]).kind == "classical"
    assert classify2([[-1, -1], [1, 0]]).kind == "jordan"
    assert classify2(JORDAN).kind == "jordan"
    tag = classify2([[0, "-1/2"], [1, 0]])
    assert tag == quantum_tag(2) and tag.q == 2 and tag.label() == "quantum:2"
    assert classify2([[1, 1], [0, 0]]).kind == "degenerate"
    with pytest.raises(ValueError):
        classify2([[1]])


def test_quantum_parameter_inversion():
    assert quantum_tag(2) == quantum_tag(Fraction(1, 2))
    assert quantum_tag(Fraction(1, 2)).q == 2
    assert quantum_tag(-3).q == -3
    assert quantum_tag(2) != quantum_tag(3)
    assert isomorphic_B(quantum_matrix(2), quantum_matrix(Fraction(1, 2)))
    assert not isomorphic_B(JORDAN, CLASSICAL)


def test_irrational_quantum_parameter():
    # q + 1/q = -2/3 has no rational root
    M = QuadMatrix([[2, -1], [1, 1]])
    tag = classify2(M)
    assert tag.kind == "quantum" and tag.q is None and tag.tau == Fraction(-2, 3)
    assert tag.label() == "quantum:tau=-2/3"
    assert Type2Tag("quantum", Fraction(-2, 3)) == tag


def test_degenerate_isomorphism():
    assert isomorphic_B([[1, 1], [0, 0]], [[2, 2], [0, 0]])
    assert not isomorphic_B([[1, 1], [0, 0]], [[1, 0], [0, 0]])
    assert not isomorphic_B([[1, 1], [0, 0]], JORDAN)


@pytest.mark.parametrize("M", [CLASSICAL, JORDAN, quantum_matrix(2), quantum_matrix(Fraction(-3, 2))])
def test_classify_invariant_under_congruence(M):
    rng = random.Random(7)
    base = classify2(M)
    done = 0
    while done < 25:
        Pm = [[Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(2)] for _ in range(2)]
        if rank(RatMatrix.from_dense(Pm)) < 2:
            continue
        c = Fraction(rng.choice([-2, -1, 1, 3]), rng.randint(1, 2))
        N = M.congruent(Pm).scaled(c)
        assert classify2(N) == base
        assert isomorphic_B(M, N)
        done += 1


# --- basis changes --------------------------------------------------------------------


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(square(n), invertible(n))),
       st.sampled_from([Fraction(1), Fraction(-2), Fraction(3, 5)]))
def test_congruence_basis_change(MP, nu):
    M, Pm = MP
    M = QuadMatrix(M)
    assert apply_basis_change(M, block_diag(Pm, nu)) == relation_space(M.congruent(Pm))


def test_identity_basis_change():
    assert apply_basis_change(JORDAN, RatMatrix.identity(3)) == relation_space(JORDAN)


@given(st.integers(2, 4).flatmap(
    lambda n: st.tuples(st.lists(st.integers(-3, 3), min_size=n - 1, max_size=n - 1),
                        st.lists(st.integers(-3, 3), min_size=n - 1, max_size=n - 1))))
def test_swap_basis_change(rowcol):
    row, col = rowcol
    n = len(row) + 1
    M = [[0] * n for _ in range(n)]
    M[0][1:] = row
    for i, c in enumerate(col, start=1):
        M[i][0] = c
    M = QuadMatrix(M)
    assert apply_basis_change(M, swap_matrix(n)) == relation_space(M.transpose())


def test_swap_example():
    M = QuadMatrix([[0, 1], [2, 0]])
    assert apply_basis_change(M, swap_matrix(2)) == relation_space(M.transpose())
    with pytest.raises(ValueError):
        apply_basis_change(M, [[1, 0, 0], [0, 1, 0], [0, 0, 0]])


# --- central element ------------------------------------------------------------------


def test_center_hand_value():
    r = center_test(-1, -1)
    assert r.confluent and r.central
    left, right = r.products["y"]
    assert left == right == P("-2 x^3*z - x^2*y*z")
    pa = build_B([[-1, -1], [1, 0]])
    assert center_element(pa, -1, -1) == P("-x^2*z")


@given(st.fractions(-5, 5, max_denominator=4), st.fractions(-5, 5, max_denominator=4).filter(bool))
def test_center_random(a, b):
    assert center_test(a, b).central


def test_center_examples():
    assert center_test(0, 3).central
    assert center_test(2, 3).central
    with pytest.raises(ValueError):
        center_test(1, 0)


# --- Koszul complex ----------------------------------------------------------------


@pytest.fixture(scope="module")
def jordan_hh():
    return koszul_hh(build_B(JORDAN), 8)


def test_jordan_hh_examples(jordan_hh):
    assert jordan_hh.row(3, range(9)) == [0, 0, 0, 1, 0, 0, 1, 0, 0]
    assert jordan_hh.row(0, range(9)) == [1] + [d + 2 for d in range(1, 9)]


def test_quantum_hh_examples():
    hh = koszul_hh(build_B(quantum_matrix(2)), 8)
    assert hh.row(0, range(4)) == [1, 3, 3, 4]
    for p in range(4):
        assert hh.row(p, range(9)) == [hh_quantum_counts(p, d) for d in range(9)]


def test_classical_hh_is_de_rham():
    hh = koszul_hh(build_B(CLASSICAL), 6)
    for p in range(4):
        for d in range(7):
            expected = comb(3, p) * comb(d - p + 2, 2) if d >= p else 0
            assert hh[p, d] == expected


@pytest.mark.parametrize("M", [CLASSICAL, JORDAN, quantum_matrix(2)])
def test_square_zero(M):
    assert koszul_square_zero(build_B(M), 8) == []


def test_square_zero_n3():
    assert koszul_square_zero(build_B([[1, 2, 0], [0, 1, 3], [1, 0, 1]]), 4) == []


@pytest.mark.parametrize("M", [JORDAN, quantum_matrix(2), CLASSICAL])
def test_self_duality_canonical(M):
    assert self_duality_check(build_B(M), 6).ok


def test_self_duality_random_n3():
    rng = random.Random(3)
    M = [[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)]
    while rank(RatMatrix.from_dense(M)) < 3:
        M = [[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)]
    assert self_duality_check(build_B(M), 4).ok


@given(st.sampled_from([2, 3]).flatmap(lambda n: invertible(n, st.integers(-2, 2))))
def test_cw_spans_intersection(M):
    assert koszul_intersection(build_B(M, with_rewrite=False)) == (1, True)


def test_euler_characteristic(jordan_hh):
    K = build_B(JORDAN).koszul()
    for d in range(9):
        chi = sum((-1) ** p * K.dim(p, d) for p in range(4))
        assert chi == sum((-1) ** p * jordan_hh[p, d] for p in range(4))


def test_inverse_used_by_sigma_is_exact():
    M = JORDAN.to_rat()
    assert inverse(M) @ M == RatMatrix.identity(2)
