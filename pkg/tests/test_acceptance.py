"""The fifteen acceptance criteria, one test each.

Every test records a single ``criterion N: PASS|FAIL ...`` line, printed in
the pytest terminal summary (and to stdout when run as a script).  Criteria
7, 8 and 11 compare against the literal basis lists, which miss one class in
degree 2 for p = 1 and p = 2.  The computed homology agrees with the lists
once the missing members are added, and that part is asserted; the literal
comparison is reported as FAIL and the test is marked xfail.
"""

import random
from fractions import Fraction
from math import comb

import pytest

from potentia.brylinski import (
    JordanBridge,
    degeneration_check,
    gr_compare,
    lift_suite,
    quantum_compare,
)
from potentia.exactla import RatMatrix, rank
from potentia.gradedquot import (
    confluence_check,
    hilbert_coeffs,
    overlap_resolutions,
    rewrite_system_from_presentation,
)
from potentia.ncalg import NcPoly, euler_check, hessian_symmetry_check
from potentia.poisson import (
    PoissonPotential,
    delta_square_failures,
    hp_count_table,
    hp_table,
    hphi_count_table,
    hphi_table,
    jordan_phi,
    casimir_kernel_check,
    quantum_phi,
    verify_family,
    wedge_square_failures,
)
from potentia.potentialcy import (
    CLASSICAL,
    JORDAN,
    QuadMatrix,
    apply_basis_change,
    block_diag,
    build_A,
    build_B,
    center_test,
    classify2,
    expected_relation_dim,
    hh_quantum_counts,
    hilbert_oracle_B,
    is_alternating,
    koszul_hh,
    koszul_square_zero,
    quantum_matrix,
    quantum_tag,
    relation_space,
    swap_matrix,
    z_centrality,
)

from conftest import ACCEPTANCE

D = 8
CANONICAL = {"classical": CLASSICAL, "jordan": JORDAN, "quantum": quantum_matrix(2)}


def record(n: int, ok: bool, text: str) -> None:
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {text}"
    ACCEPTANCE[n] = line
    print(line)


def rand_matrix(rng, n, lo=-3, hi=3, invertible=True):
    while True:
        M = [[Fraction(rng.randint(lo, hi), rng.randint(1, 2)) for _ in range(n)] for _ in range(n)]
        if not invertible or rank(RatMatrix.from_dense(M)) == n:
            return M


@pytest.fixture(scope="module")
def bridge():
    return JordanBridge()


@pytest.fixture(scope="module")
def jordan_tables(bridge):
    return koszul_hh(bridge.pa, D), hp_table(bridge.pp, D)


def test_01_hilbert_series():
    ok = hilbert_coeffs(build_B(JORDAN).presentation, 10) == [comb(d + 2, 2) for d in range(11)]
    rng = random.Random(1)
    samples = [rand_matrix(rng, 3) for _ in range(3)]
    ok_n3 = all(hilbert_coeffs(build_B(M).presentation, 6) == hilbert_oracle_B(3, 6) for M in samples)
    ok_n1 = all(hilbert_coeffs(build_B([[a]]).presentation, 8) == [1] + [2] * 8 for a in (1, -2, Fraction(1, 3)))
    ok_a1 = hilbert_coeffs(build_A([[1]]), 4) == [1, 1, 0, 0, 0]
    good = ok and ok_n3 and ok_n1 and ok_a1
    record(1, good, "Hilbert series: jordan C(d+2,2) d<=10, n=3 oracle d<=6, n=1 series")
    assert good


def test_02_relation_count():
    rng = random.Random(2)
    mats = [rand_matrix(rng, rng.randint(1, 4), -2, 2, invertible=False) for _ in range(20)]
    ok = all(build_B(M, with_rewrite=False).relation_dim() == expected_relation_dim(M) for M in mats)
    witness = build_B([[1, 1], [0, 0]]).relation_dim()
    ok = ok and witness == 3 and QuadMatrix([[1, 1], [0, 0]]).rank() + 1 == 2
    record(2, ok, f"dim R_B = rk(M | tM) + 1 on 20 random M; witness [[1,1],[0,0]] gives {witness} > 2")
    assert ok


def test_03_confluence():
    ok = all(
        not confluence_check(rewrite_system_from_presentation(build_B(M).presentation))
        for M in CANONICAL.values()
    )
    res = overlap_resolutions(build_B(JORDAN).rewrite)
    target = NcPoly.parse(build_B(JORDAN).gens, "x*y*z + 3 x^2*z")
    ok = ok and len(res) == 1 and res[0].left == res[0].right == target
    record(3, ok, "canonical rewrite systems confluent; zyx -> xyz + 3x^2z on both paths")
    assert ok


def test_04_noncommutative_calculus():
    pots = [build_B(M).w for M in CANONICAL.values()]
    rng = random.Random(4)
    pots += [build_B(rand_matrix(rng, rng.randint(1, 4)), with_rewrite=False).w for _ in range(20)]
    ok = all(euler_check(w) and hessian_symmetry_check(w) for w in pots)
    record(4, ok, "Euler relation and Hessian symmetry: 3 canonical + 20 random potentials")
    assert ok


def test_05_complexes_square_zero():
    bad = {}
    for name, M in CANONICAL.items():
        if koszul_square_zero(build_B(M), D):
            bad[f"koszul {name}"] = True
    for name, phi in (("jordan", jordan_phi()), ("quantum", quantum_phi(2))):
        pp = PoissonPotential(phi)
        if delta_square_failures(pp, D):
            bad[f"delta {name}"] = True
        if wedge_square_failures(pp, D):
            bad[f"wedge {name}"] = True
    ok = not bad
    record(5, ok, "d~ o d~ = 0, delta o delta = 0, (^dphi)^2 = 0 for d <= 8" + (f" failing {sorted(bad)}" if bad else ""))
    assert ok


def test_06_hphi_tables(bridge):
    t = hphi_table(bridge.pp, D)
    ok = t == hphi_count_table(D) and all(t[0, d] == 0 for d in range(D + 1))
    ok = ok and all(verify_family(bridge.pp, f, D).ok for f in ("Hphi1", "Hphi2", "Hphi3"))
    record(6, ok, "H^phi_0 = 0; H^phi_1..3 match the enumerated bases for d <= 8")
    assert ok


def test_07_hp_tables(bridge, jordan_tables):
    _, hp = jordan_tables
    corrected = hp == hp_count_table(D, include_extra=True)
    corrected = corrected and all(verify_family(bridge.pp, f"HP{p}", D).ok for p in range(4))
    spots = hp.row(3, range(D + 1)) == [0, 0, 0, 1, 0, 0, 1, 0, 0] and hp[1, 1] == 3
    assert corrected and spots
    literal = hp == hp_count_table(D, include_extra=False) and hp[1, 2] == 4
    record(7, literal, f"HP vs literal bases: HP_1 at d=2 computed {hp[1, 2]}, listed 4; "
           f"HP_2 at d=2 computed {hp[2, 2]}, listed 0.  With (z,0,-x) and (0,1,0) added all "
           "counts agree")
    if not literal:
        pytest.xfail("literal HP_1 and HP_2 lists miss one class each in degree 2")


def test_08_curl_free_quotient(bridge):
    lemma = casimir_kernel_check(bridge.pp, D) == []
    corrected = verify_family(bridge.pp, "CurlFree", D, include_extra=True).ok
    assert lemma and corrected
    rep = verify_family(bridge.pp, "CurlFree", D, include_extra=False)
    record(8, rep.ok, "kernel of K -> grad K x grad phi is the C[phi] slice; three-family quotient dims: "
           + ("all match" if rep.ok else f"{'; '.join(rep.failures)} (missing (z,0,-x))"))
    if not rep.ok:
        pytest.xfail("literal three-family list misses (z, 0, -x)")


def test_09_gr_identities(bridge):
    rep = gr_compare(D, bridge)
    record(9, rep.ok, f"gr identities on {rep.checked} basis chains with i+j+k <= 8")
    assert rep.ok


def test_10_lifts(bridge):
    outcomes = lift_suite(D, bridge)
    failing = [o.record.label for o in outcomes if not o.formula_ok]
    unflagged = [o for o in outcomes if not o.formula_ok and not o.witness]
    fams = sorted({o.record.family for o in outcomes})
    ok = not unflagged and not failing and all(o.solver_agrees for o in outcomes)
    record(10, ok, f"{len(outcomes)} explicit lifts in families {','.join(fams)}; "
           f"formula failures {failing or 'none'}")
    assert ok


def test_11_degeneration(bridge, jordan_tables):
    hh, hp = jordan_tables
    rep = degeneration_check(D, bridge, include_extra=True)
    assert rep.ok and hh == hp
    literal = degeneration_check(D, bridge, include_extra=False)
    bad = [(p, d) for p, d, *_ in literal.mismatches]
    ok = not literal.mismatches
    record(11, ok, "HH = HP for p <= 3, d <= 8 and the lifted classes form bases; "
           + ("theorem counts match" if ok else f"literal theorem counts short at (p,d) {bad}"))
    if not ok:
        pytest.xfail("literal HH_1 and HH_2 lists miss one class each in degree 2")


def test_12_quantum():
    rep = quantum_compare(2, D)
    ok = rep.ok and all(rep.hh[p, d] == hh_quantum_counts(p, d) for p in range(4) for d in range(D + 1))
    record(12, ok, "quantum q=2: HH and HP of phi_q match the basis counts for p <= 3, d <= 8")
    assert ok


def test_13_center():
    rng = random.Random(13)
    pairs = [(-1, -1)]
    while len(pairs) < 11:
        b = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        if b:
            pairs.append((Fraction(rng.randint(-5, 5), rng.randint(1, 3)), b))
    reports = [center_test(a, b) for a, b in pairs]
    hand = reports[0].products["y"][0] == NcPoly.parse(build_B(JORDAN).gens, "-2 x^3*z - x^2*y*z")
    ok = hand and all(r.central for r in reports)
    record(13, ok, "Phi central for (a,b) = (-1,-1) and 10 random pairs; y Phi = -2x^3z - x^2yz")
    assert ok


def test_14_classification():
    ok = [classify2(M).kind for M in CANONICAL.values()] == ["classical", "jordan", "quantum"]
    ok = ok and classify2([[-1, -1], [1, 0]]).kind == "jordan"
    rng = random.Random(14)
    for M in CANONICAL.values():
        base = classify2(M)
        for _ in range(25):
            P = rand_matrix(rng, 2, -4, 4)
            ok = ok and classify2(M.congruent(P)) == base
    ok = ok and quantum_tag(2) == quantum_tag(Fraction(1, 2)) == classify2(quantum_matrix(Fraction(1, 2)))
    samples = [rand_matrix(rng, n, -2, 2) for n in (2, 4) for _ in range(5)]
    alt = [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 3], [0, 0, -3, 0]]
    samples += [[[0, 2], [-2, 0]], alt]
    ok = ok and all(z_centrality(M) == is_alternating(M) for M in samples)
    record(14, ok, "canonical types, 25 congruences each, Quantum(2) = Quantum(1/2), z central iff alternating")
    assert ok


def test_15_basis_changes():
    rng = random.Random(15)
    ok = True
    for _ in range(10):
        n = rng.randint(1, 3)
        M = QuadMatrix(rand_matrix(rng, n, invertible=False))
        P = rand_matrix(rng, n)
        nu = Fraction(rng.choice([-3, -1, 2, 5]), rng.randint(1, 3))
        ok = ok and apply_basis_change(M, block_diag(P, nu)) == relation_space(M.congruent(P))
    shapes = [[[0, 1], [2, 0]], [[0, 2, -1], [3, 0, 0], [1, 0, 0]], [[0, 1, 1, 2], [1, 0, 0, 0], [-1, 0, 0, 0], [4, 0, 0, 0]]]
    ok = ok and all(
        apply_basis_change(S, swap_matrix(len(S))) == relation_space(QuadMatrix(S).transpose())
        for S in shapes
    )
    record(15, ok, "congruence basis changes (10 random) and the x1 <-> z swap on special shapes")
    assert ok


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
