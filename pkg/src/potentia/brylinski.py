"""Filtered Koszul complex of the Jordan algebra versus the Poisson complex of ``T``.

The filtration counts ``y``: a chain ``x^i y^j z^k (x) s`` has total filtration
``j + weight(s)`` where the symbols ``x, y, z`` weigh ``0, 1, 0``, the relations
``r1, r2, r3`` weigh ``1, 0, 1`` and ``c(w)`` weighs ``1``.  Every ``d~`` lowers
the total by at least one and its top part is the Brylinski ``delta``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .exactla import axpy, solve, RatMatrix
from .homology import HomologyTable
from .poisson import (
    CPoly,
    PoissonPotential,
    hp_count_table,
    hp_family,
    hp_table,
    jordan_phi,
    quantum_phi,
    vis_zero,
)
from .potentialcy import (
    JORDAN,
    PotentialAlgebra,
    build_B,
    hh_quantum_counts,
    koszul_hh,
    quantum_matrix,
)
from .exactla import parse_rat

WEIGHTS = {0: (0,), 1: (0, 1, 0), 2: (1, 0, 1), 3: (1,)}
FAMILY_P = {"A": 1, "B": 1, "U": 1, "V": 1, "W": 1, "C": 2, "D": 2, "E": 2, "O": 2, "top": 3}


def _is_zero(p: int, value) -> bool:
    return value.is_zero() if p in (0, 3) else vis_zero(value)


class JordanBridge:
    """The Jordan algebra, its Koszul complex and ``T`` with ``phi = -x^2 z``."""

    def __init__(self, pa: PotentialAlgebra | None = None, pp: PoissonPotential | None = None):
        self.pa = pa or build_B(JORDAN)
        self.K = self.pa.koszul()
        self.pp = pp or PoissonPotential(jordan_phi())

    # -- basis bookkeeping -------------------------------------------------------

    def exps(self, m: int, idx: int) -> tuple:
        w = self.pa.algebra.slice(m).coset_basis[idx]
        e = (w.count(0), w.count(1), w.count(2))
        if w != (0,) * e[0] + (1,) * e[1] + (2,) * e[2]:
            raise ValueError(f"basis word {w} is not an ordered monomial")
        return e

    def index_of(self, m: int, e: tuple) -> int:
        w = (0,) * e[0] + (1,) * e[1] + (2,) * e[2]
        return self.pa.algebra.slice(m).index[w]

    def filtration(self, p: int, d: int, key) -> int:
        blk, idx = key
        return self.exps(d - p, idx)[1] + WEIGHTS[p][blk]

    def to_chain(self, p: int, d: int, value) -> dict:
        parts = [value] if p in (0, 3) else list(value)
        out = {}
        for blk, poly in enumerate(parts):
            for e, c in poly.terms.items():
                if sum(e) != d - p:
                    raise ValueError(f"term {e} does not sit in internal degree {d}")
                out[(blk, self.index_of(d - p, e))] = c
        return out

    def to_poisson(self, p: int, d: int, chain: dict):
        nb = 1 if p in (0, 3) else 3
        parts = [dict() for _ in range(nb)]
        for (blk, idx), c in chain.items():
            parts[blk][self.exps(d - p, idx)] = c
        polys = [CPoly(t) for t in parts]
        return polys[0] if nb == 1 else tuple(polys)

    def graded_part(self, p: int, d: int, chain: dict, t: int) -> dict:
        return {k: c for k, c in chain.items() if self.filtration(p, d, k) == t}

    def top(self, p: int, d: int, chain: dict) -> int | None:
        if not chain:
            return None
        return max(self.filtration(p, d, k) for k in chain)


# --- the associated graded complex ---------------------------------------------


@dataclass
class GrReport:
    checked: int = 0
    mismatches: list = field(default_factory=list)
    raised: list = field(default_factory=list)  # filtration not lowered
    exact_drop: int = 0  # chains whose image has top exactly one below

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.raised


def gr_compare(D: int, bridge: JordanBridge | None = None) -> GrReport:
    """The seven identities ``gr d~_p(x^i y^j z^k (x) s) = delta_p(x^i y^j z^k e_s)``."""
    br = bridge or JordanBridge()
    rep = GrReport()
    for total in range(D + 1):
        for i in range(total + 1):
            for j in range(total + 1 - i):
                k = total - i - j
                for p in (1, 2, 3):
                    d = total + p
                    idx = br.index_of(total, (i, j, k))
                    for blk in range(len(WEIGHTS[p])):
                        src = j + WEIGHTS[p][blk]
                        img = br.K.apply(p, d, {(blk, idx): Fraction(1)})
                        tops = {br.filtration(p - 1, d, key) for key in img}
                        if tops and max(tops) > src - 1:
                            rep.raised.append((p, blk, (i, j, k)))
                        gr = br.graded_part(p - 1, d, img, src - 1)
                        if gr:
                            rep.exact_drop += 1
                        lhs = br.to_poisson(p - 1, d, gr)
                        basis = _poisson_basis_elem(p, blk, (i, j, k))
                        rhs = br.pp.delta(p, basis)
                        rep.checked += 1
                        if not _equal(p - 1, lhs, rhs):
                            rep.mismatches.append(((i, j, k), p, blk, str(lhs), str(rhs)))
    return rep


def _poisson_basis_elem(p: int, blk: int, e: tuple):
    m = CPoly({e: 1})
    if p in (0, 3):
        return m
    v = [CPoly(), CPoly(), CPoly()]
    v[blk] = m
    return tuple(v)


def _equal(p: int, a, b) -> bool:
    if p in (0, 3):
        return a == b
    return all(x == y for x, y in zip(a, b))


# --- explicit lifts ---------------------------------------------------------------


@dataclass
class LiftRecord:
    family: str
    params: tuple
    p: int
    d: int
    chain: dict
    target: object
    extra: bool = False  # member outside the literal parameter range

    @property
    def label(self) -> str:
        return f"{self.family}~_{{{','.join(map(str, self.params))}}}"


def _fact_ratio(a: int, b: int) -> Fraction:
    return Fraction(factorial(a), factorial(b))


def u_coeff(n: int, k: int, l: int) -> int:
    """``a_{n,k,l}``."""
    return -2 * n - 6 + 6 * k - 3 * l + 2 * n * (k - l) - 3 * k * (k - l)


def _X(a: int, b: int, c: int, coef) -> list:
    """``coef * (x^a y^b z^c (x) y - 2c x^a y^b z^c (x) x)``."""
    return [(coef, (a, b, c), 1), (-2 * c * coef, (a, b, c), 0)]


def lift_terms(family: str, params: tuple) -> tuple:
    """``(p, terms)`` with terms ``(coef, (i, j, k), block)`` verbatim."""
    P = params
    if family == "top":
        (k,) = P
        return 3, [(1, (2 * k, 0, k), 0)]
    if family == "A":
        (k,) = P
        return 1, [(1, (2 * k + 1, 0, k + 1), 0), (-1, (2 * k + 2, 0, k), 2)]
    if family == "B":
        (r,) = P
        return 1, [(1, (0, 0, r + 2), 0), (-1, (1, 0, r + 1), 2)]
    if family == "W":
        (p,) = P
        t = [(_fact_ratio(p, k), (p - k, k, 0), 0) for k in range(p + 1)]
        t += [(_fact_ratio(p, k), (p - k, k, 0), 1) for k in range(p)]
        return 1, t
    if family == "V":
        m, s = P
        t = []
        if s >= 1:
            t.append((s, (0, s - 1, m - s), 1))
        if m - s >= 1:
            t.append((m - s, (0, s, m - 1 - s), 2))
        for l in range(s - 1):
            c = Fraction(m - s, 2 * (m - s) - 1) * _fact_ratio(s, l)
            t.append((c, (s - l - 1, l, m - s), 1))
        return 1, t
    if family == "U":
        n, k = P
        c = n + 2 - k
        t = [
            (2 * n + 3, (0, k, c), 0),
            (-3 * k, (1, k - 1, c), 1),
            (-2 * n + 3 * (k - 1), (1, k, n + 1 - k), 2),
        ]
        t = [x for x in t if x[0] != 0 and min(x[1]) >= 0]
        if 3 * k - 2 * (n + 2) < 0:
            for l in range(k - 1):
                coef = -_fact_ratio(k, l) * Fraction(u_coeff(n, k, l), 2 * c - (k - l))
                t += _X(k - l, l, c, coef)
        else:
            ls = 3 * k - 4 - 2 * n
            a_s = u_coeff(n, k, ls)
            for l in range(ls):
                coef = _fact_ratio(k, l) * Fraction(a_s - u_coeff(n, k, l), l - ls)
                t += _X(k - l, l, c, coef)
            for l in range(ls + 1, k - 1):
                coef = -_fact_ratio(k, l) * Fraction(u_coeff(n, k, l), l - ls)
                t += _X(k - l, l, c, coef)
            t.append((-_fact_ratio(k, ls + 1) * a_s, (2 * n + 3 - 2 * k, 3 * k - 3 - 2 * n, c), 0))
        return 1, t
    if family == "C":
        (r,) = P
        return 2, [(1, (2 * r + 1, 0, r), 0), (1, (2 * r, 1, r), 1), (1, (2 * r, 0, r + 1), 2)]
    if family == "D":
        (s,) = P
        return 2, [(1, (2 * s + 1, 0, s), 1)]
    if family == "E":
        (t_,) = P
        return 2, [(1, (0, 0, t_ + 1), 1)]
    if family == "O":
        n, k = P
        t = [
            (k + 1, (1, k, n - k), 0),
            (2 * (n - k) + 1, (0, k + 1, n - k), 1),
            (-2 * (k + 1), (0, k, n - k + 1), 2),
        ]
        for j in range(k):
            t.append((-_fact_ratio(k + 1, j), (k - j, j, n + 1 - k), 2))
        return 2, t
    raise ValueError(f"unknown lift family {family!r}")


def _check_range(family: str, P: tuple) -> bool:
    """True when ``P`` is in the literal range; extras (``r = -1``, ``t = -1``) return False."""
    if family in ("top", "A", "W", "C", "D"):
        if P[0] < 0:
            raise ValueError(f"{family} needs a nonnegative parameter")
        return True
    if family in ("B", "E"):
        if P[0] < -1:
            raise ValueError(f"{family} needs a parameter >= -1")
        return P[0] >= 0
    if family == "U":
        n, k = P
        if n < 0 or not 1 <= k <= n + 1:
            raise ValueError("U needs n >= 0 and 1 <= k <= n + 1")
        return True
    if family == "V":
        m, s = P
        if m < 1 or not 0 <= s <= m:
            raise ValueError("V needs m >= 1 and 0 <= s <= m")
        return True
    if family == "O":
        n, k = P
        if n < 0 or not 0 <= k <= n:
            raise ValueError("O needs n >= 0 and 0 <= k <= n")
        return True
    raise ValueError(f"unknown lift family {family!r}")


def _target(family: str, P: tuple):
    for e in hp_family(FAMILY_P[family], _degree_of(family, P), include_extra=True):
        if e.family == family and e.params == tuple(P):
            return e.value
    raise ValueError(f"no target for {family}{P}")


def _degree_of(family: str, P: tuple) -> int:
    return {
        "top": lambda: 3 * P[0] + 3,
        "A": lambda: 3 * P[0] + 3,
        "B": lambda: P[0] + 3,
        "U": lambda: P[0] + 3,
        "V": lambda: P[0],
        "W": lambda: P[0] + 1,
        "C": lambda: 3 * P[0] + 3,
        "D": lambda: 3 * P[0] + 3,
        "E": lambda: P[0] + 3,
        "O": lambda: P[0] + 3,
    }[family]()


def build_lift(family: str, params, bridge: JordanBridge | None = None) -> LiftRecord:
    br = bridge or JordanBridge()
    P = tuple(params)
    in_range = _check_range(family, P)
    p, terms = lift_terms(family, P)
    d = _degree_of(family, P)
    chain: dict = {}
    for c, e, blk in terms:
        if c == 0:
            continue
        if min(e) < 0:
            raise ValueError(f"negative exponent in {family}{P}")
        axpy(chain, Fraction(c), {(blk, br.index_of(d - p, e)): Fraction(1)})
    return LiftRecord(family, P, p, d, chain, _target(family, P), extra=not in_range)


def verify_lift(rec: LiftRecord, bridge: JordanBridge | None = None) -> bool:
    """``d~ chain = 0`` and the chain's top filtration part is the target."""
    br = bridge or JordanBridge()
    if br.K.apply(rec.p, rec.d, rec.chain):
        return False
    return top_matches(br, rec.p, rec.d, rec.chain, rec.target)


def top_matches(br: JordanBridge, p: int, d: int, chain: dict, target) -> bool:
    tchain = br.to_chain(p, d, target)
    t = br.top(p, d, tchain)
    if t is None:
        return not chain
    if br.top(p, d, chain) != t:
        return False
    return br.graded_part(p, d, chain, t) == tchain


def lift_by_solver(target, p: int, d: int, bridge: JordanBridge | None = None):
    """A ``d~``-cycle whose top filtration part is ``target``, or None if none exists.

    ``target`` must be a ``delta_p``-cycle, homogeneous for the filtration.
    """
    br = bridge or JordanBridge()
    if _is_zero(p, target):
        return {}
    if p > 0 and not _is_zero(p - 1, br.pp.delta(p, target)):
        raise ValueError("target is not a Poisson cycle")
    tchain = br.to_chain(p, d, target)
    levels = {br.filtration(p, d, k) for k in tchain}
    if len(levels) != 1:
        raise ValueError("target is not homogeneous for the filtration")
    if p == 0:
        return tchain
    t = levels.pop()
    m = d - p
    dim_m = br.pa.algebra.graded_dim(m) if m >= 0 else 0
    unknowns = [
        (blk, idx)
        for blk in range(len(WEIGHTS[p]))
        for idx in range(dim_m)
        if br.filtration(p, d, (blk, idx)) < t
    ]
    rhs = br.K.flat(p - 1, d, br.K.apply(p, d, tchain))
    rows = br.K.dim(p - 1, d)
    cols = [br.K.flat(p - 1, d, br.K.apply(p, d, {u: Fraction(1)})) for u in unknowns]
    A = RatMatrix.from_rows(cols, rows).transpose() if cols else RatMatrix(rows, 0)
    x = solve(A, {k: -c for k, c in rhs.items()})
    if x is None:
        return None
    chain = dict(tchain)
    for col, c in x.items():
        axpy(chain, c, {unknowns[col]: Fraction(1)})
    return chain


def lift_params(D: int, include_extra: bool = True) -> list:
    """Every ``(family, params)`` whose lift has internal degree ``<= D``."""
    out = []
    for p in (1, 2, 3):
        for e in hp_family(p, D, include_extra):
            out.append((e.family, e.params))
    return out


@dataclass
class LiftOutcome:
    record: LiftRecord
    formula_ok: bool
    witness: dict  # the formula chain, or the solver's when the formula fails
    solver_agrees: bool  # formula and solver lifts differ by a lower cycle


def lift_suite(D: int, bridge: JordanBridge | None = None, include_extra: bool = True) -> list:
    br = bridge or JordanBridge()
    out = []
    for fam, P in lift_params(D, include_extra):
        rec = build_lift(fam, P, br)
        ok = verify_lift(rec, br)
        sol = lift_by_solver(rec.target, rec.p, rec.d, br)
        agrees = False
        if sol is not None:
            diff = dict(rec.chain)
            axpy(diff, Fraction(-1), sol)
            t = br.top(rec.p, rec.d, br.to_chain(rec.p, rec.d, rec.target))
            low = br.top(rec.p, rec.d, diff)
            agrees = (low is None or low < t) and not br.K.apply(rec.p, rec.d, diff)
        witness = rec.chain if ok else (sol or {})
        out.append(LiftOutcome(rec, ok, witness, agrees))
    return out


# --- degeneration ------------------------------------------------------------------


@dataclass
class DegenerationReport:
    hh: HomologyTable
    hp: HomologyTable
    counts: HomologyTable
    mismatches: list = field(default_factory=list)
    lift_rank_failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.lift_rank_failures


def degeneration_check(D: int, bridge: JordanBridge | None = None, include_extra: bool = True) -> DegenerationReport:
    """``dim HH_p(B)_d = dim HP_p(T)_d = basis count``, plus: the lifted basis is a basis of ``HH``."""
    br = bridge or JordanBridge()
    hh = koszul_hh(br.pa, D)
    hp = hp_table(br.pp, D)
    counts = hp_count_table(D, include_extra)
    rep = DegenerationReport(hh, hp, counts)
    for p in range(4):
        for d in range(D + 1):
            a, b, c = hh[p, d], hp[p, d], counts[p, d]
            if not a == b == c:
                rep.mismatches.append((p, d, a, b, c))
    witnesses: dict = {}
    for o in lift_suite(D, br, include_extra):
        witnesses.setdefault((o.record.p, o.record.d), []).append(o.witness)
    for e in hp_family(0, D, include_extra):
        witnesses.setdefault((0, e.d), []).append(br.to_chain(0, e.d, e.value))
    for d in range(D + 1):
        s = br.K.slice(d)
        for p in range(4):
            vecs = [br.K.flat(p, d, c) for c in witnesses.get((p, d), [])]
            base = s.boundaries(p)
            for c in witnesses.get((p, d), []):
                if p and br.K.apply(p, d, c):
                    rep.lift_rank_failures.append((p, d, "witness is not a cycle"))
            grown = base.copy()
            r = sum(1 for v in vecs if grown.add(v))
            if r != len(vecs) or r != hh[p, d]:
                rep.lift_rank_failures.append((p, d, f"rank {r}, listed {len(vecs)}, HH {hh[p, d]}"))
    return rep


@dataclass
class QuantumReport:
    q: Fraction
    hh: HomologyTable
    hp: HomologyTable
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def quantum_compare(q, D: int) -> QuantumReport:
    q = parse_rat(q)
    if q == 0 or abs(q) == 1:
        raise ValueError("q must be nonzero and not a root of unity")
    hh = koszul_hh(build_B(quantum_matrix(q)), D)
    hp = hp_table(PoissonPotential(quantum_phi(q)), D)
    rep = QuantumReport(q, hh, hp)
    for p in range(4):
        for d in range(D + 1):
            c = hh_quantum_counts(p, d)
            if not hh[p, d] == hp[p, d] == c:
                rep.mismatches.append((p, d, hh[p, d], hp[p, d], c))
    return rep


def filtration_drop_ok(D: int, bridge: JordanBridge | None = None) -> bool:
    """``d~_p`` lowers the total filtration by at least one on every basis chain."""
    return not gr_compare(D, bridge).raised
