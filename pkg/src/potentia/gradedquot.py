"""Graded quadratic algebras ``T(V)/(R)``.

Two independent backends:

* linear algebra: :class:`QuotientAlgebra` builds each degree slice ``B_d`` as
  ``(B_{d-1} (x) V) / (B_{d-2} . R)``, so no confluence assumption is needed;
* rewriting: :class:`RewriteSystem` with rules ``lead -> smaller`` in the
  deglex order ``x_1 < ... < x_n < z``, plus a confluence checker over the
  length-3 overlaps.

Ambient columns are ordered by *decreasing* word so that echelon pivots are
leading words; the coset basis of each slice is then the set of normal words.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .exactla import Subspace, axpy, span
from .ncalg import GenSet, NcPoly, word_key


@dataclass
class QuadraticPresentation:
    gens: GenSet
    relations: list

    def __post_init__(self):
        self.relations = [r for r in self.relations]
        for r in self.relations:
            if r.gens != self.gens:
                raise ValueError("relation over a different generator set")
            if not r.is_zero() and r.degrees() != {2}:
                raise ValueError(f"relation {r} is not homogeneous of degree 2")

    @property
    def n(self) -> int:
        return len(self.gens)

    @classmethod
    def free(cls, gens: GenSet) -> "QuadraticPresentation":
        return cls(gens, [])


def tensor_words(n: int, d: int) -> list:
    """All words of length ``d`` in decreasing lexicographic order."""
    return sorted(product(range(n), repeat=d), reverse=True)


def relation_span(pres: QuadraticPresentation, d: int) -> Subspace:
    """Degree-``d`` part of the two-sided ideal, inside ``V^{(x)d}``.

    Columns follow :func:`tensor_words`.  Brute force; meant for small ``d``.
    """
    words = tensor_words(pres.n, max(d, 0))
    col = {w: i for i, w in enumerate(words)}
    s = Subspace(len(words))
    if d < 2:
        return s
    for k in range(d - 1):
        for u in product(range(pres.n), repeat=k):
            for v in product(range(pres.n), repeat=d - 2 - k):
                for r in pres.relations:
                    s.add({col[u + w + v]: c for w, c in r.terms.items()})
    return s


class QuotientSlice:
    """Degree-``d`` slice of a quadratic quotient.

    ``ambient`` lists the words ``b.a`` with ``b`` a basis word of the previous
    slice; ``relation_span`` is the image of ``B_{d-2} . R`` there and
    ``coset_basis`` the non-pivot (normal) words, in deglex order.
    """

    def __init__(self, algebra: "QuotientAlgebra", degree: int, ambient: list, rel: Subspace):
        self.algebra = algebra
        self.degree = degree
        self.ambient = ambient
        self.amb_col = {w: i for i, w in enumerate(ambient)}
        self.relation_span = rel
        pivots = set(rel.pivot_cols)
        free = [c for c in range(len(ambient)) if c not in pivots]
        order = sorted(free, key=lambda c: ambient[c])
        self.coset_basis = [ambient[c] for c in order]
        self.index = {w: i for i, w in enumerate(self.coset_basis)}
        self._col_to_basis = {c: i for i, c in enumerate(order)}
        self._memo: dict = {}

    @property
    def dim(self) -> int:
        return len(self.coset_basis)

    def reduce_ambient(self, vec: dict) -> dict:
        r = self.relation_span.reduce(vec)
        return {self._col_to_basis[c]: a for c, a in r.items()}

    def word_coords(self, w) -> dict:
        """Coset coordinates of a word of length ``degree``."""
        w = tuple(w)
        hit = self._memo.get(w)
        if hit is not None:
            return hit
        if len(w) != self.degree:
            raise ValueError(f"word of length {len(w)} in slice of degree {self.degree}")
        if w in self.index:
            out = {self.index[w]: Fraction(1)}
        elif self.degree <= 1:
            raise ValueError(f"word {w} outside the generator range")
        else:
            prev = self.algebra.slice(self.degree - 1)
            pc = prev.word_coords(w[:-1])
            last = w[-1]
            vec = {self.amb_col[prev.coset_basis[i] + (last,)]: c for i, c in pc.items()}
            out = self.reduce_ambient(vec)
        self._memo[w] = out
        return out

    def expand(self, p: NcPoly) -> dict:
        acc: dict = {}
        for w, c in p.terms.items():
            if len(w) != self.degree:
                raise ValueError("polynomial has terms outside this degree")
            axpy(acc, c, self.word_coords(w))
        return acc

    def to_poly(self, coords: dict) -> NcPoly:
        return NcPoly(self.algebra.gens, {self.coset_basis[i]: c for i, c in coords.items()})


class QuotientAlgebra:
    """Linear-algebra backend: slices built lazily, degree by degree."""

    def __init__(self, pres: QuadraticPresentation):
        self.pres = pres
        self.gens = pres.gens
        self.n = pres.n
        self._slices: list = []

    def slice(self, d: int) -> QuotientSlice:
        if d < 0:
            raise ValueError("negative degree")
        while len(self._slices) <= d:
            self._slices.append(self._build(len(self._slices)))
        return self._slices[d]

    def _build(self, d: int) -> QuotientSlice:
        n = self.n
        if d == 0:
            return QuotientSlice(self, 0, [()], Subspace(1))
        prev = self.slice(d - 1)
        ambient = sorted((b + (a,) for b in prev.coset_basis for a in range(n)), reverse=True)
        col = {w: i for i, w in enumerate(ambient)}
        rel = Subspace(len(ambient))
        if d >= 2:
            prev2 = self.slice(d - 2)
            for b in prev2.coset_basis:
                for r in self.pres.relations:
                    vec: dict = {}
                    for (i, j), c in r.terms.items():
                        for k, a in prev.word_coords(b + (i,)).items():
                            key = col[prev.coset_basis[k] + (j,)]
                            s = vec.get(key, 0) + c * a
                            if s:
                                vec[key] = s
                            else:
                                vec.pop(key)
                    rel.add(vec)
        return QuotientSlice(self, d, ambient, rel)

    def graded_dim(self, d: int) -> int:
        return self.slice(d).dim

    def expand(self, p: NcPoly) -> dict:
        if p.is_zero():
            return {}
        return self.slice(p.degree()).expand(p)

    def multiply(self, a: dict, da: int, b: dict, db: int) -> dict:
        """Product of coset vectors of degrees ``da`` and ``db``."""
        sa, sb, sc = self.slice(da), self.slice(db), self.slice(da + db)
        acc: dict = {}
        for i, x in a.items():
            u = sa.coset_basis[i]
            for j, y in b.items():
                axpy(acc, x * y, sc.word_coords(u + sb.coset_basis[j]))
        return acc

    def is_zero(self, p: NcPoly) -> bool:
        return not self.expand(p)


def graded_dim(pres: QuadraticPresentation, d: int) -> int:
    return QuotientAlgebra(pres).graded_dim(d)


def hilbert_coeffs(pres: QuadraticPresentation, D: int) -> list:
    alg = QuotientAlgebra(pres)
    return [alg.graded_dim(d) for d in range(D + 1)]


# --- rewriting -------------------------------------------------------------


@dataclass(frozen=True)
class RewriteRule:
    lead: tuple
    rhs: NcPoly

    def __post_init__(self):
        if len(self.lead) != 2:
            raise ValueError("quadratic rules need a lead word of length 2")
        for w in self.rhs.terms:
            if word_key(w) >= word_key(self.lead):
                raise ValueError(f"rhs word {w} is not smaller than the lead {self.lead}")


@dataclass
class RewriteSystem:
    gens: GenSet
    rules: list
    _by_lead: dict = field(default_factory=dict, repr=False)
    _memo: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for r in self.rules:
            if r.lead in self._by_lead:
                raise ValueError(f"duplicate lead {r.lead}")
            self._by_lead[r.lead] = r.rhs.terms

    @property
    def leads(self) -> list:
        return [r.lead for r in self.rules]

    def step(self, w: tuple, pos: int) -> dict:
        """Apply the rule at position ``pos`` of ``w`` once."""
        rhs = self._by_lead[w[pos:pos + 2]]
        return {w[:pos] + v + w[pos + 2:]: c for v, c in rhs.items()}

    def first_redex(self, w: tuple):
        for i in range(len(w) - 1):
            if w[i:i + 2] in self._by_lead:
                return i
        return None

    def normal_word(self, w: tuple) -> dict:
        hit = self._memo.get(w)
        if hit is not None:
            return hit
        pos = self.first_redex(w)
        if pos is None:
            out = {w: Fraction(1)}
        else:
            out = {}
            for v, c in self.step(w, pos).items():
                axpy(out, c, self.normal_word(v))
        self._memo[w] = out
        return out

    def is_normal(self, w: tuple) -> bool:
        return self.first_redex(tuple(w)) is None

    def normal_words(self, d: int) -> list:
        return [w for w in product(range(len(self.gens)), repeat=d) if self.is_normal(w)]


def normal_form(rs: RewriteSystem, p: NcPoly) -> NcPoly:
    if p.gens != rs.gens:
        raise ValueError("polynomial over a different generator set")
    acc: dict = {}
    for w, c in p.terms.items():
        axpy(acc, c, rs.normal_word(w))
    return NcPoly(rs.gens, acc)


@dataclass
class Overlap:
    word: tuple
    left: NcPoly
    right: NcPoly


def confluence_check(rs: RewriteSystem) -> list:
    """Unresolved overlaps ``abc`` (``ab`` and ``bc`` both leads); empty iff confluent."""
    bad = []
    for a, b in rs.leads:
        for b2, c in rs.leads:
            if b2 != b:
                continue
            w = (a, b, c)
            left = normal_form(rs, NcPoly(rs.gens, rs.step(w, 0)))
            right = normal_form(rs, NcPoly(rs.gens, rs.step(w, 1)))
            if left != right:
                bad.append(Overlap(w, left, right))
    return bad


def overlap_resolutions(rs: RewriteSystem) -> list:
    """Every overlap with both reduction results, resolved or not."""
    out = []
    for a, b in rs.leads:
        for b2, c in rs.leads:
            if b2 == b:
                w = (a, b, c)
                out.append(Overlap(
                    w,
                    normal_form(rs, NcPoly(rs.gens, rs.step(w, 0))),
                    normal_form(rs, NcPoly(rs.gens, rs.step(w, 1))),
                ))
    return out


def rewrite_system_from_presentation(pres: QuadraticPresentation) -> RewriteSystem:
    """Rules read off the reduced echelon form of the degree-2 relations."""
    words = tensor_words(pres.n, 2)
    s = relation_span(pres, 2)
    rules = []
    for p in s.pivot_cols:
        row = s._pivot_rows[p]
        rhs = {words[c]: -a for c, a in row.items() if c != p}
        rules.append(RewriteRule(words[p], NcPoly(pres.gens, rhs)))
    return RewriteSystem(pres.gens, rules)


def rules_from_text(gens: GenSet, spec: dict) -> RewriteSystem:
    """``{"zy": "y*z + 2 x*z", ...}`` -> rewrite system."""
    rules = [RewriteRule(gens.word(k), NcPoly.parse(gens, v)) for k, v in spec.items()]
    return RewriteSystem(gens, rules)


def multiplication_matrix_rank(alg: QuotientAlgebra, d: int, g: int, side: str = "right") -> int:
    """Rank of ``b -> b g`` (or ``g b``) from ``B_d`` to ``B_{d+1}``."""
    src, dst = alg.slice(d), alg.slice(d + 1)
    vecs = []
    for w in src.coset_basis:
        word = w + (g,) if side == "right" else (g,) + w
        vecs.append(dst.word_coords(word))
    return span(vecs, dst.dim).dim
