"""Free associative algebra over Q and its noncommutative calculus.

Words are tuples of generator indices.  An :class:`NcPoly` is a sparse map
word -> Fraction tied to a :class:`GenSet`.  Besides the ring operations this
module provides cyclic sums, cyclic derivatives, the ordinary (tensor valued)
partial derivatives, and the two identities every potential ``w = f z``
satisfies: the Euler relation and the symmetry of the Hessian.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import groupby
from typing import Iterable, Mapping

from .exactla import format_rat, parse_rat

Word = tuple


@dataclass(frozen=True)
class GenSet:
    names: tuple

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(set(names)) != len(names):
            raise ValueError(f"generator names must be distinct: {names}")
        if "z" in names and names[-1] != "z":
            raise ValueError("z, when present, must be the last generator")

    @classmethod
    def xyz(cls) -> "GenSet":
        return cls(("x", "y", "z"))

    @classmethod
    def for_potential(cls, n: int) -> "GenSet":
        """``x, y, z`` for n = 2, ``x, z`` for n = 1, else ``x1..xn, z``."""
        if n == 1:
            return cls(("x", "z"))
        if n == 2:
            return cls(("x", "y", "z"))
        return cls(tuple(f"x{i}" for i in range(1, n + 1)) + ("z",))

    def __len__(self) -> int:
        return len(self.names)

    def index(self, g) -> int:
        if isinstance(g, int):
            if not 0 <= g < len(self.names):
                raise ValueError(f"unknown generator index {g}")
            return g
        try:
            return self.names.index(g)
        except ValueError:
            raise ValueError(f"unknown generator {g!r}") from None

    def word(self, text: str) -> Word:
        """``"xyz"`` or ``"x*y*z"`` or ``"x1*x2"`` -> index tuple."""
        if "*" in text or any(len(n) > 1 for n in self.names):
            parts = [p for p in text.split("*") if p]
        else:
            parts = list(text)
        return tuple(self.index(p) for p in parts)


def word_key(w: Word) -> tuple:
    """Deglex key: shorter first, then lexicographic on indices."""
    return (len(w), w)


def render_word(w: Word, gens: GenSet) -> str:
    if not w:
        return "1"
    parts = []
    for g, run in groupby(w):
        k = len(list(run))
        name = gens.names[g]
        parts.append(name if k == 1 else f"{name}^{k}")
    return "*".join(parts)


class NcPoly:
    """Element of the free algebra ``Q<gens>``."""

    __slots__ = ("gens", "terms")

    def __init__(self, gens: GenSet, terms: Mapping | Iterable = ()):
        self.gens = gens
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        n = len(gens)
        for w, c in items:
            w = tuple(w)
            if any(not 0 <= g < n for g in w):
                raise ValueError(f"word {w} uses a generator outside {gens.names}")
            c = parse_rat(c)
            s = acc.get(w, 0) + c
            if s:
                acc[w] = s
            else:
                acc.pop(w, None)
        self.terms = acc

    # construction helpers
    @classmethod
    def gen(cls, gens: GenSet, g) -> "NcPoly":
        return cls(gens, {(gens.index(g),): 1})

    @classmethod
    def one(cls, gens: GenSet) -> "NcPoly":
        return cls(gens, {(): 1})

    @classmethod
    def monomial(cls, gens: GenSet, w, c=1) -> "NcPoly":
        if isinstance(w, str):
            w = gens.word(w)
        return cls(gens, {tuple(w): c})

    @classmethod
    def parse(cls, gens: GenSet, text: str) -> "NcPoly":
        """Parse sums like ``"x*y*z - 2 x^2*z + 1/2 z*x"``."""
        s = text.replace("−", "-").replace(" ", "")
        if not s:
            return cls(gens)
        terms = []
        i = 0
        chunks = []
        start = 0
        for i, ch in enumerate(s):
            if ch in "+-" and i > start:
                chunks.append(s[start:i])
                start = i
        chunks.append(s[start:])
        for ch in chunks:
            sign = -1 if ch.startswith("-") else 1
            ch = ch.lstrip("+-")
            coef = Fraction(1)
            j = 0
            while j < len(ch) and (ch[j].isdigit() or ch[j] == "/"):
                j += 1
            if j:
                coef = Fraction(ch[:j])
                ch = ch[j:].lstrip("*")
            word: list = []
            if ch:
                for factor in ch.split("*"):
                    name, _, power = factor.partition("^")
                    word.extend([gens.index(name)] * (int(power) if power else 1))
            terms.append((tuple(word), sign * coef))
        return cls(gens, terms)

    # queries
    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set:
        return {len(w) for w in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int:
        ds = self.degrees()
        if len(ds) != 1:
            raise ValueError("degree of a zero or non-homogeneous polynomial")
        return next(iter(ds))

    def coefficient(self, w) -> Fraction:
        if isinstance(w, str):
            w = self.gens.word(w)
        return self.terms.get(tuple(w), Fraction(0))

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: word_key(t[0]))

    # arithmetic
    def _same(self, other: "NcPoly") -> None:
        if not isinstance(other, NcPoly):
            raise TypeError(f"expected NcPoly, got {type(other).__name__}")
        if other.gens != self.gens:
            raise ValueError("polynomials over different generator sets")

    def __add__(self, other):
        if not isinstance(other, NcPoly):
            other = NcPoly(self.gens, {(): other})
        self._same(other)
        return NcPoly(self.gens, list(self.terms.items()) + list(other.terms.items()))

    __radd__ = __add__

    def __neg__(self):
        return NcPoly(self.gens, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, NcPoly):
            other = NcPoly(self.gens, {(): other})
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "NcPoly":
        c = parse_rat(c)
        return NcPoly(self.gens, {w: c * a for w, a in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, NcPoly):
            return self.scale(other)
        return nc_mul(self, other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        out = NcPoly.one(self.gens)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = NcPoly(self.gens, {(): other})
        if not isinstance(other, NcPoly):
            return NotImplemented
        return self.gens == other.gens and self.terms == other.terms

    def __hash__(self):
        return hash((self.gens, frozenset(self.terms.items())))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for k, (w, c) in enumerate(self.sorted_terms()):
            neg = c < 0
            a = -c if neg else c
            mono = render_word(w, self.gens)
            if a == 1:
                body = mono
            elif not w:
                body = format_rat(a)
            else:
                body = f"{format_rat(a)} {mono}"
            if k == 0:
                out.append(f"-{body}" if neg else body)
            else:
                out.append(f" - {body}" if neg else f" + {body}")
        return "".join(out)

    def __repr__(self) -> str:
        return f"NcPoly({self})"


class NcTensor:
    """Element of ``F (x) F``, stored as (left word, right word) -> coefficient."""

    __slots__ = ("gens", "terms")

    def __init__(self, gens: GenSet, terms: Mapping | Iterable = ()):
        self.gens = gens
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for (u, v), c in items:
            key = (tuple(u), tuple(v))
            s = acc.get(key, 0) + Fraction(c)
            if s:
                acc[key] = s
            else:
                acc.pop(key, None)
        self.terms = acc

    def flip(self) -> "NcTensor":
        return NcTensor(self.gens, {(v, u): c for (u, v), c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "NcTensor") -> "NcTensor":
        return NcTensor(self.gens, list(self.terms.items()) + list(other.terms.items()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, NcTensor):
            return NotImplemented
        return self.gens == other.gens and self.terms == other.terms

    def __repr__(self) -> str:
        parts = [
            f"{format_rat(c)}*({render_word(u, self.gens)} (x) {render_word(v, self.gens)})"
            for (u, v), c in sorted(self.terms.items())
        ]
        return "NcTensor(" + " + ".join(parts) + ")"


def nc_mul(p: NcPoly, q: NcPoly) -> NcPoly:
    p._same(q)
    acc: dict = {}
    for u, a in p.terms.items():
        for v, b in q.terms.items():
            w = u + v
            s = acc.get(w, 0) + a * b
            if s:
                acc[w] = s
            else:
                acc.pop(w)
    return NcPoly(p.gens, acc)


def _require_homogeneous(a: NcPoly, what: str) -> None:
    if not a.is_homogeneous():
        raise ValueError(f"{what} needs a homogeneous polynomial")


def cyclic_sum(a: NcPoly) -> NcPoly:
    """Sum of all cyclic rotations of every monomial (``c(xyz) = xyz+yzx+zxy``)."""
    _require_homogeneous(a, "cyclic_sum")
    terms = []
    for w, c in a.terms.items():
        for i in range(len(w)):
            terms.append((w[i:] + w[:i], c))
        if not w:
            terms.append(((), c))
    return NcPoly(a.gens, terms)


def cyclic_derivative(w: NcPoly, g) -> NcPoly:
    """Each occurrence ``u g v`` of ``g`` contributes ``v u``."""
    _require_homogeneous(w, "cyclic_derivative")
    gi = w.gens.index(g)
    terms = []
    for word, c in w.terms.items():
        for i, h in enumerate(word):
            if h == gi:
                terms.append((word[i + 1:] + word[:i], c))
    return NcPoly(w.gens, terms)


def partial_derivative(a: NcPoly, g) -> NcTensor:
    """``sum over a = u g v`` of ``u (x) v``."""
    gi = a.gens.index(g)
    terms = []
    for word, c in a.terms.items():
        for i, h in enumerate(word):
            if h == gi:
                terms.append(((word[:i], word[i + 1:]), c))
    return NcTensor(a.gens, terms)


def potential_from_matrix(M, gens: GenSet | None = None) -> tuple:
    """``(f, w)`` with ``f = sum M[i][j] x_i x_j`` and ``w = f z``."""
    n = len(M)
    if gens is None:
        gens = GenSet.for_potential(n)
    if len(gens) != n + 1:
        raise ValueError("generator set must have n + 1 generators")
    f = NcPoly(gens, (((i, j), parse_rat(M[i][j])) for i in range(n) for j in range(n)))
    w = f * NcPoly.gen(gens, n)
    return f, w


def split_potential(w: NcPoly) -> NcPoly:
    """Recover ``f`` from ``w = f z`` (z the last generator)."""
    z = len(w.gens) - 1
    if w.is_zero() or w.degree() != 3:
        raise ValueError("malformed potential: expected a nonzero cubic w = f z")
    terms = []
    for word, c in w.terms.items():
        if word[-1] != z or z in word[:-1]:
            raise ValueError("malformed potential: not of the form f z with f free of z")
        terms.append((word[:-1], c))
    return NcPoly(w.gens, terms)


def euler_check(w: NcPoly) -> bool:
    """Both sides of the noncommutative Euler relation equal ``c(w)``."""
    f = split_potential(w)
    gens = w.gens
    z = NcPoly.gen(gens, len(gens) - 1)
    cw = cyclic_sum(w)
    left = f * z
    right = z * f
    for i in range(len(gens) - 1):
        xi = NcPoly.gen(gens, i)
        d = cyclic_derivative(w, i)
        left = left + d * xi
        right = right + xi * d
    return left == cw and right == cw


def second_derivative(w: NcPoly, i, j) -> NcTensor:
    """``(d/dx_i) o (cyclic d_{x_j})`` applied to ``w``."""
    return partial_derivative(cyclic_derivative(w, j), i)


def hessian_symmetry_check(w: NcPoly) -> bool:
    _require_homogeneous(w, "hessian_symmetry_check")
    n = len(w.gens)
    for i in range(n):
        for j in range(i, n):
            if second_derivative(w, i, j).flip() != second_derivative(w, j, i):
                return False
    return True


def substitute(p: NcPoly, images: list, gens: GenSet | None = None) -> NcPoly:
    """Algebra map sending generator ``i`` to ``images[i]``."""
    gens = gens or images[0].gens
    out = NcPoly(gens)
    one = NcPoly.one(gens)
    for word, c in p.terms.items():
        t = one
        for g in word:
            t = t * images[g]
        out = out + t.scale(c)
    return out
