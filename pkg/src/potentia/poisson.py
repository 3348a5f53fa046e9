"""The semiclassical side: ``T = Q[x, y, z]`` with a Jacobian Poisson bracket.

``{F, G} = grad(phi) . (grad F x grad G)``.  One-forms ``F1 dx + F2 dy + F3 dz``
and two-forms ``G1 dy^dz + G2 dz^dx + G3 dx^dy`` are both stored as triples;
three-forms and functions as a single polynomial.  A p-chain whose coefficients
have degree ``m`` sits in internal degree ``m + p``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .exactla import RatMatrix, Subspace, format_rat, kernel_basis, parse_rat, rank, span
from .homology import GradedComplexSlice, HomologyTable

VARS = ("x", "y", "z")


class CPoly:
    """Commutative polynomial: exponent triple -> Fraction."""

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        acc: dict = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for e, c in items:
            e = tuple(e)
            if len(e) != 3 or any(k < 0 for k in e):
                raise ValueError(f"bad exponent {e}")
            s = acc.get(e, 0) + parse_rat(c)
            if s:
                acc[e] = s
            else:
                acc.pop(e, None)
        self.terms = acc

    @classmethod
    def var(cls, name) -> "CPoly":
        i = VARS.index(name) if isinstance(name, str) else name
        e = [0, 0, 0]
        e[i] = 1
        return cls({tuple(e): 1})

    @classmethod
    def const(cls, c) -> "CPoly":
        return cls({(0, 0, 0): c})

    @classmethod
    def mono(cls, i: int, j: int, k: int, c=1) -> "CPoly":
        if min(i, j, k) < 0:
            return cls()
        return cls({(i, j, k): c})

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set:
        return {sum(e) for e in self.terms}

    def degree(self) -> int:
        ds = self.degrees()
        if len(ds) != 1:
            raise ValueError("degree of a zero or inhomogeneous polynomial")
        return next(iter(ds))

    def __add__(self, other):
        other = other if isinstance(other, CPoly) else CPoly.const(other)
        return CPoly(list(self.terms.items()) + list(other.terms.items()))

    __radd__ = __add__

    def __neg__(self):
        return CPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = other if isinstance(other, CPoly) else CPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, CPoly):
            c = parse_rat(other)
            return CPoly({e: c * a for e, a in self.terms.items()})
        out: dict = {}
        for e, a in self.terms.items():
            for f, b in other.terms.items():
                g = (e[0] + f[0], e[1] + f[1], e[2] + f[2])
                s = out.get(g, 0) + a * b
                if s:
                    out[g] = s
                else:
                    out.pop(g)
        return CPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = CPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def diff(self, i: int) -> "CPoly":
        out = []
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out.append((tuple(f), c * e[i]))
        return CPoly(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CPoly):
            if isinstance(other, (int, Fraction)):
                other = CPoly.const(other)
            else:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, (e, c) in enumerate(sorted(self.terms.items(), key=lambda t: (-sum(t[0]), t[0]), reverse=False)):
            mono = "*".join(
                v if n == 1 else f"{v}^{n}" for v, n in zip(VARS, e) if n
            )
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = format_rat(a)
            elif a == 1:
                body = mono
            else:
                body = f"{format_rat(a)} {mono}"
            if k == 0:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"CPoly({self})"


def parse_cpoly(text: str) -> CPoly:
    """Parse ``"-(x^2)*z"``, ``"1/2*x*y*z"`` and the like (via sympy)."""
    import sympy

    syms = sympy.symbols("x y z")
    expr = sympy.sympify(text.replace("^", "**").replace("−", "-"), locals=dict(zip(VARS, syms)))
    poly = sympy.Poly(sympy.expand(expr), *syms, domain="QQ")
    return CPoly(
        (tuple(int(k) for k in e), Fraction(int(c.p), int(c.q))) for e, c in poly.terms()
    )


Vec3 = tuple  # (CPoly, CPoly, CPoly)


def vec(a=0, b=0, c=0) -> Vec3:
    return tuple(v if isinstance(v, CPoly) else CPoly.const(v) for v in (a, b, c))


def vzero() -> Vec3:
    return (CPoly(), CPoly(), CPoly())


def vadd(u: Vec3, v: Vec3) -> Vec3:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Vec3, v: Vec3) -> Vec3:
    return tuple(a - b for a, b in zip(u, v))


def vscale(F, v: Vec3) -> Vec3:
    return tuple(a * F for a in v)


def vis_zero(v: Vec3) -> bool:
    return all(a.is_zero() for a in v)


def grad(F: CPoly) -> Vec3:
    return (F.diff(0), F.diff(1), F.diff(2))


def dot(u: Vec3, v: Vec3) -> CPoly:
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def cross(u: Vec3, v: Vec3) -> Vec3:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def curl(F: Vec3) -> Vec3:
    return (
        F[2].diff(1) - F[1].diff(2),
        F[0].diff(2) - F[2].diff(0),
        F[1].diff(0) - F[0].diff(1),
    )


def div(F: Vec3) -> CPoly:
    return F[0].diff(0) + F[1].diff(1) + F[2].diff(2)


def monomials(d: int) -> list:
    """Exponent triples of degree ``d``, decreasing lexicographically."""
    if d < 0:
        return []
    return sorted(((i, j, d - i - j) for i in range(d + 1) for j in range(d + 1 - i)), reverse=True)


def jordan_phi() -> CPoly:
    return CPoly({(2, 0, 1): -1})


def quantum_phi(q) -> CPoly:
    q = parse_rat(q)
    return CPoly({(1, 1, 1): 1 - 1 / q})


class PoissonPotential:
    """Bracket ``{x,y} = phi_z, {y,z} = phi_x, {z,x} = phi_y`` from ``phi``."""

    def __init__(self, phi: CPoly):
        if not isinstance(phi, CPoly):
            phi = parse_cpoly(phi) if isinstance(phi, str) else CPoly(phi)
        if len(phi.degrees()) > 1:
            raise ValueError("the potential must be homogeneous")
        self.phi = phi
        self.gphi = grad(phi)
        self._mats: dict = {}
        if not jacobi_check(self):
            raise ValueError("bracket fails the Jacobi identity")

    @property
    def weight(self) -> int:
        """Degree of ``phi``; the complexes are graded when it is 3."""
        return self.phi.degree() if not self.phi.is_zero() else 3

    def bracket(self, F: CPoly, G: CPoly) -> CPoly:
        return dot(self.gphi, cross(grad(F), grad(G)))

    def delta(self, p: int, chain):
        """Brylinski differential ``Omega^p -> Omega^{p-1}``."""
        g = self.gphi
        if p == 1:
            return dot(g, curl(chain))
        if p == 2:
            return vadd(vscale(CPoly.const(-1), grad(dot(chain, g))), vscale(div(chain), g))
        if p == 3:
            return vscale(CPoly.const(-1), cross(grad(chain), g))
        raise ValueError("p must be 1, 2 or 3")

    def wedge_dphi(self, p: int, form):
        """``form ^ dphi``: ``Omega^p -> Omega^{p+1}``."""
        g = self.gphi
        if p == 0:
            return vscale(form, g)
        if p == 1:
            return cross(form, g)
        if p == 2:
            return dot(form, g)
        raise ValueError("p must be 0, 1 or 2")

    # -- coordinates ---------------------------------------------------------

    @staticmethod
    def coeff_degree(p: int, d: int) -> int:
        return d - p

    @staticmethod
    def dim(p: int, d: int) -> int:
        m = len(monomials(d - p))
        return m if p in (0, 3) else 3 * m if p in (1, 2) else 0

    @staticmethod
    def encode(p: int, d: int, chain) -> dict:
        monos = monomials(d - p)
        idx = {e: i for i, e in enumerate(monos)}
        parts = [chain] if p in (0, 3) else list(chain)
        out = {}
        for b, poly in enumerate(parts):
            for e, c in poly.terms.items():
                if e not in idx:
                    raise ValueError(f"term {e} is not in internal degree {d}")
                out[b * len(monos) + idx[e]] = c
        return out

    @staticmethod
    def decode(p: int, d: int, vecd: dict):
        monos = monomials(d - p)
        m = len(monos)
        nb = 1 if p in (0, 3) else 3
        parts = [dict() for _ in range(nb)]
        for k, c in vecd.items():
            b, i = divmod(k, m)
            parts[b][monos[i]] = c
        polys = [CPoly(t) for t in parts]
        return polys[0] if nb == 1 else tuple(polys)

    @staticmethod
    def basis(p: int, d: int) -> list:
        monos = monomials(d - p)
        if p in (0, 3):
            return [CPoly({e: 1}) for e in monos]
        out = []
        for b in range(3):
            for e in monos:
                v = [CPoly(), CPoly(), CPoly()]
                v[b] = CPoly({e: 1})
                out.append(tuple(v))
        return out

    def delta_matrix(self, p: int, d: int) -> RatMatrix:
        key = ("delta", p, d)
        if key not in self._mats:
            cols = [self.encode(p - 1, d, self.delta(p, b)) for b in self.basis(p, d)]
            self._mats[key] = _from_cols(cols, self.dim(p - 1, d), self.dim(p, d))
        return self._mats[key]

    def wedge_matrix(self, p: int, d: int) -> RatMatrix:
        """``^dphi`` from ``Omega^p`` in degree ``d`` to ``Omega^{p+1}`` in degree ``d + w``."""
        key = ("wedge", p, d)
        w = self.weight
        if key not in self._mats:
            cols = [self.encode(p + 1, d + w, self.wedge_dphi(p, b)) for b in self.basis(p, d)]
            self._mats[key] = _from_cols(cols, self.dim(p + 1, d + w), self.dim(p, d))
        return self._mats[key]

    def slice(self, d: int) -> GradedComplexSlice:
        dims = {p: self.dim(p, d) for p in range(4)}
        diffs = {p: self.delta_matrix(p, d) for p in (1, 2, 3)}
        return GradedComplexSlice(d, dims, diffs)


def _from_cols(cols: list, rows: int, ncols: int) -> RatMatrix:
    if not cols:
        return RatMatrix(rows, ncols)
    return RatMatrix.from_rows(cols, rows).transpose()


def jacobi_check(pp: PoissonPotential) -> bool:
    x, y, z = (CPoly.var(v) for v in VARS)
    b = pp.bracket
    total = b(x, b(y, z)) + b(y, b(z, x)) + b(z, b(x, y))
    return total.is_zero()


def hp_table(pp: PoissonPotential, D: int) -> HomologyTable:
    table = HomologyTable("HP")
    for d in range(D + 1):
        s = pp.slice(d)
        for p in range(4):
            table[p, d] = s.homology_dim(p)
    return table


def hphi_table(pp: PoissonPotential, D: int) -> HomologyTable:
    """``H^phi_p`` in internal degree ``d``: cocycles modulo ``^dphi`` of degree ``d - w``."""
    table = HomologyTable("Hphi")
    w = pp.weight
    for d in range(D + 1):
        for p in range(4):
            out = rank(pp.wedge_matrix(p, d)) if p < 3 else 0
            into = rank(pp.wedge_matrix(p - 1, d - w)) if p > 0 and d - w >= 0 else 0
            table[p, d] = pp.dim(p, d) - out - into
    return table


def delta_square_failures(pp: PoissonPotential, D: int) -> list:
    return [d for d in range(D + 1) if not pp.slice(d).square_zero()]


def wedge_square_failures(pp: PoissonPotential, D: int) -> list:
    bad = []
    w = pp.weight
    for d in range(D + 1):
        for p in (0, 1):
            if not (pp.wedge_matrix(p + 1, d + w) @ pp.wedge_matrix(p, d)).is_zero():
                bad.append((p, d))
    return bad


# --- the explicit bases for phi = -x^2 z ---------------------------------------


@dataclass
class FamilyElement:
    family: str
    params: tuple
    p: int
    d: int
    value: object
    extra: bool = False  # not in the literal list, needed for the count

    @property
    def label(self) -> str:
        args = ",".join(str(a) for a in self.params)
        return f"{self.family}_{{{args}}}"


def _m(i, j, k, c=1) -> CPoly:
    return CPoly.mono(i, j, k, c)


def hp_family(p: int, D: int, include_extra: bool = True) -> list:
    """Basis cycles of ``HP_p(T)`` for ``phi = -x^2 z`` with internal degree ``<= D``.

    The literal lists start the ``z^r (z^2, 0, -xz)`` and ``z^{t+1} (0, 1, 0)``
    families at ``r = t = 0``; the computed homology also contains their
    ``-1`` members ``(z, 0, -x)`` and ``(0, 1, 0)``, both in degree 2.  Those
    are added, flagged ``extra``, when ``include_extra`` is set.
    """
    out = []
    if p == 0:
        for a in range(D):
            out.append(FamilyElement("xy", (a,), 0, a + 1, _m(1, a, 0)))
        for a in range(D + 1):
            for b in range(D + 1 - a):
                out.append(FamilyElement("yz", (a, b), 0, a + b, _m(0, a, b)))
    elif p == 1:
        for k in range((D - 3) // 3 + 1 if D >= 3 else 0):
            out.append(FamilyElement("A", (k,), 1, 3 * k + 3, (_m(2 * k + 1, 0, k + 1), CPoly(), _m(2 * k + 2, 0, k, -1))))
        rmin = -1 if include_extra else 0
        for r in range(rmin, D - 2):
            out.append(FamilyElement("B", (r,), 1, r + 3, (_m(0, 0, r + 2), CPoly(), _m(1, 0, r + 1, -1)), extra=r < 0))
        for n in range(D - 2):
            for k in range(1, n + 2):
                out.append(FamilyElement("U", (n, k), 1, n + 3, u_vector(n, k)))
        for m in range(1, D + 1):
            for s in range(m + 1):
                out.append(FamilyElement("V", (m, s), 1, m, (CPoly(), _m(0, s - 1, m - s, s), _m(0, s, m - 1 - s, m - s))))
        for q in range(D):
            out.append(FamilyElement("W", (q,), 1, q + 1, (_m(0, q, 0), _m(1, q - 1, 0, q), CPoly())))
    elif p == 2:
        for r in range((D - 3) // 3 + 1 if D >= 3 else 0):
            c = _m(2 * r, 0, r)
            out.append(FamilyElement("C", (r,), 2, 3 * r + 3, (c * _m(1, 0, 0), c * _m(0, 1, 0), c * _m(0, 0, 1))))
        for s in range((D - 3) // 3 + 1 if D >= 3 else 0):
            out.append(FamilyElement("D", (s,), 2, 3 * s + 3, (CPoly(), _m(2 * s + 1, 0, s), CPoly())))
        tmin = -1 if include_extra else 0
        for t in range(tmin, D - 2):
            out.append(FamilyElement("E", (t,), 2, t + 3, (CPoly(), _m(0, 0, t + 1), CPoly()), extra=t < 0))
        for n in range(D - 2):
            for k in range(n + 1):
                out.append(FamilyElement("O", (n, k), 2, n + 3, o_vector(n, k)))
    elif p == 3:
        for k in range((D - 3) // 3 + 1 if D >= 3 else 0):
            out.append(FamilyElement("top", (k,), 3, 3 * k + 3, _m(2 * k, 0, k)))
    return [e for e in out if e.d <= D]


def u_vector(n: int, k: int) -> Vec3:
    return (
        _m(0, k, n + 2 - k, 2 * n + 3),
        _m(1, k - 1, n + 2 - k, -3 * k),
        _m(1, k, n + 1 - k, -2 * n + 3 * (k - 1)),
    )


def o_vector(n: int, k: int) -> Vec3:
    return (
        _m(1, k, n - k, k + 1),
        _m(0, k + 1, n - k, 2 * (n - k) + 1),
        _m(0, k, n - k + 1, -2 * (k + 1)),
    )


def hphi_family(p: int, D: int) -> list:
    """Bases of ``H^phi_p`` for ``phi = -x^2 z`` with internal degree ``<= D``."""
    out = []

    def yz(e):
        return [(a, e - a) for a in range(e + 1)]

    if p == 1:
        for e in range(D - 1):
            for a, b in yz(e):
                m = _m(0, a, b)
                out.append(FamilyElement("h1", (a, b), 1, e + 2, (m * 2 * _m(0, 0, 1), CPoly(), m * _m(1, 0, 0))))
    elif p == 2:
        for e in range(D - 2):
            for a, b in yz(e):
                m = _m(0, a, b)
                out.append(FamilyElement("h2a", (a, b), 2, e + 3, (m * _m(1, 0, 0, -1), CPoly(), m * 2 * _m(0, 0, 1))))
        for a in range(D - 2):
            out.append(FamilyElement("h2b", (a,), 2, a + 3, (CPoly(), _m(1, a, 0), CPoly())))
        for e in range(D - 1):
            for a, b in yz(e):
                out.append(FamilyElement("h2c", (a, b), 2, e + 2, (CPoly(), _m(0, a, b), CPoly())))
    elif p == 3:
        for a in range(D - 3):
            out.append(FamilyElement("h3a", (a,), 3, a + 4, _m(1, a, 0)))
        for e in range(D - 2):
            for a, b in yz(e):
                out.append(FamilyElement("h3b", (a, b), 3, e + 3, _m(0, a, b)))
    return [e for e in out if e.d <= D]


def curl_free_family(D: int, include_extra: bool = True) -> list:
    """Representatives of ``ker(F -> grad phi . curl F) / (grad G + H grad phi)``.

    Indexed by the one-form internal degree.  As for ``HP_1``, the constant
    member ``(z, 0, -x)`` of the ``C[z]`` family is missing from the literal list.
    """
    return [e for e in hp_family(1, D, include_extra) if e.family in ("A", "B", "U")]


@dataclass
class FamilyReport:
    family: str
    per_degree: dict = field(default_factory=dict)  # d -> (listed, computed, independent rank)
    failures: list = field(default_factory=list)
    extras: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


FAMILIES = ("HP0", "HP1", "HP2", "HP3", "Hphi1", "Hphi2", "Hphi3", "CurlFree")


def verify_family(pp: PoissonPotential, family: str, D: int, include_extra: bool = True) -> FamilyReport:
    """Cycle condition, independence in homology and count per degree."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    rep = FamilyReport(family)
    w = pp.weight
    if family.startswith("HP"):
        p = int(family[2])
        elems = hp_family(p, D, include_extra)
    elif family.startswith("Hphi"):
        p = int(family[4])
        elems = hphi_family(p, D)
    else:
        p = 1
        elems = curl_free_family(D, include_extra)
    rep.extras = [e.label for e in elems if e.extra]
    by_deg: dict = {}
    for e in elems:
        by_deg.setdefault(e.d, []).append(e)
    for d in range(D + 1):
        listed = by_deg.get(d, [])
        dim_p = pp.dim(p, d)
        if family.startswith("HP"):
            s = pp.slice(d)
            computed = s.homology_dim(p)
            base = s.boundaries(p) if p < 3 else Subspace(dim_p)
        elif family.startswith("Hphi"):
            out = rank(pp.wedge_matrix(p, d)) if p < 3 else 0
            if p > 0 and d - w >= 0:
                m = pp.wedge_matrix(p - 1, d - w)
                base = span(m.transpose().row_dicts(), dim_p)
            else:
                base = Subspace(dim_p)
            computed = dim_p - out - base.dim
        else:
            ker = kernel_basis(pp.delta_matrix(1, d))
            gens = [pp.encode(1, d, grad(CPoly({e: 1}))) for e in monomials(d)]
            gens += [pp.encode(1, d, vscale(CPoly({e: 1}), pp.gphi)) for e in monomials(d - w)]
            base = span(gens, dim_p)
            computed = ker.dim - base.dim
        vecs = []
        for e in listed:
            if family.startswith("Hphi"):
                img = pp.wedge_dphi(p, e.value) if p < 3 else None
                cyc = img is None or (img.is_zero() if p == 2 else vis_zero(img))
            elif p == 0:
                cyc = True
            else:
                img = pp.delta(p, e.value)
                cyc = img.is_zero() if p == 1 else vis_zero(img)
            if not cyc:
                rep.failures.append(f"{e.label} (degree {d}) is not a cycle")
            vecs.append(pp.encode(p, d, e.value))
        s = base.copy()
        indep = sum(1 for v in vecs if s.add(v))
        rep.per_degree[d] = (len(listed), computed, indep)
        if indep != len(listed):
            rep.failures.append(f"degree {d}: listed classes are dependent ({indep} of {len(listed)})")
        if len(listed) != computed:
            rep.failures.append(f"degree {d}: listed {len(listed)}, computed {computed}")
    return rep


def casimir_kernel_check(pp: PoissonPotential, D: int) -> list:
    """Degrees where ``ker(K -> grad K x grad phi)`` is not the ``C[phi]`` slice."""
    bad = []
    w = pp.weight
    for e in range(D + 1):
        cols = [_encode_vec(e + w - 2, cross(grad(CPoly({m: 1})), pp.gphi)) for m in monomials(e)]
        M = _from_cols(cols, 3 * len(monomials(e + w - 2)), len(monomials(e)))
        ker = kernel_basis(M)
        expected = Subspace(len(monomials(e)))
        if e % w == 0:
            idx = {m: i for i, m in enumerate(monomials(e))}
            expected.add({idx[m]: c for m, c in (pp.phi ** (e // w)).terms.items()})
        if ker != expected:
            bad.append(e)
    return bad


def _encode_vec(m: int, v: Vec3) -> dict:
    monos = monomials(m)
    idx = {e: i for i, e in enumerate(monos)}
    out = {}
    for b, poly in enumerate(v):
        for e, c in poly.terms.items():
            out[b * len(monos) + idx[e]] = c
    return out


def family_counts(elems: list, D: int) -> list:
    counts = [0] * (D + 1)
    for e in elems:
        counts[e.d] += 1
    return counts


def hp_count_table(D: int, include_extra: bool = True) -> HomologyTable:
    """Per-degree sizes of the explicit ``HP_p`` bases (``phi = -x^2 z``)."""
    t = HomologyTable("HP-basis")
    for p in range(4):
        c = family_counts(hp_family(p, D, include_extra), D)
        for d in range(D + 1):
            t[p, d] = c[d]
    return t


def hphi_count_table(D: int) -> HomologyTable:
    t = HomologyTable("Hphi-basis")
    for p in range(4):
        c = family_counts(hphi_family(p, D), D) if p else [0] * (D + 1)
        for d in range(D + 1):
            t[p, d] = c[d]
    return t


def binomial_factor(k: int, l: int) -> Fraction:
    """``k! / l!``."""
    return Fraction(factorial(k), factorial(l))
