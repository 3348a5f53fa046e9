"""Degree-sliced chain complexes and their homology tables."""

from __future__ import annotations

from dataclasses import dataclass, field

from .exactla import RatMatrix, Subspace, kernel_basis, rank, span


@dataclass
class GradedComplexSlice:
    """One internal-degree slice of a chain complex.

    ``dims[p]`` is the dimension of the chain space in homological index ``p``
    and ``diffs[p]`` the matrix of the differential ``C_p -> C_{p-1}`` (rows
    index ``C_{p-1}``, columns index ``C_p``).  Missing entries mean zero maps.
    Cohomological complexes are stored with ``diffs[p]`` mapping ``C_p`` to
    ``C_{p+1}`` and ``cohomological=True``.
    """

    degree: int
    dims: dict
    diffs: dict
    cohomological: bool = False
    _ranks: dict = field(default_factory=dict, repr=False)

    def target(self, p: int) -> int:
        return p + 1 if self.cohomological else p - 1

    def diff(self, p: int) -> RatMatrix:
        m = self.diffs.get(p)
        if m is None:
            return RatMatrix(self.dims.get(self.target(p), 0), self.dims.get(p, 0))
        return m

    def rank(self, p: int) -> int:
        if p not in self._ranks:
            m = self.diffs.get(p)
            self._ranks[p] = 0 if m is None else rank(m)
        return self._ranks[p]

    def homology_dim(self, p: int, incoming: "GradedComplexSlice | None" = None) -> int:
        """``dim ker d_p - dim im d_into_p``.

        For complexes whose differential shifts internal degree the incoming
        map lives on another slice; pass it as ``incoming``.
        """
        src = incoming if incoming is not None else self
        into = p - 1 if self.cohomological else p + 1
        return self.dims.get(p, 0) - self.rank(p) - src.rank(into)

    def square_zero(self) -> bool:
        for p in self.diffs:
            q = self.target(p)
            if q in self.diffs:
                if not (self.diffs[q] @ self.diffs[p]).is_zero():
                    return False
        return True

    def cycles(self, p: int) -> Subspace:
        return kernel_basis(self.diff(p))

    def boundaries(self, p: int, incoming: "GradedComplexSlice | None" = None) -> Subspace:
        src = incoming if incoming is not None else self
        into = p - 1 if self.cohomological else p + 1
        m = src.diffs.get(into)
        if m is None:
            return Subspace(self.dims.get(p, 0))
        return span(m.transpose().row_dicts(), self.dims.get(p, 0))


class HomologyTable:
    """Map ``(p, d) -> dim`` with optional witness bases."""

    def __init__(self, name: str = ""):
        self.name = name
        self.dims: dict = {}
        self.witnesses: dict = {}

    def __setitem__(self, key, value: int) -> None:
        self.dims[key] = int(value)

    def __getitem__(self, key) -> int:
        return self.dims.get(key, 0)

    def __contains__(self, key) -> bool:
        return key in self.dims

    def degrees(self) -> list:
        return sorted({d for _, d in self.dims})

    def row(self, p: int, degrees) -> list:
        return [self[p, d] for d in degrees]

    def as_rows(self) -> list:
        return [[p, d, n] for (p, d), n in sorted(self.dims.items())]

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomologyTable):
            return NotImplemented
        keys = set(self.dims) | set(other.dims)
        return all(self[k] == other[k] for k in keys)

    def __repr__(self) -> str:
        return f"HomologyTable({self.name!r}, {len(self.dims)} entries)"


def independent_modulo(vectors, base: Subspace) -> int:
    """Rank of ``vectors`` in the quotient by ``base``."""
    s = base.copy()
    before = s.dim
    for v in vectors:
        s.add(v)
    return s.dim - before
