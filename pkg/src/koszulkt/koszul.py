"""The augmented Koszul complex of ``w_j - d_j`` over R(K) = Z[w1..wN].

Elements of ``Lambda^k`` are stored as maps from increasing index tuples
``(i1 < ... < ik)`` (1-based, as in ``e_{i1} ^ ... ^ e_{ik}``) to
``RepRingPoly`` coefficients.  After the substitution ``y_j = w_j - d_j`` the
differential becomes the standard Koszul differential on the variables
``y_j`` and the complex is graded, which is what the exactness and homotopy
checks use.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterable, Mapping

from .cartan import CartanDatum, fundamental_dimensions
from .homology import FgAbGroup, IntMatrix, check_cells, homology_at
from .repring import RepRingPoly, augmentation, monomials

FAULTS = ("d-sign",)


class KoszulError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class KoszulElement:
    degree: int
    coeffs: Mapping[tuple[int, ...], RepRingPoly]
    nvars: int

    def __post_init__(self):
        clean = {}
        for s, p in self.coeffs.items():
            s = tuple(s)
            if len(s) != self.degree or any(a >= b for a, b in zip(s, s[1:])):
                raise KoszulError(f"index tuple {s} is not strictly increasing of length {self.degree}")
            if s and not (1 <= s[0] and s[-1] <= self.nvars):
                raise KoszulError(f"index tuple {s} out of range 1..{self.nvars}")
            if p:
                clean[s] = p
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def basis(cls, nvars: int, s: Iterable[int], coeff: RepRingPoly | None = None) -> KoszulElement:
        s = tuple(s)
        if coeff is None:
            coeff = RepRingPoly.constant(nvars, 1)
        return cls(len(s), {s: coeff}, nvars)

    @classmethod
    def scalar(cls, p: RepRingPoly) -> KoszulElement:
        return cls(0, {(): p}, p.nvars)

    @classmethod
    def zero(cls, degree: int, nvars: int) -> KoszulElement:
        return cls(degree, {}, nvars)

    def is_zero(self) -> bool:
        return not self.coeffs

    def polynomial(self) -> RepRingPoly:
        """The underlying polynomial of a degree-0 element."""
        if self.degree != 0:
            raise KoszulError(f"degree {self.degree} element has no underlying polynomial")
        return self.coeffs.get((), RepRingPoly.constant(self.nvars, 0))

    def __add__(self, other: KoszulElement) -> KoszulElement:
        if other.degree != self.degree:
            raise KoszulError("cannot add elements of different degree")
        out = dict(self.coeffs)
        for s, p in other.coeffs.items():
            out[s] = out[s] + p if s in out else p
        return KoszulElement(self.degree, out, self.nvars)

    def __neg__(self) -> KoszulElement:
        return KoszulElement(self.degree, {s: -p for s, p in self.coeffs.items()}, self.nvars)

    def __sub__(self, other: KoszulElement) -> KoszulElement:
        return self + (-other)

    def scale(self, p: RepRingPoly | int) -> KoszulElement:
        return KoszulElement(self.degree, {s: q * p for s, q in self.coeffs.items()}, self.nvars)

    def __eq__(self, other):
        if not isinstance(other, KoszulElement):
            return NotImplemented
        return self.degree == other.degree and self.coeffs == other.coeffs

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for s in sorted(self.coeffs):
            tag = "^".join(f"e{i}" for i in s)
            p = self.coeffs[s]
            parts.append(f"({p})" + (f"*{tag}" if tag else ""))
        return " + ".join(parts)


@dataclass(frozen=True)
class KoszulComplex:
    datum: CartanDatum
    dims: tuple[int, ...]
    fault: str | None = field(default=None, compare=False)

    @property
    def N(self) -> int:
        return self.datum.N

    @cached_property
    def ranks(self) -> list[int]:
        return [comb(self.N, k) for k in range(self.N + 1)]

    def subsets(self, k: int) -> list[tuple[int, ...]]:
        return list(combinations(range(1, self.N + 1), k))

    def factor(self, i: int, degree: int) -> RepRingPoly:
        """The element ``w_i - d_i`` multiplying ``e_i`` away in the differential."""
        shift = self.dims[i - 1]
        if self.fault == "d-sign" and i == 1 and degree == 1:
            shift = -shift
        return RepRingPoly.generator(self.N, i, shift)


def koszul_complex(datum: CartanDatum, fault: str | None = None) -> KoszulComplex:
    if fault is not None and fault not in FAULTS:
        raise KoszulError(f"unknown fault {fault!r}; known: {FAULTS}")
    return KoszulComplex(datum, fundamental_dimensions(datum), fault)


def koszul_differential(cx: KoszulComplex, x: KoszulElement, y_coordinates: bool = False) -> KoszulElement:
    """``d(e_{i1}^...^e_{ik}) = sum_j (-1)^(j-1) (w_{ij} - d_{ij}) e_{...^ij...}``.

    With ``y_coordinates`` the factors are rewritten through ``w_j = y_j + d_j``,
    which for the unfaulted complex gives the plain variables ``y_{ij}``.
    """
    if x.degree < 1:
        raise KoszulError("the differential is not defined on degree 0; use augment")
    out: dict[tuple[int, ...], RepRingPoly] = {}
    for s, p in x.coeffs.items():
        for j, i in enumerate(s):
            f = cx.factor(i, x.degree)
            if y_coordinates:
                f = to_y_coordinates(cx, f)
            t = s[:j] + s[j + 1 :]
            term = p * f if j % 2 == 0 else -(p * f)
            out[t] = out[t] + term if t in out else term
    return KoszulElement(x.degree - 1, out, cx.N)


def augment(cx: KoszulComplex, x: KoszulElement) -> int:
    if x.degree != 0:
        raise KoszulError(f"augmentation needs a degree 0 element, got degree {x.degree}")
    return augmentation(cx.datum, x.polynomial())


def verify_d_squared(cx: KoszulComplex, max_degree: int = 2) -> bool:
    """Check ``d o d = 0`` and ``augment o d = 0`` on ``m * e_S`` for all monomials ``m``
    of degree <= ``max_degree`` (the ``m = 1`` case already certifies it globally)."""
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    n = cx.N
    for m in monomials(n, max_degree):
        mono = RepRingPoly.monomial(m)
        for k in range(1, n + 1):
            for s in cx.subsets(k):
                dx = koszul_differential(cx, KoszulElement.basis(n, s, mono))
                if k == 1:
                    if augment(cx, dx) != 0:
                        return False
                elif not koszul_differential(cx, dx).is_zero():
                    return False
    return True


def _shift_substitute(p: RepRingPoly, shifts) -> RepRingPoly:
    n = p.nvars
    lin = [RepRingPoly.generator(n, j + 1, -shifts[j]) for j in range(n)]
    cache: dict[tuple[int, int], RepRingPoly] = {}
    total = RepRingPoly.constant(n, 0)
    for e, c in p.items():
        t = RepRingPoly.constant(n, c)
        for j, k in enumerate(e):
            if k:
                if (j, k) not in cache:
                    cache[(j, k)] = lin[j] ** k
                t = t * cache[(j, k)]
        total = total + t
    return total


def to_y_coordinates(cx: KoszulComplex, p: RepRingPoly) -> RepRingPoly:
    """Rewrite ``p(w)`` as a polynomial in ``y_j = w_j - d_j`` (substitute ``w_j = y_j + d_j``)."""
    return _shift_substitute(p, cx.dims)


def from_y_coordinates(cx: KoszulComplex, p: RepRingPoly) -> RepRingPoly:
    return _shift_substitute(p, [-d for d in cx.dims])


def element_to_y(cx: KoszulComplex, x: KoszulElement) -> KoszulElement:
    return KoszulElement(x.degree, {s: to_y_coordinates(cx, p) for s, p in x.coeffs.items()}, cx.N)


def element_from_y(cx: KoszulComplex, x: KoszulElement) -> KoszulElement:
    return KoszulElement(x.degree, {s: from_y_coordinates(cx, p) for s, p in x.coeffs.items()}, cx.N)


def _homotopy_term(a: tuple[int, ...], s: tuple[int, ...]):
    # first index carrying either a variable or a wedge factor decides
    first_s = s[0] if s else None
    for i, ai in enumerate(a, start=1):
        if first_s is not None and i >= first_s:
            return None
        if ai:
            b = list(a)
            b[i - 1] -= 1
            return tuple(b), (i,) + s
    return None


def contracting_homotopy(cx: KoszulComplex, x: KoszulElement) -> KoszulElement:
    """Z-linear ``s`` with ``d s + s d = id - eta o eps`` in y-coordinates.

    On a monomial ``y^a e_S`` let ``i`` be the smallest index with ``a_i > 0``;
    if ``i < min(S)`` the result is ``y^(a - e_i) e_i ^ e_S`` and otherwise 0.
    """
    out: dict[tuple[int, ...], RepRingPoly] = {}
    n = cx.N
    for s, p in x.coeffs.items():
        for a, c in p.items():
            hit = _homotopy_term(a, s)
            if hit is None:
                continue
            b, t = hit
            term = RepRingPoly.monomial(b, c)
            out[t] = out[t] + term if t in out else term
    return KoszulElement(x.degree + 1, out, n)


def y_augmentation(x: KoszulElement) -> int:
    """Augmentation in y-coordinates: evaluation at ``y = 0``."""
    return x.polynomial().coefficient((0,) * x.nvars)


def homotopy_defect(cx: KoszulComplex, x: KoszulElement) -> KoszulElement:
    """``(d s + s d - id + eta eps)(x)``; zero iff the homotopy identity holds at ``x``."""
    sx = contracting_homotopy(cx, x)
    lhs = koszul_differential(cx, sx, y_coordinates=True)
    if x.degree >= 1:
        lhs = lhs + contracting_homotopy(cx, koszul_differential(cx, x, y_coordinates=True))
        rhs = x
    else:
        rhs = x - KoszulElement.scalar(RepRingPoly.constant(cx.N, y_augmentation(x)))
    return lhs - rhs


def verify_homotopy(cx: KoszulComplex, max_y_degree: int = 5) -> bool:
    """Homotopy identity on every ``y^a e_S`` with ``|a| <= max_y_degree``."""
    n = cx.N
    for a in monomials(n, max_y_degree):
        mono = RepRingPoly.monomial(a)
        for k in range(n + 1):
            for s in cx.subsets(k):
                if not homotopy_defect(cx, KoszulElement.basis(n, s, mono)).is_zero():
                    return False
    return True


# --- graded pieces and exactness --------------------------------------------------


def graded_basis(cx: KoszulComplex, k: int, degree: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Basis ``(a, S)`` of the piece of ``Lambda^k`` with ``|a| + k == degree``."""
    if k < 0 or k > cx.N or degree < k:
        return []
    return [(a, s) for s in cx.subsets(k) for a in monomials(cx.N, degree - k, degree - k)]


def graded_matrix(cx: KoszulComplex, k: int, degree: int) -> IntMatrix:
    """Matrix of ``d: Lambda^k -> Lambda^(k-1)`` (or ``eps`` when ``k == 0``) on one graded piece."""
    src = graded_basis(cx, k, degree)
    if k == 0:
        tgt_len = 1 if degree == 0 else 0
        check_cells(tgt_len, len(src), "augmentation matrix")
        rows = [[1 if not any(a) else 0 for a, _ in src]] if tgt_len else []
        return IntMatrix.from_rows(rows, len(src))
    tgt = graded_basis(cx, k - 1, degree)
    check_cells(len(tgt), len(src), "graded differential")
    index = {b: i for i, b in enumerate(tgt)}
    rows = [[0] * len(src) for _ in tgt]
    for col, (a, s) in enumerate(src):
        x = KoszulElement.basis(cx.N, s, RepRingPoly.monomial(a))
        for t, p in koszul_differential(cx, x, y_coordinates=True).coeffs.items():
            for b, c in p.items():
                if (b, t) not in index:
                    raise KoszulError(f"differential is not homogeneous in y-coordinates at {s} -> {t}")
                rows[index[(b, t)]][col] = c
    return IntMatrix.from_rows(rows, len(src))


@dataclass
class HomologyReport:
    """Homology of the augmented complex per (position, y-degree).

    Position ``-1`` is the copy of ``Z`` receiving the augmentation.  The
    certificate covers only the computed degrees.
    """

    type: str
    max_y_degree: int
    groups: dict[tuple[int, int], FgAbGroup]

    @property
    def exact(self) -> bool:
        return all(g.is_trivial for g in self.groups.values())

    def to_dict(self) -> dict:
        return {
            "type": self.type,
            "max_y_degree": self.max_y_degree,
            "truncated": True,
            "exact": self.exact,
            "homology": [
                {"position": k, "y_degree": d, "invariant_factors": g.invariant_factors()}
                for (k, d), g in sorted(self.groups.items(), key=lambda t: (t[0][1], t[0][0]))
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def truncated_exactness(cx: KoszulComplex, max_y_degree: int = 4) -> HomologyReport:
    if max_y_degree < 0:
        raise ValueError("max_y_degree must be >= 0")
    n = cx.N
    groups = {}
    for deg in range(max_y_degree + 1):
        # d[k] : position k -> position k-1, positions -1..N
        dims = {k: len(graded_basis(cx, k, deg)) for k in range(n + 1)}
        dims[-1] = 1 if deg == 0 else 0
        mats = {k: graded_matrix(cx, k, deg) for k in range(n + 1)}
        mats[n + 1] = IntMatrix.zeros(dims[n], 0)
        mats[-1] = IntMatrix.zeros(0, dims[-1])
        for k in range(-1, n + 1):
            groups[(k, deg)] = homology_at(mats[k + 1], mats[k])
    return HomologyReport(cx.datum.name, max_y_degree, groups)
