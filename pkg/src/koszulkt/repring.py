"""The representation rings R(K) = Z[w1..wN] and R(T) = Z[P], characters and restriction.

``RepRingPoly`` holds polynomials in the classes of the fundamental
representations; ``LaurentWeightPoly`` holds integer combinations of weights,
i.e. Laurent polynomials in the torus variables ``z_i = e^{w_i}``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb, floor
from typing import Iterable, Mapping, Sequence

from .cartan import CapExceededError, CartanDatum, CartanError, Weight, fundamental_dimensions, weyl_group
from .homology import check_cells, kernel_basis, kernel_rank, IntMatrix

DEFAULT_WEIGHT_CAP = 200_000


class _IntPoly:
    """Finitely supported map from integer exponent tuples to non-zero integers."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], int] | Iterable = ()):
        self.nvars = nvars
        clean: dict[tuple[int, ...], int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for e, c in items:
            e = tuple(e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} does not have {nvars} entries")
            if c:
                c = clean.get(e, 0) + c
                if c:
                    clean[e] = c
                else:
                    clean.pop(e, None)
        self._check(clean)
        self._terms = clean
        self._hash = None

    def _check(self, terms) -> None:
        pass

    @classmethod
    def _raw(cls, nvars, terms):
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, nvars: int, c: int = 1):
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def monomial(cls, exps: Sequence[int], c: int = 1):
        return cls._raw(len(exps), {tuple(exps): c} if c else {})

    @property
    def terms(self) -> dict[tuple[int, ...], int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coefficient(self, e: Sequence[int]) -> int:
        return self._terms.get(tuple(e), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def _coerce(self, other):
        if isinstance(other, int):
            return type(self).constant(self.nvars, other)
        if type(other) is not type(self):
            return NotImplemented
        if other.nvars != self.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                del out[e]
        return type(self)._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._raw(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return type(self)._raw(self.nvars, {})
            return type(self)._raw(self.nvars, {e: c * other for e, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[tuple[int, ...], int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return type(self)._raw(self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = type(self).constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = type(self).constant(self.nvars, other)
        if type(other) is not type(self):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((type(self).__name__, self.nvars, frozenset(self._terms.items())))
        return self._hash

    def coefficient_sum(self) -> int:
        return sum(self._terms.values())

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        """Terms in graded lexicographic order, highest first."""
        return sorted(self._terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def __repr__(self):
        return f"{type(self).__name__}({str(self)!r})"


class RepRingPoly(_IntPoly):
    """Element of R(K) = Z[w1, ..., wN].  Prints as ``3*w1^2*w2 - w2 + 5``."""

    __slots__ = ()
    var = "w"

    def _check(self, terms):
        for e in terms:
            if any(x < 0 for x in e):
                raise ValueError(f"negative exponent {e} in a polynomial")

    @classmethod
    def generator(cls, nvars: int, j: int, shift: int = 0) -> RepRingPoly:
        """``w_j - shift`` (``j`` is 1-based)."""
        e = tuple(int(i == j - 1) for i in range(nvars))
        return cls(nvars, {e: 1, (0,) * nvars: -shift})

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def evaluate(self, values: Sequence[int]) -> int:
        total = 0
        for e, c in self._terms.items():
            t = c
            for v, k in zip(values, e):
                if k:
                    t *= v**k
            total += t
        return total

    def __str__(self) -> str:
        return _format(self.sorted_terms(), lambda e: _mono_str(e, self.var))

    @classmethod
    def parse(cls, text: str, nvars: int) -> RepRingPoly:
        out: dict[tuple[int, ...], int] = {}
        for sign, body in _split_terms(text):
            coeff, factors = _split_coeff(body)
            e = [0] * nvars
            for f in factors:
                m = re.fullmatch(rf"{cls.var}(\d+)(?:\^(\d+))?", f)
                if not m:
                    raise ValueError(f"cannot parse factor {f!r} in {text!r}")
                i = int(m.group(1)) - 1
                if not 0 <= i < nvars:
                    raise ValueError(f"variable {f!r} out of range for {nvars} variables")
                e[i] += int(m.group(2) or 1)
            out[tuple(e)] = out.get(tuple(e), 0) + sign * coeff
        return cls(nvars, out)


class LaurentWeightPoly(_IntPoly):
    """Element of R(T) = Z[P].  Prints as ``z(1,0) + 2*z(-1,1) + z(0,0)``."""

    __slots__ = ()

    def __str__(self) -> str:
        return _format(
            self.sorted_terms(),
            lambda e: "z(" + ",".join(str(x) for x in e) + ")",
            unit_is_empty=False,
        )

    @classmethod
    def parse(cls, text: str, nvars: int) -> LaurentWeightPoly:
        out: dict[tuple[int, ...], int] = {}
        for sign, body in _split_terms(text):
            coeff, factors = _split_coeff(body)
            if not factors:
                e = (0,) * nvars
            elif len(factors) == 1 and (m := re.fullmatch(r"z\(([-\d,\s]*)\)", factors[0])):
                e = tuple(int(x) for x in m.group(1).split(","))
                if len(e) != nvars:
                    raise ValueError(f"weight {e} does not have {nvars} entries")
            else:
                raise ValueError(f"cannot parse term {body!r} in {text!r}")
            out[e] = out.get(e, 0) + sign * coeff
        return cls(nvars, out)

    def relocate(self, matrix: Sequence[Sequence[int]]) -> LaurentWeightPoly:
        """Move each term at weight ``mu`` to ``matrix @ mu``."""
        out = {}
        for e, c in self._terms.items():
            out[tuple(sum(r * x for r, x in zip(row, e)) for row in matrix)] = c
        return LaurentWeightPoly._raw(self.nvars, out)

    def shift(self, mu: Sequence[int]) -> LaurentWeightPoly:
        """Multiply by ``z^mu``."""
        return LaurentWeightPoly._raw(
            self.nvars, {tuple(a + b for a, b in zip(e, mu)): c for e, c in self._terms.items()}
        )

    def partial(self, i: int) -> LaurentWeightPoly:
        """Formal partial derivative with respect to ``z_i`` (0-based)."""
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return LaurentWeightPoly._raw(self.nvars, out)


def _mono_str(e, var):
    return "*".join(f"{var}{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)


def _format(terms, mono, unit_is_empty=True) -> str:
    if not terms:
        return "0"
    parts = []
    for e, c in terms:
        m = mono(e) if (any(e) or not unit_is_empty) else ""
        a = abs(c)
        if not m:
            body = str(a)
        elif a == 1:
            body = m
        else:
            body = f"{a}*{m}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"{'+' if c > 0 else '-'} {body}")
    return " ".join(parts)


def _split_terms(text: str):
    text = text.strip()
    if text == "0":
        return []
    out = []
    pos = 0
    sign = 1
    if text.startswith("-"):
        sign = -1
        pos = 1
    depth = 0
    start = pos
    for i in range(pos, len(text)):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and ch in "+-" and i > start and text[i - 1] == " ":
            out.append((sign, text[start:i].strip()))
            sign = 1 if ch == "+" else -1
            start = i + 1
    out.append((sign, text[start:].strip()))
    if any(not body for _, body in out):
        raise ValueError(f"cannot parse polynomial {text!r}")
    return out


def _split_coeff(body: str):
    factors = body.split("*")
    if factors[0].isdigit():
        return int(factors[0]), factors[1:]
    return 1, factors


def monomials(nvars: int, max_degree: int, min_degree: int = 0) -> list[tuple[int, ...]]:
    """Exponent vectors of total degree in ``[min_degree, max_degree]``, graded lex."""
    out = []
    for d in range(min_degree, max_degree + 1):
        block = []
        for combo in combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            block.append(tuple(e))
        out.extend(sorted(block, reverse=True))
    return out


def count_monomials(nvars: int, degree: int) -> int:
    return comb(nvars + degree - 1, degree) if degree >= 0 else 0


# --- characters -----------------------------------------------------------------


def dominant_weights_below(datum: CartanDatum, lam: Weight, cap: int = DEFAULT_WEIGHT_CAP) -> list[Weight]:
    """Dominant weights ``mu <= lam`` (``lam - mu`` a non-negative root combination)."""
    # dominant weights have non-negative root coordinates, which bounds lam - mu
    bounds = [floor(x) for x in datum.to_root_coords(lam)]
    size = 1
    for b in bounds:
        size *= b + 1
    if size > cap:
        raise CapExceededError(f"weight system search for {lam} in {datum.name} exceeds cap {cap}")
    a = datum.cartan_matrix
    n = datum.N
    out = []

    def rec(i, mu):
        if i == n:
            if all(x >= 0 for x in mu):
                out.append(tuple(mu))
            return
        for k in range(bounds[i] + 1):
            rec(i + 1, mu)
            mu = [m - r for m, r in zip(mu, a[i])]

    rec(0, list(lam))
    return out


@lru_cache(maxsize=512)
def dominant_multiplicities(datum: CartanDatum, lam: Weight) -> dict[Weight, int]:
    """Multiplicities of the dominant weights of V(lam) via Freudenthal's recursion."""
    lam = tuple(lam)
    if len(lam) != datum.N:
        raise CartanError(f"weight {lam} has wrong rank for {datum.name}")
    if any(x < 0 for x in lam):
        raise CartanError(f"weight {lam} is not dominant")
    dom = dominant_weights_below(datum, lam)
    depth = {mu: sum(datum.to_root_coords(tuple(l - m for l, m in zip(lam, mu)))) for mu in dom}
    dom.sort(key=lambda mu: depth[mu])
    domset = set(dom)
    rho = datum.rho
    lr = tuple(x + 1 for x in lam)
    norm_lr = datum.inner(lr, lr)
    pos = datum.positive_roots
    mult: dict[Weight, int] = {lam: 1}
    for mu in dom:
        if mu == lam:
            continue
        total = 0
        for alpha in pos:
            k = 1
            while True:
                nu = tuple(m + k * a for m, a in zip(mu, alpha))
                d = datum.dominant_representative(nu)
                if d not in domset:
                    break
                total += mult[d] * datum.inner(nu, alpha)
                k += 1
        mr = tuple(x + y for x, y in zip(mu, rho))
        val = 2 * total / (norm_lr - datum.inner(mr, mr))
        if val.denominator != 1:
            raise ArithmeticError(f"non-integral multiplicity {val} at {mu}")
        if val:
            mult[mu] = int(val)
    return mult


def character(datum: CartanDatum, lam: Sequence[int], cap: int = DEFAULT_WEIGHT_CAP) -> LaurentWeightPoly:
    """Character of V(lam): the coefficient at ``mu`` is ``dim V(lam)_mu``."""
    mult = dominant_multiplicities(datum, tuple(lam))
    terms = {}
    for mu, m in mult.items():
        for nu in datum.orbit(mu):
            terms[nu] = m
            if len(terms) > cap:
                raise CapExceededError(f"character of {tuple(lam)} in {datum.name} exceeds {cap} weights")
    return LaurentWeightPoly._raw(datum.N, terms)


@lru_cache(maxsize=64)
def fundamental_characters(datum: CartanDatum) -> tuple[LaurentWeightPoly, ...]:
    return tuple(character(datum, datum.fundamental_weight(j)) for j in range(1, datum.N + 1))


@lru_cache(maxsize=1024)
def _character_power(datum: CartanDatum, j: int, k: int) -> LaurentWeightPoly:
    if k == 1:
        return fundamental_characters(datum)[j]
    return _character_power(datum, j, k - 1) * fundamental_characters(datum)[j]


def restrict(datum: CartanDatum, p: RepRingPoly) -> LaurentWeightPoly:
    """Ring homomorphism R(K) -> R(T) sending ``w_j`` to the character of ``V(w_j)``."""
    if p.nvars != datum.N:
        raise CartanError(f"polynomial in {p.nvars} variables restricted along {datum.name}")
    total = LaurentWeightPoly.constant(datum.N, 0)
    for e, c in p.items():
        t = LaurentWeightPoly.constant(datum.N, c)
        for j, k in enumerate(e):
            if k:
                t = t * _character_power(datum, j, k)
        total = total + t
    return total


def augmentation(datum: CartanDatum, p: RepRingPoly) -> int:
    """Ring homomorphism R(K) -> Z sending ``w_j`` to ``dim V(w_j)``."""
    return p.evaluate(fundamental_dimensions(datum))


def weyl_invariant(datum: CartanDatum, f: LaurentWeightPoly) -> bool:
    return all(f.relocate(w.matrix) == f for w in weyl_group(datum))


@dataclass(frozen=True)
class InjectivityReport:
    kernel_rank: int
    rows: int
    cols: int
    kernel_vector: tuple[int, ...] | None = None

    @property
    def injective(self) -> bool:
        return self.kernel_rank == 0


def injectivity_witness_restrict(datum: CartanDatum, degree_cap: int) -> InjectivityReport:
    """Kernel rank of restriction on polynomials of total degree <= ``degree_cap``."""
    if degree_cap < 0:
        raise ValueError("degree_cap must be >= 0")
    basis = monomials(datum.N, degree_cap)
    images = [restrict(datum, RepRingPoly.monomial(e)) for e in basis]
    weights = sorted({mu for img in images for mu, _ in img.items()})
    check_cells(len(weights), len(basis), "restriction matrix")
    index = {mu: i for i, mu in enumerate(weights)}
    rows = [[0] * len(basis) for _ in weights]
    for j, img in enumerate(images):
        for mu, c in img.items():
            rows[index[mu]][j] = c
    a = IntMatrix.from_rows(rows, len(basis))
    kr = kernel_rank(a)
    vec = tuple(kernel_basis(a)[0]) if kr else None
    return InjectivityReport(kr, a.rows, a.cols, vec)
