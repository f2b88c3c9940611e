"""Root systems, weight lattices and Weyl groups of simply connected compact groups.

Weights are always written in the basis of fundamental weights, so the weight
lattice is literally ``Z^N``.  Simple roots are numbered as in Bourbaki.  Row
``j`` of the Cartan matrix is the simple root ``alpha_j`` in weight coordinates,
i.e. ``A[j][i] = <alpha_j, alpha_i^vee>``.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Sequence

Weight = tuple[int, ...]
Matrix = tuple[tuple[int, ...], ...]

DEFAULT_WEYL_CAP = 10**6

_MIN_RANK = {"A": 1, "B": 2, "C": 3, "D": 4}
_EXCEPTIONAL = {"E": (6, 7, 8), "F": (4,), "G": (2,)}


class CartanError(ValueError):
    """Invalid Cartan type or incompatible weight data."""


class CapExceededError(RuntimeError):
    """An enumeration or matrix size limit was hit."""


def _check_type(letter: str, rank: int) -> None:
    if letter in _MIN_RANK:
        if rank < _MIN_RANK[letter]:
            raise CartanError(f"invalid simple type {letter}{rank}: {letter}_n needs n >= {_MIN_RANK[letter]}")
    elif letter in _EXCEPTIONAL:
        if rank not in _EXCEPTIONAL[letter]:
            raise CartanError(f"invalid simple type {letter}{rank}")
    else:
        raise CartanError(f"invalid simple type {letter}{rank}: unknown series {letter!r}")


def simple_cartan_matrix(letter: str, rank: int) -> list[list[int]]:
    """Cartan matrix of a simple type in Bourbaki numbering."""
    letter = letter.upper()
    _check_type(letter, rank)
    n = rank
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def link(i, j, aij=-1, aji=-1):
        a[i][j] = aij
        a[j][i] = aji

    if letter in "ABC":
        for i in range(n - 1):
            link(i, i + 1)
        if letter == "B":
            # alpha_n short
            link(n - 2, n - 1, -2, -1)
        elif letter == "C":
            # alpha_n long
            link(n - 2, n - 1, -1, -2)
    elif letter == "D":
        for i in range(n - 2):
            link(i, i + 1)
        link(n - 3, n - 1)
    elif letter == "E":
        link(0, 2)
        link(1, 3)
        for i in range(2, n - 1):
            link(i, i + 1)
    elif letter == "F":
        link(0, 1)
        link(1, 2, -2, -1)
        link(2, 3)
    elif letter == "G":
        link(0, 1, -1, -3)
    return a


_TOKEN = re.compile(r"^([A-Za-z])(\d+)$")


def parse_type(text: str) -> list[tuple[str, int]]:
    """Parse ``"A2"`` or ``"A1xB2"`` into a list of ``(letter, rank)`` factors."""
    factors = []
    for token in text.strip().split("x" if "x" in text else "X"):
        m = _TOKEN.match(token.strip())
        if not m:
            raise CartanError(f"cannot parse Cartan type {text!r} (bad factor {token!r})")
        letter, rank = m.group(1).upper(), int(m.group(2))
        _check_type(letter, rank)
        factors.append((letter, rank))
    return factors


def parse_types(text: str) -> list[list[tuple[str, int]]]:
    """Parse a comma-separated list of types, e.g. ``"A1,A2,A1xA1"``."""
    return [parse_type(tok) for tok in text.split(",") if tok.strip()]


@dataclass(frozen=True)
class WeylElement:
    matrix: Matrix
    word_length: int = 0

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def __call__(self, mu: Sequence[int]) -> Weight:
        return weyl_action(self, mu)

    def __mul__(self, other: WeylElement) -> WeylElement:
        return WeylElement(_matmul(self.matrix, other.matrix), -1)


@dataclass(frozen=True)
class CartanDatum:
    """Root datum of a simply connected compact semisimple group.

    Build instances with :func:`build_cartan`; the derived tables (positive
    roots, symmetrizers, inner products) are computed lazily and cached.
    """

    series: tuple[tuple[str, int], ...]
    cartan_matrix: Matrix = field(repr=False)

    @property
    def N(self) -> int:
        return len(self.cartan_matrix)

    @property
    def name(self) -> str:
        return "x".join(f"{l}{r}" for l, r in self.series)

    @property
    def simple_roots(self) -> Matrix:
        return self.cartan_matrix

    @cached_property
    def symmetrizers(self) -> tuple[int, ...]:
        return _symmetrizers(self.cartan_matrix)

    @cached_property
    def positive_roots_simple(self) -> tuple[tuple[int, ...], ...]:
        """Positive roots in simple-root coordinates, sorted by height."""
        return _positive_roots(self.cartan_matrix)

    @cached_property
    def positive_roots(self) -> tuple[Weight, ...]:
        a = self.cartan_matrix
        n = self.N
        return tuple(
            tuple(sum(c[j] * a[j][i] for j in range(n)) for i in range(n))
            for c in self.positive_roots_simple
        )

    @cached_property
    def roots(self) -> frozenset[Weight]:
        pos = self.positive_roots
        return frozenset(pos) | frozenset(tuple(-x for x in r) for r in pos)

    @cached_property
    def weight_form(self) -> tuple[tuple[Fraction, ...], ...]:
        """Gram matrix of the invariant form on fundamental weights.

        Normalised so that ``(alpha_i, alpha_i) = 2 / symmetrizers[i]``.
        """
        n = self.N
        inv = _inverse(self.cartan_matrix)
        d = self.symmetrizers
        return tuple(tuple(inv[i][j] / d[j] for j in range(n)) for i in range(n))

    @property
    def rho(self) -> Weight:
        return (1,) * self.N

    def fundamental_weight(self, j: int) -> Weight:
        """The ``j``-th fundamental weight, 1-based as in Bourbaki."""
        if not 1 <= j <= self.N:
            raise CartanError(f"fundamental weight index {j} out of range 1..{self.N}")
        return tuple(int(i == j - 1) for i in range(self.N))

    def inner(self, mu: Sequence[int], nu: Sequence[int]) -> Fraction:
        g = self.weight_form
        n = self.N
        return sum((mu[i] * g[i][j] * nu[j] for i in range(n) for j in range(n) if mu[i] and nu[j]), Fraction(0))

    def coroot_pairing(self, mu: Sequence[int], alpha: Sequence[int]) -> Fraction:
        """``<mu, alpha^vee> = 2 (mu, alpha) / (alpha, alpha)``."""
        return 2 * self.inner(mu, alpha) / self.inner(alpha, alpha)

    def reflect(self, i: int, mu: Sequence[int]) -> Weight:
        """Simple reflection ``s_i`` (0-based) applied to a weight."""
        row = self.cartan_matrix[i]
        c = mu[i]
        return tuple(m - c * r for m, r in zip(mu, row))

    @cached_property
    def simple_reflections(self) -> tuple[WeylElement, ...]:
        n = self.N
        out = []
        for i in range(n):
            row = self.cartan_matrix[i]
            # (s_i mu)_k = mu_k - mu_i * A[i][k]
            m = tuple(
                tuple(int(k == c) - (row[k] if c == i else 0) for c in range(n))
                for k in range(n)
            )
            out.append(WeylElement(m, 1))
        return tuple(out)

    def identity(self) -> WeylElement:
        n = self.N
        return WeylElement(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), 0)

    def dominant_representative(self, mu: Sequence[int]) -> Weight:
        mu = tuple(mu)
        while True:
            for i, c in enumerate(mu):
                if c < 0:
                    mu = self.reflect(i, mu)
                    break
            else:
                return mu

    def orbit(self, mu: Sequence[int]) -> list[Weight]:
        """Weyl orbit of ``mu`` by breadth-first closure under simple reflections."""
        start = tuple(mu)
        seen = {start}
        queue = deque([start])
        out = [start]
        while queue:
            nu = queue.popleft()
            for i in range(self.N):
                if nu[i] == 0:
                    continue
                x = self.reflect(i, nu)
                if x not in seen:
                    seen.add(x)
                    out.append(x)
                    queue.append(x)
        return out

    def to_root_coords(self, mu: Sequence[int]) -> tuple[Fraction, ...]:
        """Coordinates of a weight in the simple-root basis (``mu = c . A``)."""
        inv = _inverse(self.cartan_matrix)
        n = self.N
        return tuple(sum((mu[j] * inv[j][i] for j in range(n)), Fraction(0)) for i in range(n))


def build_cartan(series: Sequence[tuple[str, int]] | str) -> CartanDatum:
    """Direct sum of simple Cartan data, e.g. ``build_cartan([("A", 1), ("G", 2)])``."""
    if isinstance(series, str):
        series = parse_type(series)
    if not series:
        raise CartanError("empty Cartan type")
    blocks = [simple_cartan_matrix(l, r) for l, r in series]
    n = sum(len(b) for b in blocks)
    a = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            a[off + i][off : off + len(b)] = row
        off += len(b)
    return CartanDatum(tuple((l.upper(), int(r)) for l, r in series), tuple(map(tuple, a)))


def weyl_dimension(datum: CartanDatum, lam: Sequence[int]) -> int:
    """Dimension of the irreducible representation with highest weight ``lam``."""
    lam = tuple(lam)
    if len(lam) != datum.N:
        raise CartanError(f"weight {lam} has wrong rank for {datum.name}")
    if any(c < 0 for c in lam):
        raise CartanError(f"weight {lam} is not dominant")
    lr = tuple(c + 1 for c in lam)
    num = Fraction(1)
    for alpha in datum.positive_roots:
        num *= datum.inner(lr, alpha) / datum.inner(datum.rho, alpha)
    if num.denominator != 1:
        raise ArithmeticError(f"Weyl dimension formula gave non-integer {num}")
    return int(num)


def fundamental_dimensions(datum: CartanDatum) -> tuple[int, ...]:
    return tuple(weyl_dimension(datum, datum.fundamental_weight(j)) for j in range(1, datum.N + 1))


def exponents(datum: CartanDatum) -> tuple[int, ...]:
    """Exponents from root heights: the number of exponents >= h is the number of
    positive roots of height h."""
    heights: dict[int, int] = {}
    for c in datum.positive_roots_simple:
        h = sum(c)
        heights[h] = heights.get(h, 0) + 1
    counts = [heights.get(h, 0) for h in range(1, max(heights, default=0) + 1)]
    return tuple(sorted(sum(1 for p in counts if p > i) for i in range(datum.N)))


def weyl_order(datum: CartanDatum) -> int:
    """``|W| = prod (m_i + 1)`` over the exponents, without enumerating W."""
    out = 1
    for m in exponents(datum):
        out *= m + 1
    return out


def weyl_group(datum: CartanDatum, cap: int = DEFAULT_WEYL_CAP) -> list[WeylElement]:
    """All Weyl group elements, identity first, in breadth-first (length) order."""
    ident = datum.identity()
    seen = {ident.matrix}
    out = [ident]
    frontier = [ident]
    gens = [s.matrix for s in datum.simple_reflections]
    depth = 0
    while frontier:
        depth += 1
        nxt = []
        for w in frontier:
            for s in gens:
                m = _matmul(s, w.matrix)
                if m not in seen:
                    seen.add(m)
                    if len(seen) > cap:
                        raise CapExceededError(
                            f"Weyl group of {datum.name} exceeds the enumeration cap of {cap} elements"
                        )
                    el = WeylElement(m, depth)
                    out.append(el)
                    nxt.append(el)
        frontier = nxt
    return out


def weyl_action(w: WeylElement, mu: Sequence[int]) -> Weight:
    if len(mu) != w.rank:
        raise CartanError(f"rank mismatch: Weyl element of rank {w.rank} applied to weight {tuple(mu)}")
    return tuple(sum(r * m for r, m in zip(row, mu)) for row in w.matrix)


def longest_element(datum: CartanDatum, cap: int = DEFAULT_WEYL_CAP) -> WeylElement:
    return weyl_group(datum, cap)[-1]


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def _inverse(a: Matrix) -> list[list[Fraction]]:
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        p = next(r for r in range(c, n) if m[r][c] != 0)
        m[c], m[p] = m[p], m[c]
        piv = m[c][c]
        m[c] = [x / piv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]


def _symmetrizers(a: Matrix) -> tuple[int, ...]:
    # D_i A[i][j] = D_j A[j][i]; propagate ratios over each connected component
    n = len(a)
    d: list[Fraction | None] = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        comp = [start]
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if j != i and a[i][j] != 0 and d[j] is None:
                    d[j] = d[i] * Fraction(a[i][j], a[j][i])
                    comp.append(j)
                    stack.append(j)
        scale = lcm(*(x.denominator for x in (d[k] for k in comp)))
        vals = [d[k] * scale for k in comp]
        g = 0
        for v in vals:
            g = gcd(g, int(v))
        for k in comp:
            d[k] = d[k] * scale / g
    return tuple(int(x) for x in d)


def _positive_roots(a: Matrix) -> tuple[tuple[int, ...], ...]:
    n = len(a)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    seen = set(simple)
    queue = deque(simple)
    while queue:
        beta = queue.popleft()
        for i in range(n):
            # <beta, alpha_i^vee> = sum_j c_j A[j][i]
            p = sum(beta[j] * a[j][i] for j in range(n))
            gamma = tuple(beta[k] - (p if k == i else 0) for k in range(n))
            if gamma in seen or all(x <= 0 for x in gamma):
                continue
            if all(x >= 0 for x in gamma):
                seen.add(gamma)
                queue.append(gamma)
    return tuple(sorted(seen, key=lambda c: (sum(c), tuple(-x for x in c))))
