"""K-groups from the Koszul resolution and the comparison map into the torus side.

The comparison map sends ``p * e_{i1}^...^e_{ik}`` to
``res(p) * dchi_{i1}^...^dchi_{ik}`` in the exterior algebra of Kaehler
differentials of R(T), where ``chi_i`` is the restricted fundamental
character.  Forms are written in the basis ``dz_{i1}^...^dz_{ik}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb
from typing import Iterable, Mapping, Sequence

from .cartan import CartanDatum, CartanError, WeylElement, weyl_group
from .homology import IntMatrix, check_cells, hermite_normal_form, kernel_basis, kernel_rank, solve_integer_many
from .koszul import KoszulElement
from .repring import LaurentWeightPoly, RepRingPoly, fundamental_characters, monomials, restrict

SCHEMA_VERSION = "1.0"


def resolution_ranks(n: int) -> list[int]:
    if n < 1:
        raise ValueError(f"rank must be >= 1, got {n}")
    return [comb(n, k) for k in range(n + 1)]


@dataclass(frozen=True)
class SpectralPage:
    """First page of the spectral sequence attached to the resolution.

    ``entries[(m, q)]`` is the R(K)-rank of ``E^1_{m,q}`` with ``q`` taken mod 2.
    """

    entries: dict[tuple[int, int], int]
    differentials: dict[int, str]
    justification: str

    @property
    def collapses(self) -> bool:
        return all(v == "trivial" for v in self.differentials.values())


def e1_page(datum: CartanDatum) -> SpectralPage:
    n = datum.N
    ranks = resolution_ranks(n)
    entries = {}
    for m, r in enumerate(ranks):
        entries[(m, 0)] = r
        # K_1 of a c0-sum of matrix algebras vanishes
        entries[(m, 1)] = 0
    diffs = {m: "trivial" for m in range(1, n + 1)}
    return SpectralPage(
        entries,
        diffs,
        "G x| C0(G/K) is Morita equivalent to C*(K) (x) compacts, so d1 is zero on K-theory",
    )


# --- exterior forms over R(T) ---------------------------------------------------


def _wedge_sign(s: Sequence[int], t: Sequence[int]) -> tuple[int, tuple[int, ...]] | None:
    """Sign and index tuple of ``dz_S ^ dz_T`` (``None`` if they overlap)."""
    if set(s) & set(t):
        return None
    inversions = sum(1 for a in s for b in t if a > b)
    return (-1 if inversions % 2 else 1), tuple(sorted((*s, *t)))


class TorusForm:
    """Element of ``Lambda^k Omega^1(R(T))`` in the basis ``dz_{i1}^...^dz_{ik}`` (1-based)."""

    __slots__ = ("degree", "nvars", "coeffs")

    def __init__(self, degree: int, nvars: int, coeffs: Mapping[tuple[int, ...], LaurentWeightPoly] = ()):
        self.degree = degree
        self.nvars = nvars
        clean = {}
        for s, f in dict(coeffs).items():
            s = tuple(s)
            if len(s) != degree or any(a >= b for a, b in zip(s, s[1:])) or (s and not 1 <= s[0] <= s[-1] <= nvars):
                raise ValueError(f"invalid index tuple {s} for a degree {degree} form in {nvars} variables")
            if f:
                clean[s] = f
        self.coeffs = clean

    @classmethod
    def function(cls, f: LaurentWeightPoly) -> TorusForm:
        return cls(0, f.nvars, {(): f})

    @classmethod
    def dz(cls, nvars: int, s: Iterable[int], coeff: LaurentWeightPoly | None = None) -> TorusForm:
        s = tuple(s)
        if coeff is None:
            coeff = LaurentWeightPoly.constant(nvars, 1)
        return cls(len(s), nvars, {s: coeff})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: TorusForm) -> TorusForm:
        if other.degree != self.degree:
            raise ValueError("cannot add forms of different degree")
        out = dict(self.coeffs)
        for s, f in other.coeffs.items():
            out[s] = out[s] + f if s in out else f
        return TorusForm(self.degree, self.nvars, out)

    def __neg__(self) -> TorusForm:
        return TorusForm(self.degree, self.nvars, {s: -f for s, f in self.coeffs.items()})

    def __sub__(self, other: TorusForm) -> TorusForm:
        return self + (-other)

    def scale(self, f: LaurentWeightPoly | int) -> TorusForm:
        return TorusForm(self.degree, self.nvars, {s: g * f for s, g in self.coeffs.items()})

    def wedge(self, other: TorusForm) -> TorusForm:
        out: dict[tuple[int, ...], LaurentWeightPoly] = {}
        for s, f in self.coeffs.items():
            for t, g in other.coeffs.items():
                hit = _wedge_sign(s, t)
                if hit is None:
                    continue
                sign, u = hit
                term = f * g * sign
                out[u] = out[u] + term if u in out else term
        return TorusForm(self.degree + other.degree, self.nvars, out)

    __xor__ = wedge

    def __eq__(self, other):
        if not isinstance(other, TorusForm):
            return NotImplemented
        return self.degree == other.degree and self.coeffs == other.coeffs

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for s in sorted(self.coeffs):
            tag = "^".join(f"dz{i}" for i in s)
            parts.append(f"({self.coeffs[s]})" + (f"*{tag}" if tag else ""))
        return " + ".join(parts)

    __repr__ = __str__


def formal_differential(datum: CartanDatum, f: LaurentWeightPoly) -> TorusForm:
    """Kaehler differential ``d(z^mu) = sum_i mu_i z^(mu - e_i) dz_i``."""
    n = datum.N
    return TorusForm(1, n, {(i + 1,): f.partial(i) for i in range(n)})


def exterior_derivative(datum: CartanDatum, x: TorusForm) -> TorusForm:
    """``d(f dz_S) = sum_i (d_i f) dz_i ^ dz_S``."""
    out = TorusForm(x.degree + 1, datum.N)
    for s, f in x.coeffs.items():
        out = out + formal_differential(datum, f).wedge(TorusForm.dz(datum.N, s))
    return out


def comparison_map(datum: CartanDatum, k: int, indices: Sequence[int]) -> TorusForm:
    """Image of ``e_{i1}^...^e_{ik}``: the wedge ``dchi_{i1}^...^dchi_{ik}``."""
    indices = tuple(indices)
    n = datum.N
    if len(indices) != k or any(a >= b for a, b in zip(indices, indices[1:])) or (indices and not 1 <= indices[0] <= indices[-1] <= n):
        raise ValueError(f"invalid index tuple {indices} for degree {k} in rank {n}")
    chars = fundamental_characters(datum)
    out = TorusForm.function(LaurentWeightPoly.constant(n, 1))
    for i in indices:
        out = out.wedge(formal_differential(datum, chars[i - 1]))
    return out


def comparison_apply(datum: CartanDatum, x: KoszulElement) -> TorusForm:
    """Extend the comparison map semilinearly over restriction."""
    out = TorusForm(x.degree, datum.N)
    for s, p in x.coeffs.items():
        out = out + comparison_map(datum, x.degree, s).scale(restrict(datum, p))
    return out


def weyl_action_on_form(datum: CartanDatum, w: WeylElement, x: TorusForm) -> TorusForm:
    """``w . (f dz_S) = (w f) d(z^{w w_{i1}}) ^ ...``; coefficients move ``mu -> w mu``."""
    if w.rank != datum.N or x.nvars != datum.N:
        raise CartanError("rank mismatch between Weyl element, datum and form")
    n = datum.N
    images = []
    for i in range(n):
        col = tuple(w.matrix[r][i] for r in range(n))
        images.append(formal_differential(datum, LaurentWeightPoly.monomial(col)))
    out = TorusForm(x.degree, n)
    for s, f in x.coeffs.items():
        term = TorusForm.function(f.relocate(w.matrix))
        for i in s:
            term = term.wedge(images[i - 1])
        out = out + term
    return out


def verify_image_invariance(datum: CartanDatum) -> bool:
    group = weyl_group(datum)
    n = datum.N
    for k in range(n + 1):
        for s in combinations(range(1, n + 1), k):
            form = comparison_map(datum, k, s)
            for w in group:
                if weyl_action_on_form(datum, w, form) != form:
                    return False
    return True


# --- linear-algebra shadows ------------------------------------------------------


def _flatten(forms: list[TorusForm]) -> tuple[list[tuple], list[list[int]]]:
    keys = sorted({(s, mu) for f in forms for s, g in f.coeffs.items() for mu, _ in g.items()})
    index = {key: i for i, key in enumerate(keys)}
    rows = [[0] * len(forms) for _ in keys]
    for j, f in enumerate(forms):
        for s, g in f.coeffs.items():
            for mu, c in g.items():
                rows[index[(s, mu)]][j] = c
    return keys, rows


@dataclass(frozen=True)
class InjectivityResult:
    k: int
    degree_cap: int
    rows: int
    cols: int
    kernel_rank: int
    kernel_vector: tuple[int, ...] | None = None

    @property
    def injective(self) -> bool:
        return self.kernel_rank == 0


def verify_injectivity(datum: CartanDatum, k: int, degree_cap: int) -> InjectivityResult:
    """Kernel of the comparison map on ``m * e_S`` with ``|S| = k``, ``deg m <= degree_cap``."""
    n = datum.N
    if not 0 <= k <= n:
        raise ValueError(f"k must lie in 0..{n}")
    if degree_cap < 0:
        raise ValueError("degree_cap must be >= 0")
    basis = [(m, s) for s in combinations(range(1, n + 1), k) for m in monomials(n, degree_cap)]
    psi = {s: comparison_map(datum, k, s) for s in combinations(range(1, n + 1), k)}
    forms = [psi[s].scale(restrict(datum, RepRingPoly.monomial(m))) for m, s in basis]
    keys, rows = _flatten(forms)
    check_cells(len(keys), len(forms), "comparison matrix")
    a = IntMatrix.from_rows(rows, len(forms))
    kr = kernel_rank(a)
    vec = tuple(kernel_basis(a)[0]) if kr else None
    return InjectivityResult(k, degree_cap, a.rows, a.cols, kr, vec)


@dataclass
class WindowReport:
    """W-invariant forms supported in ``max|mu_i| <= weight_cap`` and their image membership.

    ``window_member`` asks whether each invariant agrees with a Z-combination of
    comparison images up to terms outside the window; ``exact_member`` asks for
    equality on the nose.  Both are statements about this window only.
    """

    k: int
    weight_cap: int
    basis: list[TorusForm]
    window_member: list[bool]
    exact_member: list[bool]
    generator_degree: int

    @property
    def all_in_image(self) -> bool:
        return all(self.window_member)


def _window_keys(n: int, k: int, cap: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    weights = sorted(product(range(-cap, cap + 1), repeat=n), key=lambda mu: (sum(map(abs, mu)), tuple(-x for x in mu)))
    return [(s, mu) for s in combinations(range(1, n + 1), k) for mu in weights]


def invariant_part_window(datum: CartanDatum, k: int, weight_cap: int) -> WindowReport:
    n = datum.N
    if n > 2:
        raise NotImplementedError(f"window computation is only supported for rank <= 2, got {datum.name}")
    if not 0 <= k <= n:
        raise ValueError(f"k must lie in 0..{n}")
    if weight_cap < 0:
        raise ValueError("weight_cap must be >= 0")
    keys = _window_keys(n, k, weight_cap)
    # fixed by every simple reflection <=> fixed by all of W
    group = [datum.identity()] + [w for w in weyl_group(datum) if w.word_length == 1]
    check_cells(len(keys) * len(group), len(keys), "fixed-point system")
    units = [TorusForm.dz(n, s, LaurentWeightPoly.monomial(mu)) for s, mu in keys]
    # columns: unknown coefficients; rows: coordinates of (w - 1) applied to each unit
    defects = []
    for w in group[1:]:
        defects.extend(weyl_action_on_form(datum, w, u) - u for u in units)
    per = len(units)
    blocks = [defects[i * per : (i + 1) * per] for i in range(len(group) - 1)]
    rows: list[list[int]] = []
    for block in blocks:
        _, r = _flatten(block)
        rows.extend(r)
    fixed = kernel_basis(IntMatrix.from_rows(rows, per)) if rows else [[int(i == j) for i in range(per)] for j in range(per)]
    hnf = hermite_normal_form(fixed)
    basis = [
        TorusForm(k, n, _collect((keys[i], c) for i, c in enumerate(vec) if c))
        for vec in hnf
    ]

    # the orbit sum of (c, ..., c) needs total degree N*c
    gen_degree = n * weight_cap + k
    gens = [
        comparison_apply(datum, KoszulElement.basis(n, s, RepRingPoly.monomial(m)))
        for s in combinations(range(1, n + 1), k)
        for m in monomials(n, gen_degree)
    ]
    inside = {key: i for i, key in enumerate(keys)}
    window_rows = [[0] * len(gens) for _ in keys]
    for j, g in enumerate(gens):
        for s, f in g.coeffs.items():
            for mu, c in f.items():
                if (s, mu) in inside:
                    window_rows[inside[(s, mu)]][j] = c
    all_keys, full_rows = _flatten(gens + basis)
    full_index = {key: i for i, key in enumerate(all_keys)}
    gen_matrix = IntMatrix.from_rows([r[: len(gens)] for r in full_rows], len(gens))
    targets = []
    for form in basis:
        target = [0] * len(all_keys)
        for s, f in form.coeffs.items():
            for mu, c in f.items():
                target[full_index[(s, mu)]] = c
        targets.append(target)
    window_member = [x is not None for x in solve_integer_many(IntMatrix.from_rows(window_rows, len(gens)), hnf)]
    exact_member = [x is not None for x in solve_integer_many(gen_matrix, targets)]
    return WindowReport(k, weight_cap, basis, window_member, exact_member, gen_degree)


def _collect(items) -> dict[tuple[int, ...], LaurentWeightPoly]:
    terms: dict[tuple[int, ...], dict] = {}
    for (s, mu), c in items:
        terms.setdefault(s, {})[mu] = c
    return {s: LaurentWeightPoly(len(next(iter(t))), t) for s, t in terms.items()}


# --- K-groups --------------------------------------------------------------------


@dataclass
class KTheoryReport:
    type: str
    N: int
    k0_rank: int
    k1_rank: int
    generators_even: list[tuple[int, ...]]
    generators_odd: list[tuple[int, ...]]
    checks: dict[str, bool | None] = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "type": self.type,
            "N": self.N,
            "k0_rank": self.k0_rank,
            "k1_rank": self.k1_rank,
            "generators_even": [list(g) for g in self.generators_even],
            "generators_odd": [list(g) for g in self.generators_odd],
            "checks": {key: self.checks.get(key) for key in CHECK_NAMES},
            "details": self.details,
        }


CHECK_NAMES = ("d_squared", "exactness", "homotopy", "characters", "invariance", "injectivity", "window")


def k_groups(datum: CartanDatum, checks: Mapping[str, bool | None] | None = None) -> KTheoryReport:
    """``K_0`` and ``K_1`` as free R(K)-modules on even and odd wedge monomials."""
    n = datum.N
    even = [s for k in range(0, n + 1, 2) for s in combinations(range(1, n + 1), k)]
    odd = [s for k in range(1, n + 1, 2) for s in combinations(range(1, n + 1), k)]
    return KTheoryReport(datum.name, n, len(even), len(odd), even, odd, dict(checks or {}))


def report_schema() -> dict:
    """The JSON schema that serialized ``KTheoryReport`` objects follow."""
    import json
    from importlib import resources

    return json.loads(resources.files(__package__).joinpath("report.schema.json").read_text())
