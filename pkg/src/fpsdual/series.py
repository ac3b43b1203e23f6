"""The space K^X of total maps, as lazily evaluated coefficient oracles.

Besides pointwise linear structure this module provides, over free monoids,
the Cauchy product, the star operation and the order function, and for any
index space the horizon-bounded summability engine :func:`sum_family`.
"""

from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass, field as dc_field
from itertools import islice
from typing import Callable, Iterable

from .field import (
    Field,
    FieldDescriptor,
    FieldError,
    FieldValue,
    discrete,
    near,
)
from .monoid import EMPTY, IndexSpace, Word
from .poly import Polynomial, dirac

DEFAULT_FAMILY_HORIZON = 256
DEFAULT_COORDINATE_HORIZON = 128
DEFAULT_DEGREE = 8


class StarUndefined(ArithmeticError):
    """star(f) requested for a series with a nonzero constant term."""


class UnsupportedSpace(ValueError):
    """Operation needs a free monoid but got the naturals (or vice versa)."""


class Series:
    """A map from ``space`` to ``field`` given by a pure coefficient rule.

    ``poly`` is set when the series is known to be finitely supported; the
    coefficient rule then just reads the polynomial, and products, sums and
    valuations use the support directly.
    """

    __slots__ = ("space", "field", "poly", "label", "_rule", "_memo", "__weakref__")

    def __init__(
        self,
        space: IndexSpace,
        field: Field,
        rule: Callable,
        *,
        poly: Polynomial | None = None,
        label: str | None = None,
    ):
        self.space = space
        self.field = field
        self.poly = poly
        self.label = label
        self._rule = rule
        self._memo: dict = {}

    def coeff(self, x) -> FieldValue:
        try:
            return self._memo[x]
        except KeyError:
            pass
        if not self.space.contains(x):
            raise ValueError(f"{x!r} is not an index of {self.space!r}")
        v = self._rule(x)
        # setdefault keeps the first stored value if two threads race
        return self._memo.setdefault(x, v)

    __getitem__ = coeff

    def __repr__(self):
        return f"<Series {self.label or '?'} over {self.field.name}>"

    def __add__(self, other):
        return lin(self.field.one, self, other)

    def __sub__(self, other):
        return lin(-self.field.one, other, self)

    def __neg__(self):
        return scale(-self.field.one, self)

    def __mul__(self, other):
        if isinstance(other, Series):
            return cauchy_product(self, other)
        return scale(self.field(other), self)

    def __rmul__(self, alpha):
        return scale(self.field(alpha), self)


def coeff(f: Series, x) -> FieldValue:
    return f.coeff(x)


def _check_same(f: Series, g: Series):
    if f.field is not g.field:
        raise FieldError(f"field mismatch: {f.field.name} vs {g.field.name}")
    if f.space != g.space:
        raise UnsupportedSpace(f"space mismatch: {f.space!r} vs {g.space!r}")


# --- constructors ------------------------------------------------------------


def embed(p: Polynomial) -> Series:
    """The series agreeing with ``p`` everywhere (the inclusion K^(X) -> K^X)."""
    return Series(p.space, p.field, p.__getitem__, poly=p, label=repr(p))


def zero(space: IndexSpace, field: Field) -> Series:
    return embed(Polynomial.zero(space, field))


def one(space: IndexSpace, field: Field) -> Series:
    return embed(dirac(space, field, space.unit))


def letter(space: IndexSpace, field: Field, a: str) -> Series:
    if not space.is_free:
        raise UnsupportedSpace("letters live in a free monoid")
    return embed(dirac(space, field, Word((a,))))


def geometric(space: IndexSpace, field: Field) -> Series:
    """star of the first letter of the alphabet."""
    if not space.is_free or not space.alphabet:
        raise UnsupportedSpace("geometric needs a non-empty alphabet")
    return star(letter(space, field, space.alphabet[0]))


def ones(field: Field, space: IndexSpace | None = None) -> Series:
    """The series with every coefficient 1 (on the naturals by default)."""
    space = space or IndexSpace.naturals()
    unit = field.one
    return Series(space, field, lambda x: unit, label="ones")


def from_function(space: IndexSpace, field: Field, fn: Callable, label=None) -> Series:
    """Wrap an arbitrary coefficient function; values are coerced into ``field``."""
    return Series(space, field, lambda x: field(fn(x)), label=label)


def scale(alpha: FieldValue, f: Series) -> Series:
    return lin(alpha, f, zero(f.space, f.field))


def lin(alpha: FieldValue, f: Series, g: Series) -> Series:
    """``alpha * f + g`` pointwise."""
    _check_same(f, g)
    if alpha.field is not f.field:
        raise FieldError("scalar from a different field")
    if f.poly is not None and g.poly is not None:
        from .poly import lin as plin

        return embed(plin(alpha, f.poly, g.poly))
    fc, gc = f.coeff, g.coeff
    return Series(
        f.space,
        f.field,
        lambda x: alpha * fc(x) + gc(x),
        label=f"({alpha}·{f.label} + {g.label})",
    )


def sum_series(members: list[Series], space: IndexSpace, field: Field) -> Series:
    """Pointwise sum of a finite list of series."""
    if all(m.poly is not None for m in members):
        terms: dict = {}
        for m in members:
            for x, c in m.poly.items():
                terms[x] = terms[x] + c if x in terms else c
        return embed(Polynomial(space, field, terms))
    z = field.zero

    def rule(x):
        acc = z
        for m in members:
            acc = acc + m.coeff(x)
        return acc

    return Series(space, field, rule, label=f"sum of {len(members)}")


# --- free monoid algebra -----------------------------------------------------


def _require_free(f: Series):
    if not f.space.is_free:
        raise UnsupportedSpace("operation needs a free-monoid index space")


def _by_length(p: Polynomial) -> list[tuple[int, dict]]:
    groups: dict[int, dict] = {}
    for u, c in p.items():
        groups.setdefault(len(u), {})[tuple(u)] = c
    return sorted(groups.items())


def cauchy_product(f: Series, g: Series, *, expand: bool = True) -> Series:
    """(f·g)(w) = sum over w = uv of f(u) g(v).

    Two finitely supported factors are multiplied out into a polynomial
    unless ``expand`` is false.
    """
    _check_same(f, g)
    _require_free(f)
    z = f.field.zero
    if expand and f.poly is not None and g.poly is not None:
        terms: dict = {}
        for u, a in f.poly.items():
            for v, b in g.poly.items():
                w = tuple(u) + tuple(v)
                terms[w] = terms[w] + a * b if w in terms else a * b
        return embed(Polynomial(f.space, f.field, terms))
    gc = g.coeff
    if f.poly is not None:
        groups = _by_length(f.poly)

        def rule(w):
            t = tuple(w)
            acc = z
            for n, terms in groups:
                if n > len(t):
                    break
                a = terms.get(t[:n])
                if a is not None:
                    acc = acc + a * gc(t[n:])
            return acc

    else:
        fc = f.coeff

        def rule(w):
            t = tuple(w)
            acc = z
            for i in range(len(t) + 1):
                a = fc(t[:i])
                if a:
                    acc = acc + a * gc(t[i:])
            return acc

    return Series(f.space, f.field, rule, label=f"({f.label})·({g.label})")


def star(f: Series) -> Series:
    """f* = sum of the powers f^k; needs f(ε) = 0.

    At a word w only the powers k <= |w| can contribute.  The powers are built
    incrementally as f^(k+1) = f·f^k and share their coefficient caches.
    """
    _require_free(f)
    if f.coeff(EMPTY):
        raise StarUndefined(f"star of a series with constant term {f.coeff(EMPTY)}")
    powers = [one(f.space, f.field), f]
    lock = threading.Lock()

    def power(k):
        if k >= len(powers):
            with lock:
                while len(powers) <= k:
                    powers.append(cauchy_product(f, powers[-1], expand=False))
        return powers[k]

    z = f.field.zero

    def rule(w):
        acc = z
        for k in range(len(w) + 1):
            acc = acc + power(k).coeff(w)
        return acc

    return Series(f.space, f.field, rule, label=f"({f.label})*")


class _AboveHorizon:
    """Valuation not reached within the scanned degrees (or the zero series)."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "AboveHorizon"

    def __reduce__(self):
        return (_AboveHorizon, ())


ABOVE_HORIZON = _AboveHorizon()


def valuation(f: Series, degree: int = DEFAULT_DEGREE):
    """Least word length <= ``degree`` carrying a nonzero coefficient."""
    _require_free(f)
    if f.poly is not None:
        best = min((len(w) for w in f.poly), default=math.inf)
        return best if best <= degree else ABOVE_HORIZON
    for n in range(degree + 1):
        for w in f.space.words_of_length(n):
            if f.coeff(w):
                return n
    return ABOVE_HORIZON


# --- summability -------------------------------------------------------------


class Status(str, enum.Enum):
    CONVERGED_EXACTLY = "ConvergedExactly"
    CONVERGED_WITHIN_TOLERANCE = "ConvergedWithinTolerance"
    DIVERGENT_AT_HORIZON = "DivergentAtHorizon"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self):
        return self.value

    @property
    def converged(self) -> bool:
        return self in (Status.CONVERGED_EXACTLY, Status.CONVERGED_WITHIN_TOLERANCE)


@dataclass(frozen=True)
class Topology:
    """Topology on K^X: ``product`` over a field descriptor, or ``krull``."""

    kind: str
    descriptor: FieldDescriptor | None = None

    @classmethod
    def product(cls, d: FieldDescriptor) -> Topology:
        return cls("product", d)

    @classmethod
    def krull(cls) -> Topology:
        return cls("krull")

    def __post_init__(self):
        if self.kind not in ("product", "krull"):
            raise ValueError(f"unknown series topology {self.kind!r}")
        if self.kind == "product" and self.descriptor is None:
            raise ValueError("product topology needs a field descriptor")

    def __str__(self):
        return "krull" if self.kind == "krull" else f"product({self.descriptor})"


@dataclass
class Verdict:
    status: Status
    witness: dict = dc_field(default_factory=dict)

    @property
    def converged(self) -> bool:
        return self.status.converged


def window_size(n: int) -> int:
    """Length of the tail window that must be stable: ceil(n / 4)."""
    return max(1, -(-n // 4))


@dataclass
class CoordinateJudgement:
    stable: bool
    divergent: bool
    last_change: int
    offending: list[int]


def judge_increments(
    increments: list[tuple[int, FieldValue]],
    n: int,
    d: FieldDescriptor,
    zero: FieldValue,
) -> CoordinateJudgement:
    """Decide stabilisation of one scalar partial-sum sequence.

    ``increments`` are the nonzero terms ``(k, value)`` with members numbered
    from 1; the partial sums are S_0 = 0, ..., S_n.  The sequence is stable
    when the last ceil(n/4) partial sums are pairwise near under ``d``.  An
    unstable sequence counts as divergent when at least two increments in the
    window are not near zero and one of them falls in the window's second half.
    """
    last_change = max((k for k, _ in increments), default=0)
    if d.topology == "indiscrete":
        return CoordinateJudgement(True, False, last_change, [])
    w = window_size(n)
    start = n - w + 1
    base = zero
    inside = []
    for k, v in increments:
        if k <= start:
            base = base + v
        else:
            inside.append((k, v))
    if not inside:
        return CoordinateJudgement(True, False, last_change, [])
    stable = False
    if d.topology != "discrete":
        sums = [base]
        for _, v in inside:
            sums.append(sums[-1] + v)
        stable = all(
            near(a, b, d) for i, a in enumerate(sums) for b in sums[i + 1 :]
        )
    if stable:
        return CoordinateJudgement(True, False, last_change, [])
    offending = [k for k, v in inside if not near(v, zero, d)]
    divergent = len(offending) >= 2 and offending[-1] > n - w / 2
    return CoordinateJudgement(False, divergent, last_change, offending)


def _increments(members, coords, coord_set):
    """Per-coordinate lists of (member number, nonzero value)."""
    incs = {c: [] for c in coords}
    for k, m in enumerate(members, start=1):
        if m.poly is not None:
            for x, v in m.poly.items():
                if x in coord_set:
                    incs[coord_set[x]].append((k, v))
        else:
            for c in coords:
                v = m.coeff(c)
                if v:
                    incs[c].append((k, v))
    return incs


def sum_family(
    family: Iterable[Series],
    topology: Topology,
    n: int = DEFAULT_FAMILY_HORIZON,
    c: int = DEFAULT_COORDINATE_HORIZON,
    *,
    space: IndexSpace | None = None,
    field: Field | None = None,
) -> tuple[Verdict, Series]:
    """Horizon-bounded summability verdict for a family of series.

    Takes the first ``n`` members of ``family`` and probes the first ``c``
    coordinates of the index space.  Returns the verdict and the partial sum
    of those members.  ``space``/``field`` are needed only for an empty family.
    """
    if n < 1 or c < 1:
        raise ValueError("horizons must be at least 1")
    members = list(islice(family, n))
    if members:
        space = space or members[0].space
        field = field or members[0].field
    if space is None or field is None:
        raise ValueError("empty family needs an explicit space and field")
    for m in members:
        if m.space != space or m.field is not field:
            raise FieldError("family members must share space and field")

    if topology.kind == "krull":
        if not space.is_free:
            raise UnsupportedSpace("the Krull topology needs a free monoid")
        d = discrete(field)
    else:
        d = topology.descriptor
        if d.field is not field:
            raise FieldError("descriptor field differs from the family's field")

    total = sum_series(members, space, field)
    w = window_size(n)
    witness = {"members": len(members), "window": w, "coordinates": c}

    if d.topology == "indiscrete":
        return Verdict(Status.CONVERGED_EXACTLY, witness), total

    if topology.kind == "krull":
        # members in the tail window must all have valuation >= c
        trace = [valuation(m, c - 1) for m in members]
        low = [
            (k, v)
            for k, v in enumerate(trace, start=1)
            if k > n - w + 1 and v is not ABOVE_HORIZON
        ]
        witness["valuations"] = [None if v is ABOVE_HORIZON else v for v in trace]
        if low:
            witness["offending_members"] = [k for k, _ in low]
            return Verdict(Status.DIVERGENT_AT_HORIZON, witness), total

    coords = space.enumerate(c)
    coord_set = {x: x for x in coords}
    incs = _increments(members, coords, coord_set)
    z = field.zero
    last_change = {}
    unstable = {}
    divergent = False
    for x in coords:
        j = judge_increments(incs[x], n, d, z)
        if j.stable:
            last_change[space.format_index(x)] = j.last_change
        else:
            unstable[space.format_index(x)] = j.offending
            divergent = divergent or j.divergent
    if not unstable:
        witness["last_change"] = last_change
        status = Status.CONVERGED_WITHIN_TOLERANCE if d.metric else Status.CONVERGED_EXACTLY
        return Verdict(status, witness), total
    witness["unstable"] = unstable
    status = Status.DIVERGENT_AT_HORIZON if divergent else Status.INCONCLUSIVE
    return Verdict(status, witness), total


def dirac_decomposition(f: Series) -> Iterable[Series]:
    """The family (f(x) δ_x) over the canonical enumeration of f's space."""
    for x in f.space.iter_indices():
        yield embed(Polynomial(f.space, f.field, [(x, f.coeff(x))]))


def alphabet_family(n: int, field: Field) -> tuple[IndexSpace, list[Series]]:
    """n distinct letters as separate members, over a fresh n-letter alphabet."""
    from .monoid import letters_alphabet

    space = IndexSpace.free(letters_alphabet(n))
    return space, [letter(space, field, a) for a in space.alphabet]
