"""Linear functionals on K^X: pairings, black boxes, extraction by Dirac probes,
extension from polynomials, and continuity moduli of pairings."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field as dc_field
from itertools import islice
from typing import Callable

from .field import Field, FieldDescriptor, FieldError, FieldValue, default_descriptor
from .monoid import IndexSpace
from .poly import Polynomial, dirac, pair
from .series import Series, Verdict, Status, embed, judge_increments, window_size


class Functional:
    """A linear form on series over ``space`` with values in ``field``."""

    space: IndexSpace
    field: Field

    def __call__(self, f: Series) -> FieldValue:  # pragma: no cover - abstract
        raise NotImplementedError


class Pairing(Functional):
    """f -> <p, f>."""

    def __init__(self, p: Polynomial):
        self.p = p
        self.space = p.space
        self.field = p.field

    def __call__(self, f):
        return pair(self.p, f)

    def __repr__(self):
        return f"Pairing({self.p!r})"


class BlackBox(Functional):
    """An opaque oracle, declared linear; it can only be probed."""

    def __init__(self, space: IndexSpace, field: Field, oracle: Callable, name="blackbox"):
        self.space = space
        self.field = field
        self._oracle = oracle
        self.name = name

    def __call__(self, f):
        if f.field is not self.field or f.space != self.space:
            raise FieldError("functional applied to a series of another space/field")
        return self.field(self._oracle(f))

    def __repr__(self):
        return f"BlackBox({self.name})"


def phi(p: Polynomial) -> Pairing:
    return Pairing(p)


def ones_on_diracs(space: IndexSpace, field: Field) -> BlackBox:
    """The linear form taking the value 1 on every Dirac mass.

    It is only evaluable on finitely supported series (sum of coefficients);
    any extension to all of K^X would need a Hamel basis.
    """

    def oracle(f: Series):
        if f.poly is None:
            raise ValueError("ones-on-diracs is only evaluable on finitely supported series")
        acc = field.zero
        for _, c in f.poly.items():
            acc = acc + c
        return acc

    return BlackBox(space, field, oracle, name="ones-on-diracs")


def projection(space: IndexSpace, field: Field, x) -> BlackBox:
    x = space.check(x)
    return BlackBox(space, field, lambda f: f.coeff(x), name=f"projection:{space.format_index(x)}")


@dataclass
class DualProbeReport:
    probed: int
    detected_support: dict = dc_field(default_factory=dict)
    exhausted: bool = True

    def to_record(self, space: IndexSpace) -> dict:
        return {
            "probed": self.probed,
            "exhausted": self.exhausted,
            "detected_support": [
                {"index": space.format_index(x), "coeff": str(v)}
                for x, v in self.detected_support.items()
            ],
        }


def probe_report(values: list[tuple[object, FieldValue]]) -> DualProbeReport:
    """Report for probe results taken over a canonical index prefix.

    Exhausted means no nonzero value in the second half of the probed range.
    """
    h = len(values)
    found = {x: v for x, v in values if v}
    tail_start = h // 2
    exhausted = not any(v for _, v in values[tail_start:])
    return DualProbeReport(h, found, exhausted)


def extract_poly(ell: Functional, h: int) -> tuple[Polynomial, DualProbeReport]:
    """Recover p with ell = <p, ·> from the values ell(δ_x) on the first h indices."""
    if h < 1:
        raise ValueError("probe horizon must be at least 1")
    space, field = ell.space, ell.field
    xs = space.enumerate(h)
    values = [(x, ell(embed(dirac(space, field, x)))) for x in xs]
    report = probe_report(values)
    return Polynomial(space, field, report.detected_support), report


def complete_extend(
    ell: Functional,
    f: Series,
    c: int,
    descriptor: FieldDescriptor | None = None,
) -> tuple[FieldValue, Verdict]:
    """Evaluate the extension of ``ell`` (known on polynomials) at ``f``.

    Partial sum over the first ``c`` indices of f(x) ell(δ_x), with a
    summability verdict for that scalar family under ``descriptor``.
    """
    if c < 1:
        raise ValueError("coordinate horizon must be at least 1")
    if f.field is not ell.field or f.space != ell.space:
        raise FieldError("functional and series live over different spaces/fields")
    d = descriptor or default_descriptor(f.field)
    if d.field is not f.field:
        raise FieldError("descriptor field differs from the series field")
    space, field = f.space, f.field
    z = field.zero
    acc = z
    increments = []
    for k, x in enumerate(islice(space.iter_indices(), c), start=1):
        fx = f.coeff(x)
        if not fx:
            continue
        term = fx * ell(embed(dirac(space, field, x)))
        if term:
            acc = acc + term
            increments.append((k, term))
    j = judge_increments(increments, c, d, z)
    witness = {"terms": c, "window": window_size(c), "last_change": j.last_change}
    if j.stable:
        if d.metric:
            status = Status.CONVERGED_WITHIN_TOLERANCE
        else:
            status = Status.CONVERGED_EXACTLY
    else:
        witness["offending"] = j.offending
        status = Status.DIVERGENT_AT_HORIZON if j.divergent else Status.INCONCLUSIVE
    return acc, Verdict(status, witness)


def restrict(ell: Functional) -> Callable[[Polynomial], FieldValue]:
    """ell composed with the embedding of polynomials into series."""
    return lambda q: ell(embed(q))


@dataclass
class Modulus:
    """How far <p, f> can move when f moves, for one field topology.

    For an archimedean descriptor ``bound`` is L = sum |p(x)| and
    |<p,f> - <p,g>| <= L * max over supp(p) of |f(x) - g(x)|.  For discrete
    and p-adic descriptors ``coordinates`` is the finite set on which
    agreement of f and g forces <p,f> = <p,g>.
    """

    descriptor: FieldDescriptor
    coordinates: list
    bound: float | None = None

    def holds(self, p: Polynomial, f: Series, g: Series) -> bool:
        diff = pair(p, f) - pair(p, g)
        if self.bound is not None:
            gap = max((abs(f.coeff(x) - g.coeff(x)) for x in self.coordinates), default=0.0)
            # float rounding of the two pairings
            slack = 4 * sys.float_info.epsilon * sum(
                abs(c) * (abs(f.coeff(x)) + abs(g.coeff(x))) for x, c in p.items()
            )
            return abs(diff) <= self.bound * gap + slack
        if all(f.coeff(x) == g.coeff(x) for x in self.coordinates):
            return not diff
        return True


def continuity_modulus(p: Polynomial, d: FieldDescriptor) -> Modulus:
    if not d.hausdorff:
        raise ValueError("continuity modulus needs a Hausdorff descriptor")
    if d.field is not p.field:
        raise FieldError("descriptor field differs from the polynomial's field")
    coords = list(p)
    if d.topology == "archimedean":
        return Modulus(d, coords, bound=sum((abs(c) for _, c in p.items()), 0.0))
    return Modulus(d, coords)
