"""Finitely supported maps X -> K, Dirac masses and the dual pairing."""

from __future__ import annotations

import json
from typing import TYPE_CHECKING, Iterable, Mapping

from .field import Field, FieldError, FieldValue, field_by_name, format_value
from .monoid import IndexSpace

if TYPE_CHECKING:
    from .series import Series


class Polynomial:
    """An element of K^(X).

    Terms are kept in canonical index order with zero coefficients pruned, so
    two polynomials are equal exactly when their term tuples are equal.
    """

    __slots__ = ("space", "field", "_terms", "_items")

    def __init__(self, space: IndexSpace, field: Field, terms: Mapping | Iterable = ()):
        self.space = space
        self.field = field
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for x, c in items:
            x = space.check(x)
            c = field(c)
            acc[x] = acc[x] + c if x in acc else c
        ordered = sorted((x for x, c in acc.items() if c), key=space.key)
        self._terms = {x: acc[x] for x in ordered}
        self._items = tuple(self._terms.items())

    @classmethod
    def zero(cls, space: IndexSpace, field: Field) -> Polynomial:
        return cls(space, field)

    def __getitem__(self, x) -> FieldValue:
        return self._terms.get(x, self.field.zero)

    def items(self):
        return self._items

    def __iter__(self):
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (
            self.field is other.field
            and self.space == other.space
            and self._items == other._items
        )

    def __hash__(self):
        return hash((self.field.name, self._items))

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = [
            f"{format_value(c)}·δ[{self.space.format_index(x) if x != () else 'ε'}]"
            for x, c in self._items
        ]
        return " + ".join(parts)

    def __add__(self, other):
        return lin(self.field.one, self, other)

    def __sub__(self, other):
        return lin(-self.field.one, other, self)

    def __rmul__(self, alpha):
        return lin(self.field(alpha), self, Polynomial.zero(self.space, self.field))

    def __neg__(self):
        return lin(-self.field.one, self, Polynomial.zero(self.space, self.field))


def dirac(space: IndexSpace, field: Field, x) -> Polynomial:
    return Polynomial(space, field, [(x, field.one)])


def support(p: Polynomial) -> list:
    return list(p)


def lin(alpha: FieldValue, p: Polynomial, q: Polynomial) -> Polynomial:
    """``alpha * p + q``."""
    if p.field is not q.field or alpha.field is not p.field:
        raise FieldError("field mismatch in linear combination")
    if p.space != q.space:
        raise ValueError("index space mismatch in linear combination")
    terms = dict(q.items())
    for x, c in p.items():
        v = alpha * c
        terms[x] = terms[x] + v if x in terms else v
    return Polynomial(p.space, p.field, terms)


def pair(p: Polynomial, f: Series):
    """The dual pairing <p, f> = sum over supp(p) of p(x) f(x)."""
    if p.field is not f.field:
        raise FieldError("field mismatch in pairing")
    if p.space != f.space:
        raise ValueError("index space mismatch in pairing")
    acc = p.field.zero
    for x, c in p.items():
        acc = acc + c * f.coeff(x)
    return acc


# --- JSON record -----------------------------------------------------------


def to_record(p: Polynomial) -> dict:
    return {
        "field": p.field.name,
        "terms": [
            {"index": p.space.format_index(x), "coeff": format_value(c)}
            for x, c in p.items()
        ],
    }


def dumps(p: Polynomial) -> str:
    return json.dumps(to_record(p), ensure_ascii=False)


def from_record(record: Mapping, space: IndexSpace) -> Polynomial:
    """Build a polynomial from ``{"field": ..., "terms": [...]}``.

    Indices are resolved in ``space``; a repeated index is rejected.
    """
    try:
        field = field_by_name(record["field"])
        raw = record["terms"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed polynomial record: missing {exc}") from None
    if not isinstance(raw, list):
        raise ValueError("malformed polynomial record: terms must be a list")
    seen = set()
    terms = []
    for t in raw:
        try:
            x = space.parse_index(t["index"])
            c = field(str(t["coeff"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed term {t!r}") from exc
        if x in seen:
            raise ValueError(f"repeated index {t['index']!r}")
        seen.add(x)
        terms.append((x, c))
    return Polynomial(space, field, terms)


def loads(text: str, space: IndexSpace) -> Polynomial:
    return from_record(json.loads(text), space)
