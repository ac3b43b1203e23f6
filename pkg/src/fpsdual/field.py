"""Coefficient fields: exact rationals, prime residues and binary64 reals.

A :class:`FieldValue` carries its :class:`Field`; a :class:`FieldDescriptor`
adds the field topology that every convergence decision consults through
:func:`near`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


class FieldError(ValueError):
    """Arithmetic between values of different fields, or a bad literal."""


class DivisionByZero(ZeroDivisionError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


class Field:
    """One of Q, F_p or R64.  Instances are interned: compare with ``is``."""

    __slots__ = ("kind", "p", "name")

    def __init__(self, kind: str, p: int | None = None):
        self.kind = kind
        self.p = p
        self.name = f"F{p}" if kind == "F" else kind

    @property
    def exact(self) -> bool:
        return self.kind != "R64"

    def __repr__(self):
        return f"Field({self.name})"

    def __reduce__(self):
        return (field_by_name, (self.name,))

    def __call__(self, value) -> FieldValue:
        """Coerce an int, Fraction, float or literal string into this field."""
        if isinstance(value, FieldValue):
            if value.field is not self:
                raise FieldError(f"{value!r} is not in {self.name}")
            return value
        if isinstance(value, str):
            return parse_value(value, self)
        if self.kind == "Q":
            if isinstance(value, float):
                raise FieldError("refusing to coerce a float into Q")
            return FieldValue(self, Fraction(value))
        if self.kind == "F":
            if isinstance(value, Fraction):
                num, den = value.numerator % self.p, value.denominator % self.p
                if den == 0:
                    raise DivisionByZero(f"denominator vanishes mod {self.p}")
                return FieldValue(self, num * pow(den, -1, self.p) % self.p)
            if isinstance(value, float):
                raise FieldError("refusing to coerce a float into F_p")
            return FieldValue(self, int(value) % self.p)
        return FieldValue(self, float(value))

    @property
    def zero(self) -> FieldValue:
        return _ZEROS[self]

    @property
    def one(self) -> FieldValue:
        return _ONES[self]


class _ConstCache(dict):
    def __init__(self, raw):
        super().__init__()
        self._raw = raw

    def __missing__(self, field):
        v = FieldValue(field, field(self._raw).v)
        self[field] = v
        return v


_ZEROS = _ConstCache(0)
_ONES = _ConstCache(1)

Q = Field("Q")
R64 = Field("R64")


@lru_cache(maxsize=None)
def Fp(p: int) -> Field:
    if not _is_prime(p):
        raise FieldError(f"{p} is not prime")
    return Field("F", p)


def field_by_name(name: str) -> Field:
    """``"Q"``, ``"F7"``, ``"R64"`` (``"R"`` accepted) to a :class:`Field`."""
    if name == "Q":
        return Q
    if name in ("R", "R64"):
        return R64
    if name.startswith("F") and name[1:].isdigit():
        return Fp(int(name[1:]))
    raise FieldError(f"unknown field {name!r}")


class FieldValue:
    """An element of a coefficient field.

    ``v`` is a :class:`~fractions.Fraction` over Q, an int in ``[0, p)`` over
    F_p and a float over R64.
    """

    __slots__ = ("field", "v")

    def __init__(self, field: Field, v):
        self.field = field
        self.v = v

    def _other(self, other):
        if isinstance(other, FieldValue):
            if other.field is not self.field:
                raise FieldError(
                    f"field mismatch: {self.field.name} vs {other.field.name}"
                )
            return other.v
        if isinstance(other, int):
            return self.field(other).v
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        if self.field.kind == "F":
            return FieldValue(self.field, (self.v + o) % self.field.p)
        return FieldValue(self.field, self.v + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        if self.field.kind == "F":
            return FieldValue(self.field, (self.v - o) % self.field.p)
        return FieldValue(self.field, self.v - o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        if self.field.kind == "F":
            return FieldValue(self.field, (self.v * o) % self.field.p)
        return FieldValue(self.field, self.v * o)

    __rmul__ = __mul__

    def __neg__(self):
        if self.field.kind == "F":
            return FieldValue(self.field, -self.v % self.field.p)
        return FieldValue(self.field, -self.v)

    def __truediv__(self, other):
        if isinstance(other, int):
            other = self.field(other)
        return self * inv(other)

    def __bool__(self):
        return self.v != 0

    def __eq__(self, other):
        if isinstance(other, FieldValue):
            return self.field is other.field and self.v == other.v
        if isinstance(other, int):
            return self == self.field(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.name, self.v))

    def __repr__(self):
        return f"{self.field.name}:{format_value(self)}"

    def __str__(self):
        return format_value(self)

    def __abs__(self) -> float:
        """Archimedean absolute value as a float."""
        if self.field.kind == "F":
            raise FieldError("F_p has no archimedean absolute value")
        return abs(float(self.v))


def arith(a: FieldValue, op: str, b: FieldValue) -> FieldValue:
    if a.field is not b.field:
        raise FieldError(f"field mismatch: {a.field.name} vs {b.field.name}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def inv(a: FieldValue) -> FieldValue:
    if not a:
        raise DivisionByZero(f"{a!r} has no inverse")
    f = a.field
    if f.kind == "Q":
        return FieldValue(f, 1 / a.v)
    if f.kind == "F":
        return FieldValue(f, pow(a.v, -1, f.p))
    return FieldValue(f, 1.0 / a.v)


def padic_valuation(x: Fraction | int, p: int) -> float:
    """v_p of a rational, by repeated division; ``math.inf`` for zero."""
    x = Fraction(x)
    if x == 0:
        return math.inf

    def v(n):
        n = abs(n)
        k = 0
        while n % p == 0:
            n //= p
            k += 1
        return k

    return v(x.numerator) - v(x.denominator)


TOPOLOGIES = ("discrete", "archimedean", "padic", "indiscrete")

DEFAULT_EPSILON = 1e-9


@dataclass(frozen=True)
class FieldDescriptor:
    """A field together with the topology in force on it.

    ``epsilon`` is used by ``archimedean``; ``p`` and ``k`` by ``padic``
    (neighbourhood of zero: ``v_p(x) >= k``).
    """

    field: Field
    topology: str = "discrete"
    epsilon: float | None = None
    p: int | None = None
    k: int | None = None

    def __post_init__(self):
        t = self.topology
        if t not in TOPOLOGIES:
            raise FieldError(f"unknown topology {t!r}")
        if t == "discrete" and not self.field.exact:
            raise FieldError("discrete topology requires an exact field")
        if t == "archimedean":
            if self.field is not R64:
                raise FieldError("archimedean topology requires R64")
            if self.epsilon is None:
                object.__setattr__(self, "epsilon", DEFAULT_EPSILON)
            if not self.epsilon > 0:
                raise FieldError("epsilon must be positive")
        if t == "padic":
            if self.field is not Q:
                raise FieldError("p-adic topology requires Q")
            if self.p is None or not _is_prime(self.p):
                raise FieldError(f"p-adic topology needs a prime, got {self.p}")
            if self.k is None or self.k < 1:
                raise FieldError("p-adic threshold k must be a positive integer")

    @property
    def hausdorff(self) -> bool:
        return self.topology != "indiscrete"

    @property
    def metric(self) -> bool:
        return self.topology in ("archimedean", "padic")

    def __str__(self):
        t = self.topology
        if t == "archimedean":
            tail = f"arch:{self.epsilon!r}"
        elif t == "padic":
            tail = f"padic:{self.p}:{self.k}"
        else:
            tail = t
        return f"{self.field.name}/{tail}"


def discrete(field: Field) -> FieldDescriptor:
    return FieldDescriptor(field, "discrete")


def default_descriptor(field: Field) -> FieldDescriptor:
    if field.exact:
        return FieldDescriptor(field, "discrete")
    return FieldDescriptor(field, "archimedean", DEFAULT_EPSILON)


def near(a: FieldValue, b: FieldValue, d: FieldDescriptor) -> bool:
    """Whether ``a - b`` lies in the reference zero-neighbourhood of ``d``."""
    t = d.topology
    if t == "indiscrete":
        return True
    if t == "discrete":
        return a.v == b.v
    if t == "archimedean":
        return abs(a.v - b.v) < d.epsilon
    return padic_valuation(a.v - b.v, d.p) >= d.k


# --- text syntax -----------------------------------------------------------


def format_value(a: FieldValue) -> str:
    if a.field.kind == "R64":
        return repr(a.v)
    return str(a.v)


def format_tagged(a: FieldValue) -> str:
    """``Q:3/4``, ``F7:3`` or ``R:0.5``."""
    tag = "R" if a.field is R64 else a.field.name
    return f"{tag}:{format_value(a)}"


def parse_value(text: str, field: Field | None = None) -> FieldValue:
    """Parse ``"Q:3/4"``, ``"F7:3"``, ``"R:0.5"``, or an untagged literal in
    ``field``."""
    text = text.strip()
    if ":" in text:
        tag, _, body = text.partition(":")
        tagged = field_by_name(tag)
        if field is not None and tagged is not field:
            raise FieldError(f"{text!r} is not a {field.name} literal")
        field = tagged
    else:
        body = text
    if field is None:
        raise FieldError(f"untagged literal {text!r} needs a field")
    body = body.strip()
    try:
        if field.kind == "R64":
            return FieldValue(field, float(body))
        num, slash, den = body.partition("/")
        if not _is_int_literal(num) or (slash and not _is_int_literal(den)):
            raise ValueError(body)
        q = Fraction(int(num), int(den) if slash else 1)
    except (ValueError, ZeroDivisionError):
        raise FieldError(f"malformed {field.name} literal {text!r}") from None
    return field(q)


def _is_int_literal(s: str) -> bool:
    s = s.strip()
    if s[:1] in "+-":
        s = s[1:]
    return s.isdigit()


def parse_descriptor(text: str) -> FieldDescriptor:
    """``"Q/discrete"``, ``"Q/padic:5:3"``, ``"R64/arch:1e-9"``, ``"Q/indiscrete"``."""
    fname, slash, topo = text.partition("/")
    if not slash:
        raise FieldError(f"descriptor {text!r} lacks a topology")
    return descriptor_for(field_by_name(fname), topo)


def descriptor_for(field: Field, topology: str | None) -> FieldDescriptor:
    """Build a descriptor from a field and a topology flag such as
    ``arch:1e-9`` or ``padic:5:3``; ``None`` picks the field's default."""
    if topology is None:
        return default_descriptor(field)
    name, *args = topology.split(":")
    try:
        if name == "discrete" and not args:
            return FieldDescriptor(field, "discrete")
        if name == "indiscrete" and not args:
            return FieldDescriptor(field, "indiscrete")
        if name in ("arch", "archimedean") and len(args) <= 1:
            eps = float(args[0]) if args else DEFAULT_EPSILON
            return FieldDescriptor(field, "archimedean", epsilon=eps)
        if name == "padic" and len(args) == 2:
            return FieldDescriptor(field, "padic", p=int(args[0]), k=int(args[1]))
    except ValueError as exc:
        raise FieldError(f"bad topology {topology!r}: {exc}") from None
    raise FieldError(f"bad topology {topology!r}")
