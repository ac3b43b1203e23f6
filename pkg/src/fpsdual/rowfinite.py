"""Row-finite matrices Y x (X) -> K as continuous linear maps K^X -> K^Y."""

from __future__ import annotations

import json
from typing import Callable, Mapping

from .duality import DualProbeReport, probe_report
from .field import Field, FieldError, field_by_name, format_value
from .monoid import IndexSpace
from .poly import dirac
from .series import Series, embed


class RowFiniteMatrix:
    """A matrix whose every row has finitely many nonzero entries.

    Either finite (``rows`` given: unstored rows are zero) or lazy (``rule``
    maps a target index to its row entries).  Rows are normalised once and
    cached: canonical source order, no zeros, no repeated columns.
    """

    def __init__(
        self,
        source: IndexSpace,
        target: IndexSpace,
        field: Field,
        rows: Mapping | None = None,
        *,
        rule: Callable | None = None,
        name: str | None = None,
    ):
        if (rows is None) == (rule is None):
            raise ValueError("give exactly one of rows or rule")
        self.source = source
        self.target = target
        self.field = field
        self.name = name
        self._cache: dict = {}
        self._rows = None
        if rows is not None:
            normal = {}
            for y, entries in rows.items():
                y = target.check(y)
                r = self._normalise(entries)
                if r:
                    normal[y] = r
            self._rows = {y: normal[y] for y in sorted(normal, key=target.key)}
            self._cache.update(self._rows)
        self._rule = rule

    def _normalise(self, entries) -> tuple:
        acc: dict = {}
        items = entries.items() if isinstance(entries, Mapping) else entries
        for x, c in items:
            x = self.source.check(x)
            c = self.field(c)
            acc[x] = acc[x] + c if x in acc else c
        return tuple((x, acc[x]) for x in sorted(acc, key=self.source.key) if acc[x])

    @property
    def finite(self) -> bool:
        return self._rows is not None

    def row(self, y) -> tuple:
        try:
            return self._cache[y]
        except KeyError:
            pass
        y = self.target.check(y)
        r = () if self._rows is not None else self._normalise(self._rule(y))
        return self._cache.setdefault(y, r)

    def __getitem__(self, yx):
        y, x = yx
        for xx, c in self.row(y):
            if xx == x:
                return c
        return self.field.zero

    def stored_rows(self) -> dict:
        if self._rows is None:
            raise ValueError("a lazy matrix has no finite row list")
        return dict(self._rows)

    def prefix(self, hy: int) -> dict:
        """Nonzero rows among the first ``hy`` target indices."""
        out = {}
        for y in self.target.enumerate(hy):
            r = self.row(y)
            if r:
                out[y] = r
        return out

    def __eq__(self, other):
        if not isinstance(other, RowFiniteMatrix):
            return NotImplemented
        if not (self.finite and other.finite):
            raise ValueError("only finite matrices compare by equality; compare prefixes")
        return (
            self.source == other.source
            and self.target == other.target
            and self.field is other.field
            and self._rows == other._rows
        )

    __hash__ = None

    def __repr__(self):
        kind = f"{len(self._rows)} rows" if self.finite else (self.name or "lazy")
        return f"<RowFiniteMatrix {kind} over {self.field.name}>"


# --- named generators ----------------------------------------------------------


def identity(space: IndexSpace, field: Field) -> RowFiniteMatrix:
    one = field.one
    return RowFiniteMatrix(space, space, field, rule=lambda y: [(y, one)], name="identity")


def shift(k: int, field: Field) -> RowFiniteMatrix:
    """On the naturals: M(n, n + k) = 1, so apply(M, f)(n) = f(n + k)."""
    if k < 0:
        raise ValueError("shift amount must be non-negative")
    nat = IndexSpace.naturals()
    one = field.one
    return RowFiniteMatrix(nat, nat, field, rule=lambda n: [(n + k, one)], name=f"shift({k})")


def diagonal(f: Series) -> RowFiniteMatrix:
    return RowFiniteMatrix(
        f.space, f.space, f.field, rule=lambda y: [(y, f.coeff(y))], name="diagonal"
    )


def banded(width: int, entry: Callable, field: Field) -> RowFiniteMatrix:
    """On the naturals: M(n, m) = entry(n, m) for |n - m| <= width."""
    nat = IndexSpace.naturals()
    return RowFiniteMatrix(
        nat,
        nat,
        field,
        rule=lambda n: [(m, entry(n, m)) for m in range(max(0, n - width), n + width + 1)],
        name=f"banded({width})",
    )


# --- operations -------------------------------------------------------------------


def apply(m: RowFiniteMatrix, f: Series) -> Series:
    """psi_M(f): y -> sum over row y of M(y, x) f(x)."""
    if f.field is not m.field:
        raise FieldError("matrix and series fields differ")
    if f.space != m.source:
        raise ValueError("series does not live on the matrix's source space")
    z = m.field.zero
    fc = f.coeff

    def rule(y):
        acc = z
        for x, c in m.row(y):
            acc = acc + c * fc(x)
        return acc

    return Series(m.target, m.field, rule, label=f"M·{f.label}")


def compose(n: RowFiniteMatrix, m: RowFiniteMatrix) -> RowFiniteMatrix:
    """The matrix of psi_N ∘ psi_M: (NM)(z, x) = sum_y N(z, y) M(y, x)."""
    if m.target != n.source:
        raise ValueError("target of the right factor must be the source of the left")
    if m.field is not n.field:
        raise FieldError("matrix fields differ")

    def rule(zi):
        acc: dict = {}
        for y, a in n.row(zi):
            for x, b in m.row(y):
                acc[x] = acc[x] + a * b if x in acc else a * b
        return acc

    if n.finite:
        rows = {zi: rule(zi) for zi in n.stored_rows()}
        return RowFiniteMatrix(m.source, n.target, m.field, rows)
    return RowFiniteMatrix(m.source, n.target, m.field, rule=rule, name="composite")


def extract_matrix(
    op: Callable[[Series], Series],
    source: IndexSpace,
    target: IndexSpace,
    field: Field,
    hy: int,
    hx: int,
) -> tuple[RowFiniteMatrix, dict]:
    """M(y, x) = <δ_y, op(δ_x)> on the first ``hy`` x ``hx`` indices.

    Returns the finite matrix and, per probed target index, the probe report
    of its row (exhausted when the row has no entry in the second half of the
    source range).
    """
    if hy < 1 or hx < 1:
        raise ValueError("horizons must be at least 1")
    xs = source.enumerate(hx)
    ys = target.enumerate(hy)
    columns = [op(embed(dirac(source, field, x))) for x in xs]
    for col in columns:
        if col.field is not field or col.space != target:
            raise ValueError("operator output is not a series on the target space")
    reports: dict[object, DualProbeReport] = {}
    rows = {}
    for y in ys:
        values = [(x, col.coeff(y)) for x, col in zip(xs, columns)]
        reports[y] = probe_report(values)
        rows[y] = reports[y].detected_support
    return RowFiniteMatrix(source, target, field, rows), reports


# --- JSON record ------------------------------------------------------------------


def to_record(m: RowFiniteMatrix, hy: int | None = None) -> dict:
    rows = m.stored_rows() if hy is None else m.prefix(hy)
    return {
        "source": m.source.describe(),
        "target": m.target.describe(),
        "field": m.field.name,
        "rows": [
            {
                "y": m.target.format_index(y),
                "entries": [
                    {"x": m.source.format_index(x), "coeff": format_value(c)} for x, c in r
                ],
            }
            for y, r in rows.items()
        ],
    }


def dumps(m: RowFiniteMatrix, hy: int | None = None) -> str:
    return json.dumps(to_record(m, hy), ensure_ascii=False)


def from_record(record: Mapping) -> RowFiniteMatrix:
    try:
        source = IndexSpace.from_description(record["source"])
        target = IndexSpace.from_description(record["target"])
        field = field_by_name(record["field"])
        raw = record["rows"]
        rows = {}
        for r in raw:
            y = target.parse_index(r["y"])
            if y in rows:
                raise ValueError(f"repeated row {r['y']!r}")
            entries = [(source.parse_index(e["x"]), field(str(e["coeff"]))) for e in r["entries"]]
            rows[y] = entries
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix record: {exc!r}") from None
    return RowFiniteMatrix(source, target, field, rows)


def loads(text: str) -> RowFiniteMatrix:
    return from_record(json.loads(text))
