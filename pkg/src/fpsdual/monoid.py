"""Index spaces: free monoids over finite alphabets and the naturals."""

from __future__ import annotations

from itertools import combinations_with_replacement, count, islice, product
from typing import Iterator, Sequence


class IndexSpaceError(ValueError):
    """An index that does not belong to the space it is used in."""


class Word(tuple):
    """A word over some alphabet, stored as a tuple of letters.

    Plain tuples with the same letters compare and hash equal, so slices of a
    word can be used directly as dictionary keys.
    """

    __slots__ = ()

    def __new__(cls, letters: Sequence[str] = ()):
        return super().__new__(cls, letters)

    def __add__(self, other):
        return Word(tuple.__add__(self, other))

    def __getitem__(self, item):
        r = tuple.__getitem__(self, item)
        return Word(r) if isinstance(item, slice) else r

    def __str__(self):
        return "".join(self)

    def __repr__(self):
        return f"Word({''.join(self)!r})" if self else "Word(ε)"


EMPTY = Word()


def concat(u: Word, v: Word) -> Word:
    return Word(tuple(u) + tuple(v))


def length(w: Word) -> int:
    return len(w)


def factorizations(w: Sequence[str], k: int) -> list[tuple[Word, ...]]:
    """All ordered ``k``-tuples of words whose concatenation is ``w``."""
    w = Word(w)
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return [()] if not w else []
    out = []
    for cuts in combinations_with_replacement(range(len(w) + 1), k - 1):
        bounds = (0, *cuts, len(w))
        out.append(tuple(w[bounds[i] : bounds[i + 1]] for i in range(k)))
    return out


class IndexSpace:
    """The index set X: ``IndexSpace.free(alphabet)`` or ``IndexSpace.naturals()``."""

    __slots__ = ("kind", "alphabet", "_rank")

    def __init__(self, kind: str, alphabet: Sequence[str] = ()):
        if kind not in ("free", "naturals"):
            raise ValueError(f"unknown index space kind {kind!r}")
        alphabet = tuple(alphabet)
        if kind == "naturals" and alphabet:
            raise ValueError("the naturals take no alphabet")
        if any(not isinstance(a, str) or not a for a in alphabet):
            raise ValueError("alphabet symbols must be non-empty strings")
        if len(set(alphabet)) != len(alphabet):
            raise ValueError("alphabet symbols must be pairwise distinct")
        self.kind = kind
        self.alphabet = alphabet
        self._rank = {a: i for i, a in enumerate(alphabet)}

    @classmethod
    def free(cls, alphabet: Sequence[str]) -> IndexSpace:
        return cls("free", alphabet)

    @classmethod
    def naturals(cls) -> IndexSpace:
        return cls("naturals")

    @property
    def is_free(self) -> bool:
        return self.kind == "free"

    def __eq__(self, other):
        return (
            isinstance(other, IndexSpace)
            and self.kind == other.kind
            and self.alphabet == other.alphabet
        )

    def __hash__(self):
        return hash((self.kind, self.alphabet))

    def __repr__(self):
        if self.is_free:
            return f"IndexSpace.free({list(self.alphabet)!r})"
        return "IndexSpace.naturals()"

    @property
    def unit(self):
        """ε for a free monoid, 0 for the naturals."""
        return EMPTY if self.is_free else 0

    def contains(self, x) -> bool:
        if self.is_free:
            return isinstance(x, tuple) and all(a in self._rank for a in x)
        return isinstance(x, int) and not isinstance(x, bool) and x >= 0

    def check(self, x):
        if not self.contains(x):
            raise IndexSpaceError(f"{x!r} is not an index of {self!r}")
        return Word(x) if self.is_free else x

    def concat(self, u: Word, v: Word) -> Word:
        if not self.is_free:
            raise IndexSpaceError("concatenation needs a free monoid")
        return concat(self.check(u), self.check(v))

    def key(self, x):
        """Sort key realising the canonical (length-lexicographic) order."""
        if self.is_free:
            return (len(x), tuple(self._rank[a] for a in x))
        return x

    def words_of_length(self, n: int) -> Iterator[Word]:
        for letters in product(self.alphabet, repeat=n):
            yield Word(letters)

    def iter_indices(self) -> Iterator:
        """All indices in canonical order (infinite unless the alphabet is empty)."""
        if not self.is_free:
            yield from count()
            return
        yield EMPTY
        if not self.alphabet:
            return
        for n in count(1):
            yield from self.words_of_length(n)

    def enumerate(self, n: int) -> list:
        if n < 0:
            raise ValueError("n must be non-negative")
        return list(islice(self.iter_indices(), n))

    def position(self, x) -> int:
        """Zero-based position of ``x`` in the canonical enumeration."""
        if not self.is_free:
            return x
        m = len(self.alphabet)
        before = sum(m**i for i in range(len(x)))
        r = 0
        for a in x:
            r = r * m + self._rank[a]
        return before + r

    def words_up_to(self, degree: int) -> Iterator[Word]:
        for n in range(degree + 1):
            yield from self.words_of_length(n)

    # --- literals ----------------------------------------------------------

    def format_index(self, x):
        """JSON form of an index: word literal string or plain int."""
        return "".join(x) if self.is_free else x

    def parse_index(self, token) -> Word | int:
        """Inverse of :meth:`format_index`; words split greedily on the alphabet."""
        if not self.is_free:
            if isinstance(token, str) and token.isdigit():
                token = int(token)
            return self.check(token)
        if not isinstance(token, str):
            raise IndexSpaceError(f"word literal expected, got {token!r}")
        letters = []
        i = 0
        longest = max((len(a) for a in self.alphabet), default=0)
        while i < len(token):
            for n in range(min(longest, len(token) - i), 0, -1):
                if token[i : i + n] in self._rank:
                    letters.append(token[i : i + n])
                    i += n
                    break
            else:
                raise IndexSpaceError(f"{token!r} is not a word over {self.alphabet}")
        return Word(letters)

    def describe(self) -> str:
        """``naturals`` or ``words:a,b`` as used in matrix records."""
        if not self.is_free:
            return "naturals"
        return "words:" + ",".join(self.alphabet)

    @classmethod
    def from_description(cls, text: str) -> IndexSpace:
        if text == "naturals":
            return cls.naturals()
        if text.startswith("words:"):
            body = text[len("words:") :]
            return cls.free(body.split(",") if body else ())
        raise IndexSpaceError(f"unknown index space {text!r}")


def letters_alphabet(n: int) -> tuple[str, ...]:
    """``n`` distinct generated letters ``x0, x1, ...`` (a finite prefix of a
    countably infinite alphabet)."""
    return tuple(f"x{i}" for i in range(n))
