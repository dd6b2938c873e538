"""Dense evaluation tables over F_p^n.

A :class:`Word` is the unit of distance computation and enumeration: a
table of length p**n indexed base-p row-major with x_1 as the most
significant digit.  Two alphabets exist:

* ``field`` — entries are integers in {0, ..., p-1};
* ``torus:<k>`` — entries are elements of U_{k+1}, stored as integer
  numerators at the fixed depth k (entry m represents m / p**(k+1) mod 1).

Storing torus entries as scaled numerators keeps tables as flat integer
tuples, which both serializes directly and converts to numpy arrays for the
dense scans in the degree checker.

Text format: a header line ``<p> <n> <alphabet>`` with alphabet ``field`` or
``torus:<k>``, followed by the p**n entries row-major, whitespace-separated
(field: digits; torus: numerators at the fixed depth).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .limits import FeasibilityLimits, resolve
from .torus import TorusValue, require_prime

FIELD = "field"
TORUS = "torus"


def point_to_index(p: int, point: Sequence[int]) -> int:
    idx = 0
    for x in point:
        idx = idx * p + (x % p)
    return idx


def index_to_point(p: int, n: int, idx: int) -> tuple[int, ...]:
    digits = [0] * n
    for i in range(n - 1, -1, -1):
        digits[i] = idx % p
        idx //= p
    return tuple(digits)


def all_points(p: int, n: int) -> Iterator[tuple[int, ...]]:
    for idx in range(p**n):
        yield index_to_point(p, n, idx)


def add_points(p: int, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple((x + y) % p for x, y in zip(a, b))


@dataclass(frozen=True)
class Word:
    """Dense table over F_p^n with a single declared alphabet."""

    prime: int
    nvars: int
    kind: str  # FIELD or TORUS
    depth: int  # 0 for field words; the U_{depth+1} depth for torus words
    values: tuple[int, ...]

    def __post_init__(self):
        require_prime(self.prime)
        if self.nvars < 1:
            raise ValueError("need at least one variable")
        if self.kind not in (FIELD, TORUS):
            raise ValueError(f"unknown alphabet kind {self.kind!r}")
        if self.kind == FIELD and self.depth != 0:
            raise ValueError("field words have depth 0")
        if len(self.values) != self.prime**self.nvars:
            raise ValueError(
                f"table length {len(self.values)} != {self.prime}^{self.nvars}"
            )
        m = self.modulus
        if any(not 0 <= v < m for v in self.values):
            raise ValueError("table entry out of alphabet range")

    @property
    def modulus(self) -> int:
        """Alphabet size: p for field words, p**(depth+1) for torus words."""
        if self.kind == FIELD:
            return self.prime
        return self.prime ** (self.depth + 1)

    @property
    def length(self) -> int:
        return len(self.values)

    def alphabet_label(self) -> str:
        return FIELD if self.kind == FIELD else f"torus:{self.depth}"

    def same_shape(self, other: "Word") -> bool:
        return (
            self.prime == other.prime
            and self.nvars == other.nvars
            and self.kind == other.kind
            and self.depth == other.depth
        )

    def value_at_point(self, point: Sequence[int]) -> int:
        return self.values[point_to_index(self.prime, point)]

    def torus_value(self, idx: int) -> TorusValue:
        if self.kind != TORUS:
            raise ValueError("not a torus word")
        return TorusValue(self.prime, self.values[idx], self.depth)

    def entry_fraction(self, idx: int) -> Fraction:
        return Fraction(self.values[idx], self.modulus)

    def is_constant(self) -> bool:
        first = self.values[0]
        return all(v == first for v in self.values)

    @classmethod
    def field_word(cls, p: int, n: int, values: Iterable[int]) -> "Word":
        return cls(p, n, FIELD, 0, tuple(int(v) % p for v in values))

    @classmethod
    def torus_word(cls, p: int, n: int, depth: int, numerators: Iterable[int]) -> "Word":
        m = p ** (depth + 1)
        return cls(p, n, TORUS, depth, tuple(int(v) % m for v in numerators))

    @classmethod
    def zeros(cls, p: int, n: int, kind: str = FIELD, depth: int = 0) -> "Word":
        return cls(p, n, kind, depth if kind == TORUS else 0, (0,) * p**n)

    def to_text(self, per_line: int = 16) -> str:
        lines = [f"{self.prime} {self.nvars} {self.alphabet_label()}"]
        for i in range(0, len(self.values), per_line):
            lines.append(" ".join(str(v) for v in self.values[i : i + per_line]))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Word":
        tokens = text.split()
        if len(tokens) < 3:
            raise ValueError("truncated word header")
        p, n = int(tokens[0]), int(tokens[1])
        alphabet = tokens[2]
        values = [int(t) for t in tokens[3:]]
        if alphabet == FIELD:
            return cls(p, n, FIELD, 0, tuple(values))
        if alphabet.startswith("torus:"):
            depth = int(alphabet.split(":", 1)[1])
            return cls(p, n, TORUS, depth, tuple(values))
        raise ValueError(f"unknown alphabet {alphabet!r}")


def iota_word(word: Word) -> Word:
    """Embed a field word into the torus via a -> a/p (depth 0)."""
    if word.kind == TORUS:
        return word
    return Word(word.prime, word.nvars, TORUS, 0, word.values)


def lift_depth(word: Word, depth: int) -> Word:
    """Re-declare a torus word at a larger depth (rescaling numerators)."""
    if word.kind != TORUS:
        raise ValueError("lift_depth needs a torus word")
    if depth < word.depth:
        raise ValueError("cannot lower the declared depth")
    scale = word.prime ** (depth - word.depth)
    return Word(word.prime, word.nvars, TORUS, depth,
                tuple(v * scale for v in word.values))


def shift_indices(p: int, n: int, a: Sequence[int]) -> list[int]:
    """Index permutation sigma with sigma[i] = index of x+a for x = point(i)."""
    if len(a) != n:
        raise ValueError("direction has wrong dimension")
    offsets = [0] * (p**n)
    weight = 1
    for pos in range(n - 1, -1, -1):
        step = a[pos] % p
        if step:
            for idx in range(p**n):
                digit = (idx // weight) % p
                offsets[idx] += ((digit + step) % p - digit) * weight
        weight *= p
    return [idx + off for idx, off in enumerate(offsets)]


def derivative_table(word: Word, a: Sequence[int]) -> Word:
    """Additive derivative in direction a: (D_a f)(x) = f(x+a) - f(x)."""
    if word.kind != TORUS:
        raise ValueError("derivatives act on torus-valued words")
    if len(a) != word.nvars:
        raise ValueError(
            f"direction has {len(a)} coordinates, word has {word.nvars}"
        )
    sigma = shift_indices(word.prime, word.nvars, a)
    m = word.modulus
    vals = word.values
    return Word(
        word.prime,
        word.nvars,
        TORUS,
        word.depth,
        tuple((vals[sigma[i]] - vals[i]) % m for i in range(len(vals))),
    )


def random_field_word(p: int, n: int, rng, limits: FeasibilityLimits | None = None) -> Word:
    """A uniformly random field word drawn from a seeded ``random.Random``.

    The sampling convention is fixed: p**n calls to ``rng.randrange(p)`` in
    row-major index order, so experiments are reproducible bit-for-bit.
    """
    lim = resolve(limits)
    lim.check_table(p**n, "random word")
    return Word(p, n, FIELD, 0, tuple(rng.randrange(p) for _ in range(p**n)))
