"""Reed-Muller codes over prime fields at desk scale.

RM_p(n, d) is the evaluation code of all degree <= d polynomials (with
individual exponents <= p-1) on F_p^n.  This module provides the exact
minimum-distance formula, the Johnson radius, exhaustive codeword
enumeration, exact-rational distance and ball searches, sampled maximum
list sizes, and the explicit family witnessing list sizes exp(c n^{d-e})
at radius delta(e)(1 - 1/p).

All distances and radii are exact rationals with denominator p**n; a
radius given as a decimal string is converted exactly, so boundary
comparisons never depend on float rounding.  Floating point appears only
in the Johnson radius.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .limits import FeasibilityLimits, resolve
from .polynomial import NonclassicalPoly, classical_from_coeffs, mul_classical
from .torus import require_prime
from .words import FIELD, Word, random_field_word


def delta(p: int, d: int) -> Fraction:
    """Normalized minimum distance of RM_p(n, d) for n large enough:
    writing d = a(p-1) + b with 0 <= b < p-1, this is (1/p^a)(1 - b/p)."""
    require_prime(p)
    if d < 0:
        raise ValueError("degree must be >= 0")
    a, b = divmod(d, p - 1)
    return Fraction(1, p**a) * (1 - Fraction(b, p))


def johnson_radius(q: int, dist: Fraction | float) -> float:
    """Generic list-decoding radius from minimum distance alone:
    (1 - 1/q)(1 - sqrt(1 - q*dist/(q-1)))."""
    if q < 2:
        raise ValueError("alphabet size must be >= 2")
    dist = Fraction(dist)
    radicand = 1 - Fraction(q, q - 1) * dist
    if radicand < 0:
        raise ValueError(f"distance {dist} exceeds (q-1)/q; radicand negative")
    return (1 - 1 / q) * (1 - math.sqrt(float(radicand)))


@lru_cache(maxsize=None)
def monomial_basis(p: int, n: int, d: int) -> tuple[tuple[int, ...], ...]:
    """Monomials with individual exponents <= p-1 and total degree <= d,
    sorted by (total degree, exponent tuple).  This order is the fixed
    enumeration basis for coefficient vectors."""
    out = [
        exps
        for exps in itertools.product(range(p), repeat=n)
        if sum(exps) <= d
    ]
    out.sort(key=lambda e: (sum(e), e))
    return tuple(out)


@dataclass(frozen=True)
class CodeParams:
    """The (p, n, d) triple identifying RM_p(n, d)."""

    p: int
    n: int
    d: int

    def __post_init__(self):
        require_prime(self.p)
        if self.n < 1:
            raise ValueError("need n >= 1")
        if self.d < 0:
            raise ValueError("need d >= 0")

    @property
    def basis(self) -> tuple[tuple[int, ...], ...]:
        return monomial_basis(self.p, self.n, self.d)

    @property
    def num_monomials(self) -> int:
        return len(self.basis)

    @property
    def codeword_count(self) -> int:
        return self.p**self.num_monomials

    @property
    def block_length(self) -> int:
        return self.p**self.n

    def check_feasible(self, limits: FeasibilityLimits | None = None) -> None:
        lim = resolve(limits)
        lim.check_table(self.block_length, "codeword table")
        lim.check_cases(self.codeword_count, "codeword enumeration")


def _basis_matrix(params: CodeParams) -> np.ndarray:
    p, n = params.p, params.n
    size = p**n
    idx = np.arange(size, dtype=np.int64)
    cols = [(idx // p ** (n - 1 - i)) % p for i in range(n)]
    rows = []
    for exps in params.basis:
        row = np.ones(size, dtype=np.int64)
        for i, e in enumerate(exps):
            if e:
                row = row * (cols[i] ** e) % p
        rows.append(row)
    return np.stack(rows) % p


def _coeff_block(params: CodeParams, start: int, count: int) -> np.ndarray:
    """Coefficient rows for codeword indices start..start+count-1.

    Index c maps to the base-p digits of c with the first basis monomial
    as the most significant digit (coefficient vectors in lexicographic
    order over the monomial basis)."""
    m = params.num_monomials
    p = params.p
    idx = np.arange(start, start + count, dtype=np.int64)
    return np.stack([(idx // p ** (m - 1 - j)) % p for j in range(m)], axis=1)


def codeword_blocks(
    params: CodeParams,
    limits: FeasibilityLimits | None = None,
    block_size: int = 4096,
) -> Iterator[tuple[int, np.ndarray, np.ndarray]]:
    """Yield (start_index, coefficient rows, evaluation rows) lazily.

    Coefficient vectors are materialized per block and evaluated on demand,
    so memory stays at O(block * p**n) rather than code size times table.
    """
    params.check_feasible(limits)
    basis = _basis_matrix(params)
    total = params.codeword_count
    for start in range(0, total, block_size):
        count = min(block_size, total - start)
        coeffs = _coeff_block(params, start, count)
        tables = coeffs @ basis % params.p
        yield start, coeffs, tables


def poly_from_coeff_row(params: CodeParams, row: Sequence[int]) -> NonclassicalPoly:
    coeffs = {
        exps: int(c) for exps, c in zip(params.basis, row) if int(c) % params.p
    }
    return classical_from_coeffs(params.p, params.n, coeffs)


def enumerate_code(
    params: CodeParams,
    limits: FeasibilityLimits | None = None,
    block_size: int = 4096,
) -> Iterator[tuple[NonclassicalPoly, Word]]:
    """Every codeword exactly once, in coefficient-lex order."""
    for _, coeffs, tables in codeword_blocks(params, limits, block_size):
        for row, table in zip(coeffs, tables):
            yield (
                poly_from_coeff_row(params, row),
                Word(params.p, params.n, FIELD, 0, tuple(int(v) for v in table)),
            )


def distance(u: Word, v: Word) -> Fraction:
    """Normalized Hamming distance, exact with denominator p**n."""
    if not u.same_shape(v):
        raise ValueError("word shape/alphabet mismatch")
    disagree = sum(1 for a, b in zip(u.values, v.values) if a != b)
    return Fraction(disagree, u.length)


def min_distance_bruteforce(
    params: CodeParams, limits: FeasibilityLimits | None = None
) -> Fraction:
    """Exact minimum distance by brute force.

    Uses linearity: the minimum distance equals the minimum normalized
    weight over nonzero codewords (the difference of two codewords is a
    codeword).  ``min_distance_pairwise`` is the direct fallback used to
    validate this optimization at tiny sizes.
    """
    if params.codeword_count < 2:
        raise ValueError("code has fewer than two codewords")
    best = params.block_length
    for start, _, tables in codeword_blocks(params, limits):
        weights = np.count_nonzero(tables, axis=1)
        if start == 0:
            weights = weights[1:]  # skip the zero codeword
        if weights.size:
            best = min(best, int(weights.min()))
    return Fraction(best, params.block_length)


def min_distance_pairwise(
    params: CodeParams, limits: FeasibilityLimits | None = None
) -> Fraction:
    """All-pairs minimum distance; tiny sizes only (cross-check path)."""
    words = [w.values for _, w in enumerate_code(params, limits)]
    lim = resolve(limits)
    lim.check_cases(len(words) * (len(words) - 1) // 2, "pairwise distances")
    best = params.block_length
    for i in range(len(words)):
        for j in range(i + 1, len(words)):
            dist = sum(1 for a, b in zip(words[i], words[j]) if a != b)
            best = min(best, dist)
    return Fraction(best, params.block_length)


@dataclass(frozen=True)
class ListResult:
    """Codewords within an exact radius of a received word."""

    params: CodeParams
    center: Word
    radius: Fraction
    members: tuple[NonclassicalPoly, ...]

    @property
    def count(self) -> int:
        return len(self.members)

    def to_json(self) -> str:
        payload = {
            "p": self.params.p,
            "n": self.params.n,
            "d": self.params.d,
            "eta": f"{self.radius.numerator}/{self.radius.denominator}",
            "count": self.count,
            "members": [poly.to_text() for poly in self.members],
        }
        return json.dumps(payload, sort_keys=True)


def _hit_mask(tables: np.ndarray, center: np.ndarray, eta: Fraction, length: int) -> np.ndarray:
    disagrees = (tables != center[None, :]).sum(axis=1)
    # dist <= eta  <=>  disagrees * eta.den <= eta.num * p**n, exactly
    return disagrees * eta.denominator <= eta.numerator * length


def list_in_ball(
    params: CodeParams,
    g: Word,
    eta: Fraction,
    limits: FeasibilityLimits | None = None,
) -> ListResult:
    """Exactly the codewords f with dist(f, g) <= eta."""
    if g.kind != FIELD or g.prime != params.p or g.nvars != params.n:
        raise ValueError("center must be a field word on the code's domain")
    eta = Fraction(eta)
    center = np.array(g.values, dtype=np.int64)
    members = []
    for _, coeffs, tables in codeword_blocks(params, limits):
        for row in coeffs[_hit_mask(tables, center, eta, params.block_length)]:
            members.append(poly_from_coeff_row(params, row))
    return ListResult(params, g, eta, tuple(members))


def ball_count(
    params: CodeParams,
    g: Word,
    eta: Fraction,
    limits: FeasibilityLimits | None = None,
) -> int:
    """Count of codewords within eta of g (no member materialization)."""
    eta = Fraction(eta)
    center = np.array(g.values, dtype=np.int64)
    total = 0
    for _, _, tables in codeword_blocks(params, limits):
        total += int(_hit_mask(tables, center, eta, params.block_length).sum())
    return total


@dataclass(frozen=True)
class MaxListResult:
    count: int
    center: Word
    label: str


def sampled_max_list_size(
    params: CodeParams,
    eta: Fraction,
    samples: int,
    seed: int,
    include_codeword_centers: bool = False,
    limits: FeasibilityLimits | None = None,
) -> MaxListResult:
    """Sampled lower bound on the maximum list size.

    Centers are ``samples`` seeded-PRNG random words (Python's
    ``random.Random(seed)``, one word after another in sampling order),
    optionally followed by every codeword's own table.  Deterministic given
    the seed; ties resolve to the earliest center.
    """
    eta = Fraction(eta)
    rng = random.Random(seed)
    centers: list[tuple[str, Word]] = []
    for i in range(samples):
        centers.append((f"sample:{i}", random_field_word(params.p, params.n, rng, limits)))
    if include_codeword_centers:
        for j, (_, word) in enumerate(enumerate_code(params, limits)):
            centers.append((f"codeword:{j}", word))
    if not centers:
        raise ValueError("no centers requested")

    center_matrix = np.array([w.values for _, w in centers], dtype=np.int64)
    counts = np.zeros(len(centers), dtype=np.int64)
    for _, _, tables in codeword_blocks(params, limits):
        disagrees = (tables[None, :, :] != center_matrix[:, None, :]).sum(axis=2)
        counts += (
            disagrees * eta.denominator <= eta.numerator * params.block_length
        ).sum(axis=1)
    best = int(counts.argmax())
    return MaxListResult(int(counts[best]), centers[best][1], centers[best][0])


def _tightness_layout(p: int, e: int) -> tuple[int, int, int]:
    """(a, b, lead position 0-based).  Over F_2 the dictator product
    prod_j (x_{a+1} - j) is empty for every e (b = 0 always), so the slot
    it would occupy is dropped and x_{a+1} leads; over larger fields the
    slot is kept even when this particular e has b = 0."""
    a, b = divmod(e, p - 1)
    lead = a if p == 2 else a + 1
    return a, b, lead


def tightness_family_size(p: int, d: int, e: int, n: int) -> int:
    _, _, lead = _tightness_layout(p, e)
    return p ** len(monomial_basis(p, n - lead - 1, d - e))


def tightness_family(
    p: int,
    d: int,
    e: int,
    n: int,
    limits: FeasibilityLimits | None = None,
) -> Iterator[NonclassicalPoly]:
    """The explicit family attaining list sizes exp(c n^{d-e}) at radius
    delta(e)(1 - 1/p): products

        (prod_{i<=a} (x_i^{p-1} - 1)) (prod_{j<=b} (x_{a+1} - j))
            (x_L + Q(x_{L+1}, ..., x_n))

    over all Q of degree <= d-e, where e = a(p-1) + b and the lead index L
    is a+1 over F_2 (the dictator product is empty for every e, so its slot
    is dropped) and a+2 otherwise.  Every member is nonzero with
    probability exactly delta(e)(1 - 1/p); one member is emitted per Q, in
    coefficient-lex order over Q's monomial basis.  Members have degree
    e + max(1, d - e), i.e. they are codewords of RM(n, d) whenever d > e.
    """
    require_prime(p)
    if not 0 <= e <= d:
        raise ValueError("need 0 <= e <= d")
    a, b, lead = _tightness_layout(p, e)
    if n < lead + 1:
        raise ValueError(f"need n >= {lead + 1} for e = {e} over F_{p}")
    lim = resolve(limits)
    lim.check_cases(tightness_family_size(p, d, e, n), "tightness family")

    prefix = classical_from_coeffs(p, n, {(0,) * n: 1})
    for i in range(a):
        exps = tuple(p - 1 if pos == i else 0 for pos in range(n))
        factor = classical_from_coeffs(p, n, {exps: 1, (0,) * n: p - 1})
        prefix = mul_classical(prefix, factor)
    for j in range(1, b + 1):
        exps = tuple(1 if pos == a else 0 for pos in range(n))
        factor = classical_from_coeffs(p, n, {exps: 1, (0,) * n: (-j) % p})
        prefix = mul_classical(prefix, factor)

    q_vars = n - lead - 1
    basis = monomial_basis(p, q_vars, d - e)
    x_lead = tuple(1 if pos == lead else 0 for pos in range(n))
    for combo in itertools.product(range(p), repeat=len(basis)):
        coeffs: dict[tuple[int, ...], int] = {x_lead: 1}
        for exps, c in zip(basis, combo):
            if c:
                full = (0,) * (lead + 1) + exps
                coeffs[full] = (coeffs.get(full, 0) + c) % p
        tail = classical_from_coeffs(
            p, n, {ex: c for ex, c in coeffs.items() if c}
        )
        yield mul_classical(prefix, tail)
