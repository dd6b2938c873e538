"""Degree certification through iterated additive derivatives.

A table f: F_p^n -> T has degree <= d exactly when every (d+1)-fold
derivative D_{a_1}...D_{a_{d+1}} f vanishes identically.  Exhaustive mode
walks the tree of iterated derivative tables level by level, deduplicating
tables and pruning zero tables; this is logically identical to scanning all
p^{n(d+1)} ordered direction tuples (derivatives of equal tables are equal,
and derivatives of the zero table stay zero) while doing far less work.
Sampled mode checks a seeded batch of random direction tuples, vectorized
over the whole batch; it can certify a true degree bound but refutes one
only when it happens to hit a witness.

On failure the checker reports the witnessing directions and point, which
can be re-verified independently through ``words.derivative_table``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .limits import FeasibilityLimits, resolve
from .torus import TorusValue
from .words import TORUS, Word, derivative_table, index_to_point, shift_indices

EXHAUSTIVE = "exhaustive"
SAMPLED = "sampled"
AUTO = "auto"


@dataclass(frozen=True)
class DegreeWitness:
    """Directions a_1..a_{d+1} and a point where the iterated derivative
    is nonzero."""

    directions: tuple[tuple[int, ...], ...]
    point: tuple[int, ...]
    value: TorusValue


@dataclass(frozen=True)
class DegreeCheck:
    ok: bool
    mode: str
    cases: int
    witness: DegreeWitness | None = None


def apply_derivative_chain(word: Word, directions: Sequence[Sequence[int]]) -> Word:
    """Iterated derivative, the slow reference path used for re-checks."""
    out = word
    for a in directions:
        out = derivative_table(out, a)
    return out


class _Shifts:
    """Per-direction gather arrays for one (p, n) domain, built lazily."""

    def __init__(self, p: int, n: int):
        self.p = p
        self.n = n
        self.size = p**n
        self._cache: dict[int, np.ndarray] = {}

    def sigma(self, a_idx: int) -> np.ndarray:
        arr = self._cache.get(a_idx)
        if arr is None:
            a = index_to_point(self.p, self.n, a_idx)
            arr = np.array(shift_indices(self.p, self.n, a), dtype=np.int64)
            self._cache[a_idx] = arr
        return arr


def _exhaustive(word: Word, d: int, limits: FeasibilityLimits) -> DegreeCheck:
    p, n = word.prime, word.nvars
    size = p**n
    nominal = size ** (d + 1)
    limits.check_cases(nominal, "exhaustive derivative check")
    m = word.modulus
    shifts = _Shifts(p, n)

    base = tuple(word.values)
    levels: list[dict[tuple, tuple]] = []
    frontier: dict[tuple, tuple] = {base: (None, None)}
    if all(v == 0 for v in base):
        frontier = {}
    for _ in range(d + 1):
        if not frontier:
            break
        nxt: dict[tuple, tuple] = {}
        for tbl in frontier:
            arr = np.array(tbl, dtype=np.int64)
            for a_idx in range(1, size):
                der = (arr[shifts.sigma(a_idx)] - arr) % m
                if not der.any():
                    continue
                key = tuple(int(v) for v in der)
                if key not in nxt:
                    nxt[key] = (tbl, a_idx)
        levels.append(nxt)
        frontier = nxt

    if not frontier or len(levels) < d + 1:
        return DegreeCheck(ok=True, mode=EXHAUSTIVE, cases=nominal)

    # reconstruct a witness chain from the parent links
    tbl = next(iter(frontier))
    chain: list[int] = []
    for level in range(d, -1, -1):
        parent, a_idx = levels[level][tbl]
        chain.append(a_idx)
        tbl = parent
    chain.reverse()
    final = next(iter(frontier))
    point_idx = next(i for i, v in enumerate(final) if v)
    witness = DegreeWitness(
        directions=tuple(index_to_point(p, n, a) for a in chain),
        point=index_to_point(p, n, point_idx),
        value=TorusValue(p, final[point_idx], word.depth),
    )
    return DegreeCheck(ok=False, mode=EXHAUSTIVE, cases=nominal, witness=witness)


def _sampled(
    word: Word, d: int, trials: int, seed: int, limits: FeasibilityLimits
) -> DegreeCheck:
    p, n = word.prime, word.nvars
    size = p**n
    m = word.modulus
    rng = random.Random(seed)
    tuples = [
        tuple(rng.randrange(size) for _ in range(d + 1)) for _ in range(trials)
    ]
    shifts = _Shifts(p, n)
    # a full (size x size) shift matrix enables pure-numpy gathers; beyond
    # that footprint fall back to per-direction rows
    sigma_all = (
        np.stack([shifts.sigma(a) for a in range(size)])
        if size * size <= 8_000_000
        else None
    )
    base = np.array(word.values, dtype=np.int64)

    chunk = 2048
    for start in range(0, trials, chunk):
        block = tuples[start : start + chunk]
        dirs = np.array(block, dtype=np.int64)
        rows = len(block)
        v = np.tile(base, (rows, 1))
        row_idx = np.arange(rows)[:, None]
        for level in range(d + 1):
            if sigma_all is not None:
                perm = sigma_all[dirs[:, level]]
            else:
                perm = np.stack([shifts.sigma(t[level]) for t in block])
            v = (v[row_idx, perm] - v) % m
        nonzero_rows = np.nonzero(v.any(axis=1))[0]
        if nonzero_rows.size:
            row = int(nonzero_rows[0])
            col = int(np.nonzero(v[row])[0][0])
            witness = DegreeWitness(
                directions=tuple(
                    index_to_point(p, n, a) for a in block[row]
                ),
                point=index_to_point(p, n, col),
                value=TorusValue(p, int(v[row, col]), word.depth),
            )
            return DegreeCheck(
                ok=False, mode=SAMPLED, cases=trials, witness=witness
            )
    return DegreeCheck(ok=True, mode=SAMPLED, cases=trials)


def verify_degree_by_derivatives(
    word: Word,
    d: int,
    mode: str = AUTO,
    trials: int = 10_000,
    seed: int = 0,
    limits: FeasibilityLimits | None = None,
) -> DegreeCheck:
    """Check that all (d+1)-fold derivatives of the table vanish.

    ``mode`` is ``exhaustive``, ``sampled``, or ``auto`` (exhaustive when
    the nominal tuple count p^{n(d+1)} fits the cap, sampled otherwise).
    Exhaustive mode raises :class:`FeasibilityError` when over the cap.
    """
    if word.kind != TORUS:
        raise ValueError("degree checks act on torus-valued words")
    if d < 0:
        raise ValueError("degree bound must be >= 0")
    lim = resolve(limits)
    if mode == AUTO:
        nominal = (word.prime**word.nvars) ** (d + 1)
        mode = EXHAUSTIVE if nominal <= lim.exhaustive_cap else SAMPLED
    if mode == EXHAUSTIVE:
        return _exhaustive(word, d, lim)
    if mode == SAMPLED:
        return _sampled(word, d, trials, seed, lim)
    raise ValueError(f"unknown mode {mode!r}")
