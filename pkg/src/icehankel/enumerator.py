"""Brute-force enumeration of alternating sign matrices and DWBC vertex statistics.

Edges carry an arrow bit read off partial sums.  The horizontal edge to the
right of cell (i, j) holds the row partial sum through column j, the
vertical edge below it the column partial sum through row i.  With domain
wall boundaries both sums start at 0 and end at 1.  A cell is then
classified by its (left, right, top, bottom) bits:

* ``+1`` has left=0, right=1, top=0, bottom=1 (type 2),
* ``-1`` the reverse (type 1),
* a zero cell has equal horizontal bits ``h`` and equal vertical bits ``v``;
  ``(h, v) = (0, 0), (1, 1)`` are types 3, 4 (weight a) and
  ``(0, 1), (1, 0)`` are types 5, 6 (weight b).
"""
from __future__ import annotations

import csv
import io
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Mapping, Sequence, TextIO

import mpmath as mp

from .errors import CapExceeded, InvalidASM
from .precision import PrecisionReal

__all__ = [
    "DEFAULT_CAP",
    "ASMMatrix",
    "VertexTypeCounts",
    "WeightPolynomial",
    "enumerate_asm",
    "is_asm",
    "asm_vertex_counts",
    "weight_polynomial",
    "evaluate_Z",
    "x_enumeration",
    "write_weight_polynomial_csv",
    "read_weight_polynomial_csv",
]

DEFAULT_CAP = 7

ASMMatrix = tuple  # tuple of row tuples with entries in {-1, 0, 1}


@dataclass(frozen=True)
class VertexTypeCounts:
    n1: int
    n2: int
    n3: int
    n4: int
    n5: int
    n6: int

    @property
    def n_a(self) -> int:
        return self.n3 + self.n4

    @property
    def n_b(self) -> int:
        return self.n5 + self.n6

    @property
    def n_c(self) -> int:
        return self.n1 + self.n2

    @property
    def total(self) -> int:
        return self.n1 + self.n2 + self.n3 + self.n4 + self.n5 + self.n6


@dataclass(frozen=True)
class WeightPolynomial:
    """Exact counts of DWBC configurations keyed by ``(n_a, n_b, n_c)``."""

    N: int
    terms: Mapping[tuple, int]

    @property
    def total(self) -> int:
        return sum(self.terms.values())

    def items(self):
        return sorted(self.terms.items())


def _check_cap(N: int, cap: int | None) -> None:
    if N < 1:
        raise ValueError("N must be >= 1")
    cap = DEFAULT_CAP if cap is None else cap
    if N > cap:
        raise CapExceeded(f"N={N} exceeds the enumeration cap {cap}")


@lru_cache(maxsize=None)
def _row_moves(state: int, N: int) -> tuple:
    """All rows compatible with the column state (bit j = column partial sum).

    Each move is ``(row, new_state, (n_a, n_b, n_c))`` for the row's cells.
    """
    out = []

    def walk(j, r, row, new_state, na, nb, nc):
        if j == N:
            if r == 1:
                out.append((tuple(row), new_state, (na, nb, nc)))
            return
        col = (state >> j) & 1
        # zero entry: horizontal bit r, vertical bit col on both sides
        if r == col:
            walk(j + 1, r, row + [0], new_state, na + 1, nb, nc)
        else:
            walk(j + 1, r, row + [0], new_state, na, nb + 1, nc)
        if r == 0 and col == 0:
            walk(j + 1, 1, row + [1], new_state | (1 << j), na, nb, nc + 1)
        if r == 1 and col == 1:
            walk(j + 1, 0, row + [-1], new_state & ~(1 << j), na, nb, nc + 1)

    walk(0, 0, [], state, 0, 0, 0)
    return tuple(out)


def enumerate_asm(N: int, cap: int | None = None) -> Iterator[ASMMatrix]:
    """Yield every N x N alternating sign matrix exactly once."""
    _check_cap(N, cap)

    def dfs(i, state, rows):
        if i == N:
            yield tuple(rows)
            return
        for row, new_state, _ in _row_moves(state, N):
            rows.append(row)
            yield from dfs(i + 1, new_state, rows)
            rows.pop()

    yield from dfs(0, 0, [])


def is_asm(m: Sequence[Sequence[int]]) -> bool:
    try:
        _validate(m)
    except InvalidASM:
        return False
    return True


def _validate(m) -> int:
    N = len(m)
    if N == 0 or any(len(row) != N for row in m):
        raise InvalidASM("matrix must be square and non-empty")
    for i, row in enumerate(m):
        s = 0
        for x in row:
            if x not in (-1, 0, 1):
                raise InvalidASM(f"entry {x!r} not in {{-1, 0, 1}}")
            s += x
            if s not in (0, 1):
                raise InvalidASM(f"row {i} partial sums leave {{0, 1}}")
        if s != 1:
            raise InvalidASM(f"row {i} sums to {s}")
    for j in range(N):
        s = 0
        for i in range(N):
            s += m[i][j]
            if s not in (0, 1):
                raise InvalidASM(f"column {j} partial sums leave {{0, 1}}")
        if s != 1:
            raise InvalidASM(f"column {j} sums to {s}")
    return N


def asm_vertex_counts(m: Sequence[Sequence[int]]) -> VertexTypeCounts:
    """Counts of the six vertex types in the configuration of ASM ``m``."""
    N = _validate(m)
    n = [0] * 7
    col = [0] * N
    for i in range(N):
        r = 0
        for j in range(N):
            x = m[i][j]
            if x == 1:
                n[2] += 1
            elif x == -1:
                n[1] += 1
            else:
                key = (r, col[j])
                n[{(0, 0): 3, (1, 1): 4, (0, 1): 5, (1, 0): 6}[key]] += 1
            r += x
            col[j] += x
    return VertexTypeCounts(*n[1:])


def _count_subtree(N: int, first_row_index: int | None) -> Counter:
    acc: Counter = Counter()

    def dfs(i, state, na, nb, nc):
        if i == N:
            acc[(na, nb, nc)] += 1
            return
        for _, new_state, (a, b, c) in _row_moves(state, N):
            dfs(i + 1, new_state, na + a, nb + b, nc + c)

    if first_row_index is None:
        dfs(0, 0, 0, 0, 0)
    else:
        _, s, (a, b, c) = _row_moves(0, N)[first_row_index]
        dfs(1, s, a, b, c)
    return acc


@lru_cache(maxsize=16)
def _weight_terms(N: int) -> tuple:
    return tuple(sorted(_count_subtree(N, None).items()))


def weight_polynomial(N: int, cap: int | None = None, workers: int = 1) -> WeightPolynomial:
    """Exact DWBC weight polynomial, split over first-row choices when ``workers > 1``."""
    _check_cap(N, cap)
    if workers <= 1 or N < 3:
        return WeightPolynomial(N, dict(_weight_terms(N)))
    total: Counter = Counter()
    n_first = len(_row_moves(0, N))
    with ProcessPoolExecutor(max_workers=min(workers, os.cpu_count() or 1)) as ex:
        for part in ex.map(_count_subtree, [N] * n_first, range(n_first)):
            total.update(part)
    return WeightPolynomial(N, dict(sorted(total.items())))


def evaluate_Z(N: int, a, b, c, bits: int = 256, cap: int | None = None) -> PrecisionReal:
    """sum of count * a^n_a b^n_b c^n_c at ``bits`` of precision."""
    poly = weight_polynomial(N, cap=cap)
    with mp.workprec(bits):
        a, b, c = mp.mpf(a), mp.mpf(b), mp.mpf(c)
        val = mp.fsum(k * a**na * b**nb * c**nc for (na, nb, nc), k in poly.items())
        return PrecisionReal(val, bits)


def x_enumeration(N: int, x, cap: int | None = None):
    """A(N; x): sum over ASMs of x to the number of -1 entries (exact for rational x)."""
    poly = weight_polynomial(N, cap=cap)
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        total = sum(k * x ** ((nc - N) // 2) for (_, _, nc), k in poly.items())
        return total.numerator if total.denominator == 1 else total
    return mp.fsum(k * mp.mpf(x) ** ((nc - N) // 2) for (_, _, nc), k in poly.items())


def write_weight_polynomial_csv(poly: WeightPolynomial, out: TextIO | str) -> None:
    """Write lines ``n_a,n_b,n_c,count`` after a header."""
    own = isinstance(out, (str, os.PathLike))
    fh = open(out, "w", newline="") if own else out
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n_a", "n_b", "n_c", "count"])
        for (na, nb, nc), k in poly.items():
            w.writerow([na, nb, nc, k])
    finally:
        if own:
            fh.close()


def read_weight_polynomial_csv(src: TextIO | str, N: int) -> WeightPolynomial:
    fh = io.StringIO(src) if isinstance(src, str) and "\n" in src else None
    if fh is None:
        fh = open(src, newline="") if isinstance(src, (str, os.PathLike)) else src
    rows = list(csv.DictReader(fh))
    terms = {(int(r["n_a"]), int(r["n_b"]), int(r["n_c"])): int(r["count"]) for r in rows}
    return WeightPolynomial(N, terms)
