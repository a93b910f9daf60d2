"""The f/g bookkeeping functions of the intersection algorithm.

f(1,1) = 1, f(1,2) = 2, f(a, 2b-1) = f(a-1, b), f(a, 2b) = 2 f(a, 2b-1);
g(a, b) = log2 f(a, b) + 1.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class FGTable:
    depth: int
    rows: tuple[tuple[int, ...], ...]  # rows[a-1][b-1] = f(a, b)

    def f(self, a: int, b: int) -> int:
        if not (1 <= a <= self.depth and 1 <= b <= 2 ** a):
            raise IndexError(f"f({a}, {b}) outside the table")
        return self.rows[a - 1][b - 1]

    def g(self, a: int, b: int) -> int:
        return self.f(a, b).bit_length()  # log2 of a power of two, plus one

    def row(self, a: int) -> tuple[int, ...]:
        return self.rows[a - 1]


def fg_table(a_max: int) -> FGTable:
    if a_max < 1:
        raise ValueError("a_max must be >= 1")
    rows = [(1, 2)]
    for a in range(2, a_max + 1):
        prev = rows[-1]
        row: list[int] = []
        for b in range(1, 2 ** (a - 1) + 1):
            row.append(prev[b - 1])
            row.append(2 * prev[b - 1])
        rows.append(tuple(row))
    table = FGTable(a_max, tuple(rows))
    _check(table)
    return table


def _check(table: FGTable) -> None:
    for a in range(1, table.depth + 1):
        for b in range(1, 2 ** a + 1):
            v = table.f(a, b)
            assert v & (v - 1) == 0 and v.bit_length() - 1 <= a
            assert table.g(a, b) <= a + 1
        for b in range(1, 2 ** (a - 1) + 1):
            assert table.f(a, 2 * b) == 2 * table.f(a, 2 * b - 1)
            assert table.g(a, 2 * b) == table.g(a, 2 * b - 1) + 1
            if a > 1:
                assert table.f(a, 2 * b - 1) == table.f(a - 1, b)
