"""Minimal sparse square matrices over high-precision complex scalars.

Every generator matrix in this project is extremely sparse (diagonal,
signed-permutation-like, or diagonal plus one crossing pattern), so a
dict-of-rows layout beats dense arbitrary-precision arrays by orders of
magnitude.  Rank-type decisions are not made here; callers convert to
numpy float64 for those.
"""

from __future__ import annotations

import numpy as np
from gmpy2 import mpc

_ZERO = mpc(0)


class SMat:
    """Square sparse matrix; rows[i] maps column -> scalar."""

    __slots__ = ("n", "rows")

    def __init__(self, n: int, rows: list[dict] | None = None):
        self.n = n
        self.rows = rows if rows is not None else [dict() for _ in range(n)]

    @staticmethod
    def identity(n: int, scale=1) -> "SMat":
        s = mpc(scale)
        return SMat(n, [{i: s} for i in range(n)])

    @staticmethod
    def zero(n: int) -> "SMat":
        return SMat(n)

    @staticmethod
    def diag(values) -> "SMat":
        vals = list(values)
        return SMat(len(vals), [{i: mpc(v)} for i, v in enumerate(vals)])

    def set(self, i: int, j: int, v) -> "SMat":
        self.rows[i][j] = mpc(v)
        return self

    def get(self, i: int, j: int):
        return self.rows[i].get(j, _ZERO)

    def copy(self) -> "SMat":
        return SMat(self.n, [dict(r) for r in self.rows])

    def __matmul__(self, other: "SMat") -> "SMat":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        out = SMat(self.n)
        orows = other.rows
        for i, row in enumerate(self.rows):
            acc = out.rows[i]
            for k, a in row.items():
                for j, b in orows[k].items():
                    if j in acc:
                        acc[j] += a * b
                    else:
                        acc[j] = a * b
        return out

    def __add__(self, other: "SMat") -> "SMat":
        out = self.copy()
        for i, row in enumerate(other.rows):
            acc = out.rows[i]
            for j, v in row.items():
                if j in acc:
                    acc[j] += v
                else:
                    acc[j] = v
        return out

    def __sub__(self, other: "SMat") -> "SMat":
        return self + other.scale(-1)

    def scale(self, c) -> "SMat":
        c = mpc(c)
        return SMat(self.n, [{j: c * v for j, v in row.items()} for row in self.rows])

    def shift(self, c) -> "SMat":
        """self + c * identity."""
        out = self.copy()
        c = mpc(c)
        for i in range(self.n):
            if i in out.rows[i]:
                out.rows[i][i] += c
            else:
                out.rows[i][i] = c
        return out

    def apply(self, vec: dict) -> dict:
        """Matrix times a sparse column vector (dict index -> scalar)."""
        out: dict = {}
        for i, row in enumerate(self.rows):
            s = _ZERO
            hit = False
            for j, a in row.items():
                if j in vec:
                    s += a * vec[j]
                    hit = True
            if hit:
                out[i] = s
        return out

    def col(self, j: int) -> dict:
        return {i: row[j] for i, row in enumerate(self.rows) if j in row}

    def max_abs(self) -> float:
        worst = 0.0
        for row in self.rows:
            for v in row.values():
                a = abs(v)
                if a > worst:
                    worst = float(a)
        return worst

    def residual(self, other: "SMat") -> float:
        return (self - other).max_abs()

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def to_numpy(self) -> np.ndarray:
        out = np.zeros((self.n, self.n), dtype=np.complex128)
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                out[i, j] = complex(v)
        return out

    def embed_into(self, big: "SMat", row_off: int, col_off: int) -> None:
        """Accumulate this block into a larger matrix at the given offsets."""
        for i, row in enumerate(self.rows):
            acc = big.rows[row_off + i]
            for j, v in row.items():
                jj = col_off + j
                if jj in acc:
                    acc[jj] += v
                else:
                    acc[jj] = v


def commutator_residual(a: SMat, b: SMat) -> float:
    return (a @ b).residual(b @ a)


def anticommutator_residual(a: SMat, b: SMat) -> float:
    return ((a @ b) + (b @ a)).max_abs()
