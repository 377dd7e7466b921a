"""Flavored multipartitions, shifted diagrams, and standard tableaux.

A shape is a tuple of components: zero, one, or two strict partitions
(drawn shifted, row i starting at column i) followed by m ordinary
partitions.  Simple modules are indexed by these shapes; the tableau
combinatorics here drives the whole block structure downstream.

Conventions: rows, columns, and entries are 1-based; strict-component
boxes use absolute column indices so the content j - i reads off the
diagram directly; component labels are the strings "0-", "0+", "0",
"1", ..., "m".
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial
from typing import Iterator, NamedTuple

FLAVORS = ("zero", "s", "ss")


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        for a, b in zip(self.parts, self.parts[1:]):
            if a < b:
                raise ValueError(f"parts not weakly decreasing: {self.parts}")
        if self.parts and self.parts[-1] <= 0:
            raise ValueError(f"parts must be positive: {self.parts}")

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)


@dataclass(frozen=True)
class StrictPartition:
    parts: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        for a, b in zip(self.parts, self.parts[1:]):
            if a <= b:
                raise ValueError(f"parts not strictly decreasing: {self.parts}")
        if self.parts and self.parts[-1] <= 0:
            raise ValueError(f"parts must be positive: {self.parts}")

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)


class Box(NamedTuple):
    row: int
    col: int
    comp: str  # component label


def strict_labels(flavor: str) -> tuple[str, ...]:
    if flavor == "zero":
        return ()
    if flavor == "s":
        return ("0",)
    if flavor == "ss":
        return ("0-", "0+")
    raise ValueError(f"unknown flavor {flavor!r}")


@dataclass(frozen=True)
class Multipartition:
    """Flavor-tagged shape: strict components first, then m ordinary ones."""

    flavor: str
    strict: tuple[StrictPartition, ...] = ()
    ordinary: tuple[Partition, ...] = ()

    def __post_init__(self) -> None:
        if len(self.strict) != len(strict_labels(self.flavor)):
            raise ValueError(
                f"flavor {self.flavor} needs {len(strict_labels(self.flavor))} "
                f"strict components, got {len(self.strict)}"
            )

    @property
    def m(self) -> int:
        return len(self.ordinary)

    @property
    def n(self) -> int:
        return sum(c.size for c in self.strict) + sum(c.size for c in self.ordinary)

    def components(self) -> list[tuple[str, tuple[int, ...], bool]]:
        """(label, parts, is_strict) in reading order."""
        out = [
            (lab, sp.parts, True)
            for lab, sp in zip(strict_labels(self.flavor), self.strict)
        ]
        out += [(str(k + 1), p.parts, False) for k, p in enumerate(self.ordinary)]
        return out

    def boxes(self) -> tuple[Box, ...]:
        """All boxes in reading order: component, then row, then column."""
        return _boxes_of(self)

    def diagonal_boxes(self) -> tuple[Box, ...]:
        """Boxes (a, a) of the strict components; one per shifted row."""
        out: list[Box] = []
        for lab, parts, shifted in self.components():
            if shifted:
                out.extend(Box(i, i, lab) for i in range(1, len(parts) + 1))
        return tuple(out)

    def to_json(self) -> dict:
        return {
            "flavor": self.flavor,
            "strict": [list(c.parts) for c in self.strict],
            "ordinary": [list(c.parts) for c in self.ordinary],
        }

    @staticmethod
    def from_json(obj, flavor: str | None = None) -> "Multipartition":
        """Accept the tagged dict form or a bare list of component arrays.

        For a bare list the flavor decides how many leading arrays are
        strict components.
        """
        if isinstance(obj, str):
            obj = json.loads(obj)
        if isinstance(obj, dict):
            return Multipartition(
                obj["flavor"],
                tuple(StrictPartition(tuple(p)) for p in obj.get("strict", [])),
                tuple(Partition(tuple(p)) for p in obj.get("ordinary", [])),
            )
        if flavor is None:
            raise ValueError("bare component list needs an explicit flavor")
        k = len(strict_labels(flavor))
        if len(obj) < k:
            raise ValueError(f"flavor {flavor} needs at least {k} components")
        return Multipartition(
            flavor,
            tuple(StrictPartition(tuple(p)) for p in obj[:k]),
            tuple(Partition(tuple(p)) for p in obj[k:]),
        )


@lru_cache(maxsize=None)
def _boxes_of(shape: "Multipartition") -> tuple[Box, ...]:
    out: list[Box] = []
    for lab, parts, shifted in shape.components():
        for i, part in enumerate(parts, start=1):
            start = i if shifted else 1
            out.extend(Box(i, j, lab) for j in range(start, start + part))
    return tuple(out)


def _partitions_desc(n: int) -> Iterator[tuple[int, ...]]:
    """Partitions of n in descending lexicographic order."""

    def rec(rest: int, cap: int, prefix: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        if rest == 0:
            yield prefix
            return
        for part in range(min(rest, cap), 0, -1):
            yield from rec(rest - part, part, prefix + (part,))

    yield from rec(n, n, ())


def _strict_partitions_desc(n: int) -> Iterator[tuple[int, ...]]:
    def rec(rest: int, cap: int, prefix: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        if rest == 0:
            yield prefix
            return
        for part in range(min(rest, cap), 0, -1):
            yield from rec(rest - part, part - 1, prefix + (part,))

    yield from rec(n, n, ())


def _compositions(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Weak compositions of n into k parts, first component largest first."""
    if k == 0:
        if n == 0:
            yield ()
        return
    for first in range(n, -1, -1):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest


def enumerate_multipartitions(flavor: str, m: int, n: int) -> list[Multipartition]:
    """All shapes of total size n: exhaustive, duplicate-free, ordered."""
    ns = len(strict_labels(flavor))
    out: list[Multipartition] = []
    for sizes in _compositions(n, ns + m):
        strict_choices = [list(_strict_partitions_desc(s)) for s in sizes[:ns]]
        ord_choices = [list(_partitions_desc(s)) for s in sizes[ns:]]

        def rec(idx: int, acc: list[tuple[int, ...]]) -> None:
            choices = strict_choices + ord_choices
            if idx == len(choices):
                out.append(
                    Multipartition(
                        flavor,
                        tuple(StrictPartition(p) for p in acc[:ns]),
                        tuple(Partition(p) for p in acc[ns:]),
                    )
                )
                return
            for p in choices[idx]:
                rec(idx + 1, acc + [p])

        rec(0, [])
    return out


@dataclass(frozen=True)
class StandardTableau:
    """A shape plus entries 1..n listed against shape.boxes() order."""

    shape: Multipartition
    values: tuple[int, ...]

    def entry(self, box: Box) -> int:
        return self.values[self.shape.boxes().index(box)]

    def box_of(self, a: int) -> Box:
        return self.shape.boxes()[self.values.index(a)]

    def as_permutation(self) -> tuple[int, ...]:
        """One-line word of t composed with the inverse initial tableau."""
        return self.values

    def to_json(self) -> dict:
        return {
            "shape": self.shape.to_json(),
            "entries": {
                f"{b.row},{b.col},{b.comp}": v
                for b, v in zip(self.shape.boxes(), self.values)
            },
        }


@lru_cache(maxsize=None)
def _neighbor_tables(shape: Multipartition):
    """Index maps: for each box slot, the slots directly left/up/right/down."""
    boxes = shape.boxes()
    pos = {b: k for k, b in enumerate(boxes)}
    left = [pos.get(Box(b.row, b.col - 1, b.comp)) for b in boxes]
    up = [pos.get(Box(b.row - 1, b.col, b.comp)) for b in boxes]
    right = [pos.get(Box(b.row, b.col + 1, b.comp)) for b in boxes]
    down = [pos.get(Box(b.row + 1, b.col, b.comp)) for b in boxes]
    return boxes, pos, left, up, right, down


def initial_tableau(shape: Multipartition) -> StandardTableau:
    """Row-reading filling: 1..n poured along rows, component by component."""
    return StandardTableau(shape, tuple(range(1, shape.n + 1)))


def enumerate_standard_tableaux(shape: Multipartition) -> list[StandardTableau]:
    """Backtracking insertion of 1..n; the initial tableau comes out first."""
    boxes, _, left, up, _, _ = _neighbor_tables(shape)
    n = len(boxes)
    values = [0] * n
    out: list[StandardTableau] = []

    def place(a: int) -> None:
        if a > n:
            out.append(StandardTableau(shape, tuple(values)))
            return
        for k in range(n):
            if values[k]:
                continue
            if left[k] is not None and not values[left[k]]:
                continue
            if up[k] is not None and not values[up[k]]:
                continue
            values[k] = a
            place(a + 1)
            values[k] = 0

    place(1)
    return out


def _remove_one(parts: tuple[int, ...], strict: bool) -> Iterator[tuple[int, ...]]:
    """Shapes reachable by removing one box from the given component."""
    for i, p in enumerate(parts):
        v = p - 1
        if i + 1 < len(parts):
            if strict and v <= parts[i + 1]:
                continue
            if not strict and v < parts[i + 1]:
                continue
        yield parts[:i] + ((v,) if v else ()) + parts[i + 1 :]


@lru_cache(maxsize=None)
def count_standard_tableaux(shape: Multipartition) -> int:
    """Recursive removal-of-largest-entry count; no enumeration."""
    if shape.n == 0:
        return 1
    total = 0
    comps = shape.components()
    for ci, (_, parts, strict) in enumerate(comps):
        for smaller in _remove_one(parts, strict):
            new_strict = list(shape.strict)
            new_ordinary = list(shape.ordinary)
            if strict:
                new_strict[ci] = StrictPartition(smaller)
            else:
                new_ordinary[ci - len(shape.strict)] = Partition(smaller)
            total += count_standard_tableaux(
                Multipartition(shape.flavor, tuple(new_strict), tuple(new_ordinary))
            )
    return total


def diagonal_positions(t: StandardTableau) -> frozenset[int]:
    """Entries sitting on the shifted diagonals."""
    boxes = t.shape.boxes()
    diag = set(t.shape.diagonal_boxes())
    return frozenset(v for b, v in zip(boxes, t.values) if b in diag)


class NotAdmissible(Exception):
    pass


def is_admissible(t: StandardTableau, i: int) -> bool:
    """Whether swapping entries i, i+1 keeps the tableau standard."""
    boxes = t.shape.boxes()
    bi = boxes[t.values.index(i)]
    bj = boxes[t.values.index(i + 1)]
    if bi.comp != bj.comp:
        return True
    return bi.row != bj.row and bi.col != bj.col


def apply_transposition(t: StandardTableau, i: int) -> StandardTableau:
    """Swap entries i and i+1; NotAdmissible if that breaks standardness."""
    if not 1 <= i <= t.shape.n - 1:
        raise ValueError(f"transposition index {i} out of range")
    if not is_admissible(t, i):
        raise NotAdmissible(f"entries {i},{i + 1} are row- or column-adjacent")
    ki = t.values.index(i)
    kj = t.values.index(i + 1)
    values = list(t.values)
    values[ki], values[kj] = i + 1, i
    return StandardTableau(t.shape, tuple(values))


@lru_cache(maxsize=None)
def _tableau_paths(shape: Multipartition) -> dict[tuple[int, ...], tuple[int, ...]]:
    """Shortest admissible words from the initial tableau, by BFS."""
    t0 = initial_tableau(shape)
    paths: dict[tuple[int, ...], tuple[int, ...]] = {t0.values: ()}
    queue = deque([t0])
    while queue:
        t = queue.popleft()
        word = paths[t.values]
        for i in range(1, shape.n):
            if not is_admissible(t, i):
                continue
            s = apply_transposition(t, i)
            if s.values not in paths:
                paths[s.values] = word + (i,)
                queue.append(s)
    return paths


def admissible_path(t: StandardTableau) -> tuple[int, ...]:
    """A minimal word of admissible swaps carrying the initial tableau to t.

    Applying the letters left to right to the initial tableau gives t;
    every prefix stays standard.
    """
    return _tableau_paths(t.shape)[t.values]


def inversions(word: tuple[int, ...]) -> int:
    return sum(
        1 for a in range(len(word)) for b in range(a + 1, len(word)) if word[a] > word[b]
    )


def check_rsk_identities(n: int, m: int) -> bool:
    """Square-sum counting identities for the two tableau families.

    Ordinary side: sum of |Std|^2 over m-component shapes of n is n! m^n.
    Strict side: sum of 2^(n-len) |Std|^2 over strict partitions of n
    is n!; checked in this squared form so everything stays integral.
    """
    total = sum(
        count_standard_tableaux(lam) ** 2
        for lam in enumerate_multipartitions("zero", m, n)
    )
    if total != factorial(n) * m**n:
        return False
    strict_total = 0
    for parts in _strict_partitions_desc(n):
        shape = Multipartition("s", (StrictPartition(parts),), ())
        strict_total += 2 ** (n - len(parts)) * count_standard_tableaux(shape) ** 2
    return strict_total == factorial(n)


def std_count_by_splitting(shape: Multipartition) -> int:
    """Count tableaux by splitting entries between components with binomials."""
    n = shape.n
    result = 1
    remaining = n
    for lab, parts, strict in shape.components():
        size = sum(parts)
        result *= comb(remaining, size)
        remaining -= size
        if strict:
            piece = Multipartition("s", (StrictPartition(parts),), ())
        else:
            piece = Multipartition("zero", (), (Partition(parts),))
        result *= count_standard_tableaux(piece)
    return result
