"""Explicit finite sets of point bijections.

A permutation of ``range(m)`` is a length-m integer array ``p`` with ``p[x]``
the image of ``x``.  Composition follows function notation: ``(a o b)[x] =
a[b[x]]``, i.e. ``a[b]`` in numpy.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .errors import UniverseMismatch


def perm_dtype(m: int):
    return np.uint8 if m <= 256 else np.uint16


def compose(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """a after b."""
    return a[b]


def inverse(a: np.ndarray) -> np.ndarray:
    out = np.empty_like(a)
    out[a] = np.arange(a.size, dtype=a.dtype)
    return out


def identity(m: int) -> np.ndarray:
    return np.arange(m, dtype=perm_dtype(m))


class PointGroup:
    """A set of bijections on ``range(universe)``, stored sorted and deduplicated."""

    def __init__(self, perms, universe: int | None = None):
        arr = np.asarray(perms)
        if arr.ndim == 1:
            arr = arr[None, :]
        if universe is None:
            if arr.size == 0:
                raise ValueError("universe size needed for an empty set")
            universe = arr.shape[1]
        arr = arr.reshape(-1, universe).astype(perm_dtype(universe))
        if len(arr):
            arr = np.unique(arr, axis=0)
        self.universe = universe
        self.perms = arr
        self.perms.setflags(write=False)

    @cached_property
    def _keys(self) -> frozenset:
        return frozenset(row.tobytes() for row in self.perms)

    def _key(self, perm) -> bytes:
        return np.asarray(perm, dtype=self.perms.dtype).tobytes()

    def __len__(self):
        return len(self.perms)

    def __iter__(self):
        return iter(self.perms)

    def __contains__(self, perm) -> bool:
        perm = np.asarray(perm)
        return perm.shape == (self.universe,) and self._key(perm) in self._keys

    def __eq__(self, other):
        return (
            isinstance(other, PointGroup)
            and self.universe == other.universe
            and np.array_equal(self.perms, other.perms)
        )

    def __hash__(self):
        return hash((self.universe, self.perms.tobytes()))

    def __repr__(self):
        return f"PointGroup(universe={self.universe}, size={len(self)})"

    def _same_universe(self, other):
        if self.universe != other.universe:
            raise UniverseMismatch(f"universes of size {self.universe} and {other.universe}")

    def issubset(self, other: "PointGroup") -> bool:
        self._same_universe(other)
        return len(self) <= len(other) and self._keys <= other._keys

    def issuperset(self, other: "PointGroup") -> bool:
        return other.issubset(self)

    def __le__(self, other):
        return self.issubset(other)

    def __ge__(self, other):
        return self.issuperset(other)

    def __lt__(self, other):
        return self.issubset(other) and len(self) < len(other)

    def __gt__(self, other):
        return other < self

    def difference(self, other: "PointGroup") -> np.ndarray:
        self._same_universe(other)
        keys = other._keys
        mask = np.array([row.tobytes() not in keys for row in self.perms], dtype=bool)
        return self.perms[mask] if len(self.perms) else self.perms

    def intersection(self, other: "PointGroup") -> "PointGroup":
        self._same_universe(other)
        keys = other._keys
        mask = np.array([row.tobytes() in keys for row in self.perms], dtype=bool)
        return PointGroup(self.perms[mask] if len(self.perms) else self.perms, self.universe)

    @property
    def identity(self) -> np.ndarray:
        return identity(self.universe)

    def has_identity(self) -> bool:
        return self.identity in self

    # -- group structure -----------------------------------------------------
    def closure(self, generators, limit: int | None = None) -> set:
        """Keys of the subgroup generated by ``generators`` (breadth first)."""
        gens = [np.asarray(g, dtype=self.perms.dtype) for g in generators]
        start = self.identity
        seen = {start.tobytes()}
        frontier = start[None, :]
        while len(frontier):
            fresh = []
            for g in gens:
                prods = frontier[:, g]  # row o g
                for row in prods:
                    key = row.tobytes()
                    if key not in seen:
                        seen.add(key)
                        fresh.append(row)
                        if limit is not None and len(seen) > limit:
                            return seen
            frontier = np.array(fresh, dtype=self.perms.dtype).reshape(-1, self.universe)
        return seen

    def generators(self) -> list[np.ndarray]:
        """A generating list built greedily from the smallest missing element.

        Raises ValueError if the set is not closed under composition.
        """
        if not self.has_identity():
            raise ValueError("set does not contain the identity")
        keys = self._keys
        gens = []
        generated = {self.identity.tobytes()}
        for row in self.perms:
            if row.tobytes() in generated:
                continue
            gens.append(row)
            generated = self.closure(gens, limit=len(self))
            if not generated <= keys:
                raise ValueError("set is not closed under composition")
            if len(generated) == len(self):
                break
        return gens

    def is_group(self) -> bool:
        try:
            self.generators()
        except ValueError:
            return False
        return True

    def generator_hint(self, count: int = 3) -> list[list[int]]:
        """The smallest non-identity elements."""
        ident = self.identity
        out = []
        for row in self.perms:
            if not np.array_equal(row, ident):
                out.append([int(x) for x in row])
                if len(out) == count:
                    break
        return out


def compose_groups(A: PointGroup, B: PointGroup) -> PointGroup:
    """{a o b : a in A, b in B}."""
    if A.universe != B.universe:
        raise UniverseMismatch(f"universes of size {A.universe} and {B.universe}")
    prods = A.perms[:, B.perms]  # [i, j] = A[i] o B[j]
    return PointGroup(prods.reshape(-1, A.universe), A.universe)
