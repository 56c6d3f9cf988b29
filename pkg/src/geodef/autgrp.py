"""Automorphism groups of finite relational structures on F^d.

The full group is found by backtracking over partial point bijections.  For
each relation and each way the next point can occur in a tuple, a lookup table
maps the images of the other (already placed) points to the bitmask of
admissible images of the new point, so candidates are filtered with integer
bit operations.  Complete maps are re-verified at the end with numpy.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from operator import itemgetter

import numpy as np

from .affine import AffineMap, affine_from_perm, affine_group, filter_respecting
from .errors import CapacityExceeded, NoDecomposition, NotAnAutomorphism, UniverseMismatch
from .field import FieldAutomorphism, FiniteField, frobenius_group
from .geom import ExtRelation, Geometry, PointSpace
from .groups import PointGroup, compose_groups, inverse, perm_dtype

MAX_POINTS = 32


@dataclass(frozen=True)
class InducedMap:
    """A field automorphism applied to every coordinate of a point."""

    source: FieldAutomorphism
    space: PointSpace

    @cached_property
    def perm(self) -> np.ndarray:
        table = self.source.array
        return self.space.indices(table[self.space.coords]).astype(perm_dtype(self.space.size))

    def __call__(self, point):
        return tuple(self.source(c) for c in point)

    @property
    def is_identity(self) -> bool:
        return self.source.is_identity


def induced_group(F: FiniteField, d: int) -> list[InducedMap]:
    space = PointSpace(F, d)
    return [InducedMap(alpha, space) for alpha in frobenius_group(F)]


def induced_point_group(F: FiniteField, d: int) -> PointGroup:
    space = PointSpace(F, d)
    return PointGroup(np.array([m.perm for m in induced_group(F, d)]), space.size)


# -- backtracking ---------------------------------------------------------------


class _Rel:
    def __init__(self, ext: ExtRelation):
        self.n = ext.n
        self.bits = ext.bits
        self.members = [tuple(int(x) for x in row) for row in ext.member_indices()]
        self.m = ext.space.size
        self.weights = [self.m**j for j in range(self.n)]
        # for every nonempty position set P: key (images at other positions) -> mask of x
        self.slices = {}
        for size in range(1, self.n + 1):
            for P in itertools.combinations(range(self.n), size):
                self.slices[P] = {}
        for u in self.members:
            for P, table in self.slices.items():
                x = u[P[0]]
                if any(u[j] != x for j in P):
                    continue
                key = tuple(u[j] for j in range(self.n) if j not in P)
                table[key] = table.get(key, 0) | (1 << x)

    def holds(self, tup) -> bool:
        return bool(self.bits[sum(a * w for a, w in zip(tup, self.weights))])


def _point_order(rels, m):
    """Greedy order: next the point completing the most member tuples."""
    score = [0] * m
    remaining = []
    by_point = [[] for _ in range(m)]
    for r in rels:
        for u in r.members:
            pts = set(u)
            k = len(remaining)
            remaining.append(pts)
            for p in pts:
                by_point[p].append(k)
    order = []
    placed = [False] * m
    current = 0
    for _ in range(m):
        order.append(current)
        placed[current] = True
        for k in by_point[current]:
            rest = remaining[k]
            rest.discard(current)
            if len(rest) == 1:
                (p,) = rest
                score[p] += 1
        best = None
        for p in range(m):
            if not placed[p] and (best is None or score[p] > score[best]):
                best = p
        if best is None:
            break
        current = best
    return order


def _key_getter(combo):
    if not combo:
        return lambda img: ()
    if len(combo) == 1:
        (p,) = combo
        return lambda img: (img[p],)
    return itemgetter(*combo)


def _entries(rels, order):
    """Per search step, the constraint lookups involving the new point."""
    steps = []
    for s, c in enumerate(order):
        placed = order[:s]
        pos_entries, neg_entries = [], []
        for r in rels:
            for P, table in r.slices.items():
                others = [j for j in range(r.n) if j not in P]
                for combo in itertools.product(placed, repeat=len(others)):
                    tup = [0] * r.n
                    for j in P:
                        tup[j] = c
                    for j, p in zip(others, combo):
                        tup[j] = p
                    getter = _key_getter(combo)
                    if r.holds(tup):
                        sel = bin(table.get(tuple(combo), 0)).count("1")
                        pos_entries.append((sel, table, getter, True))
                    else:
                        neg_entries.append((0, table, getter, False))
        pos_entries.sort(key=lambda e: e[0])
        steps.append([e[1:] for e in pos_entries + neg_entries])
    return steps


def backtrack_candidates(G: Geometry, max_points: int = MAX_POINTS) -> np.ndarray:
    """Complete maps surviving the search filters (a superset of Aut(G))."""
    m = G.space.size
    if m > max_points:
        raise CapacityExceeded(f"{m} points exceed the backtracking bound {max_points}")
    rels = [_Rel(ext) for _, _, ext in G.relations]
    order = _point_order(rels, m)
    steps = _entries(rels, order)
    img = [0] * m
    leaves = []
    full = (1 << m) - 1

    def search(s, free):
        if s == m:
            leaves.append(bytes(img))
            return
        cand = free
        for table, getter, positive in steps[s]:
            mask = table.get(getter(img), 0)
            cand = cand & mask if positive else cand & ~mask
            if cand & (cand - 1) == 0:
                break
        c = order[s]
        while cand:
            low = cand & -cand
            cand ^= low
            img[c] = low.bit_length() - 1
            search(s + 1, free ^ low)

    search(0, full)
    if not leaves:
        return np.zeros((0, m), dtype=perm_dtype(m))
    return np.frombuffer(b"".join(leaves), dtype=np.uint8).reshape(-1, m).astype(perm_dtype(m))


def brute_force_aut(G: Geometry, max_points: int = MAX_POINTS) -> PointGroup:
    """Aut(G): all bijections respecting every relation."""
    cands = backtrack_candidates(G, max_points)
    rels = sorted((ext for _, _, ext in G.relations), key=len)
    return PointGroup(filter_respecting(cands, rels), G.space.size)


# -- decomposition ------------------------------------------------------------


def is_automorphism(perm, G: Geometry) -> bool:
    perm = np.asarray(perm)
    if perm.shape != (G.space.size,) or len(set(perm.tolist())) != G.space.size:
        return False
    return all(ext.respected_by(perm)[0] for _, _, ext in G.relations)


def decompose(alpha, G: Geometry) -> tuple[AffineMap, FieldAutomorphism]:
    """The unique (A, phi) with alpha = A o phi~."""
    alpha = np.asarray(alpha)
    if alpha.shape != (G.space.size,):
        raise UniverseMismatch(f"map acts on {alpha.shape[0]} points, geometry has {G.space.size}")
    if not is_automorphism(alpha, G):
        raise NotAnAutomorphism("the map does not respect every relation")
    found = []
    for ind in induced_group(G.field, G.d):
        A_perm = alpha[inverse(ind.perm)]
        A = affine_from_perm(G.space, A_perm)
        if A is not None:
            found.append((A, ind.source))
    if len(found) != 1:
        what = "no" if not found else f"{len(found)}"
        raise NoDecomposition(f"{what} affine/field-automorphism decompositions")
    return found[0]


def fundamental_group(space: PointSpace) -> PointGroup:
    """AffineTrf o Aut~(F) as an explicit set."""
    return compose_groups(affine_group(space), induced_point_group(space.field, space.d))
