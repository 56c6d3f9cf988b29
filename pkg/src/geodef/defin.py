"""Definability by orbit closure, the three-way definability check and concept comparison.

In a finite structure a relation is definable exactly when it is closed
under every automorphism, so every verdict here reduces to closure checks
against explicit point groups.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .affine import affaut
from .autgrp import brute_force_aut, induced_point_group
from .errors import FieldMismatch, GeodefError, TwoElementField, UniverseMismatch
from .geom import ExtRelation, Geometry
from .groups import PointGroup


# -- cached groups -------------------------------------------------------------


def aut_of(G: Geometry) -> PointGroup:
    """Aut(G), computed once per geometry object."""
    cached = getattr(G, "_aut", None)
    if cached is None:
        cached = brute_force_aut(G)
        G._aut = cached
    return cached


def affaut_of(G: Geometry) -> PointGroup:
    cached = getattr(G, "_affaut", None)
    if cached is None:
        cached = affaut(G)
        G._affaut = cached
    return cached


def _generators(group: PointGroup):
    gens = getattr(group, "_gens", None)
    if gens is None:
        try:
            gens = group.generators()
        except ValueError:
            gens = list(group.perms)  # not a group: check every element
        group._gens = gens
    return gens


# -- closure -----------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    perm: tuple
    tuple_: tuple

    def as_dict(self):
        return {"map": list(self.perm), "tuple": [list(p) for p in self.tuple_]}


def is_closed_under(R: ExtRelation, maps) -> tuple[bool, Witness | None]:
    """Forward closure of R under every map; for a group its generators suffice."""
    if isinstance(maps, PointGroup):
        if maps.universe != R.space.size:
            raise UniverseMismatch("group and relation act on different universes")
        perms = _generators(maps) if len(maps) > 1 else list(maps.perms)
    else:
        perms = [np.asarray(p) for p in maps]
    for perm in perms:
        ok, code = R.closed_under(perm)
        if not ok:
            return False, Witness(tuple(int(x) for x in perm), R.decode(code))
    return True, None


def orbit_closure(R: ExtRelation, group: PointGroup) -> ExtRelation:
    """Smallest superset of R closed under the group."""
    if not len(R):
        return R
    members = R.member_indices()
    m = R.space.size
    weights = np.array([m**j for j in range(R.n)], dtype=np.int64)
    bits = np.zeros_like(R.bits)
    perms = group.perms.astype(np.int64)
    step = max(1, (1 << 22) // (len(members) * R.n))
    for start in range(0, len(perms), step):
        bits[(perms[start : start + step][:, members] @ weights).ravel()] = True
    return ExtRelation(R.space, R.n, bits)


def orbit_of(code: int, n: int, group: PointGroup) -> np.ndarray:
    """Codes in the orbit of one tuple."""
    m = group.universe
    pts = [(code // m**j) % m for j in range(n)]
    weights = np.array([m**j for j in range(n)], dtype=np.int64)
    return np.unique(group.perms[:, pts].astype(np.int64) @ weights)


def is_field_definable(R: ExtRelation, F=None) -> bool:
    """Closed under the coordinatewise action of every field automorphism."""
    F = R.space.field if F is None else F
    if F != R.space.field:
        raise FieldMismatch(f"relation lives over {R.space.field!r}, not {F!r}")
    return is_closed_under(R, induced_point_group(F, R.space.d))[0]


# -- the three-way check ----------------------------------------------------


@dataclass
class DefinabilityReport:
    relation: str
    definable: bool  # (i): closed under Aut(G)
    field_aut: bool  # (ii): field-definable and closed under Aut(G)
    field_affaut: bool  # (iii): field-definable and closed under AffAut(G)
    field_definable: bool
    witnesses: dict = field(default_factory=dict)
    consistent: bool = True
    caveat: str | None = None

    @property
    def verdicts(self) -> tuple[bool, bool, bool]:
        return self.definable, self.field_aut, self.field_affaut

    def as_dict(self) -> dict:
        return {
            "relation": self.relation,
            "i_definable": self.definable,
            "ii_field_definable_and_aut_closed": self.field_aut,
            "iii_field_definable_and_affaut_closed": self.field_affaut,
            "field_definable": self.field_definable,
            "consistent": self.consistent,
            "caveat": self.caveat,
            "witnesses": {k: w.as_dict() for k, w in sorted(self.witnesses.items())},
        }


TWO_ELEMENT_CAVEAT = (
    "two-element field: only (i) <-> (ii) is guaranteed; clause (iii) lies outside the hypothesis"
)


def theorem1_check(R: ExtRelation, G: Geometry, name: str = "R", aut=None, aff=None) -> DefinabilityReport:
    if R.space != G.space:
        raise UniverseMismatch(f"relation over {R.space!r}, geometry over {G.space!r}")
    aut = aut_of(G) if aut is None else aut
    aff = affaut_of(G) if aff is None else aff
    witnesses = {}
    closed_aut, w = is_closed_under(R, aut)
    if w:
        witnesses["aut"] = w
    fdef = is_field_definable(R)
    if not fdef:
        _, w = is_closed_under(R, induced_point_group(G.field, G.d))
        witnesses["field"] = w
    closed_aff, w = is_closed_under(R, aff)
    if w:
        witnesses["affaut"] = w
    i, ii, iii = closed_aut, fdef and closed_aut, fdef and closed_aff
    if G.field.q == 2:
        consistent = i == ii
        caveat = TWO_ELEMENT_CAVEAT
    else:
        consistent = i == ii == iii
        caveat = None
    return DefinabilityReport(name, i, ii, iii, fdef, witnesses, consistent, caveat)


# -- concept comparison -------------------------------------------------------


class Verdict(str, enum.Enum):
    EQUAL = "equal"
    LEFT_SUBSET = "left-subset"
    RIGHT_SUBSET = "right-subset"
    LEFT_PROPER_SUBSET = "left-proper-subset"
    RIGHT_PROPER_SUBSET = "right-proper-subset"
    INCOMPARABLE = "incomparable"

    @property
    def symbol(self) -> str:
        return {
            "equal": "left = right",
            "left-subset": "left ⊆ right",
            "right-subset": "right ⊆ left",
            "left-proper-subset": "left ⊊ right",
            "right-proper-subset": "right ⊊ left",
            "incomparable": "incomparable",
        }[self.value]


def _verdict(left_in_right: bool, right_in_left: bool) -> Verdict:
    if left_in_right and right_in_left:
        return Verdict.EQUAL
    if left_in_right:
        return Verdict.LEFT_PROPER_SUBSET
    if right_in_left:
        return Verdict.RIGHT_PROPER_SUBSET
    return Verdict.INCOMPARABLE


@dataclass
class ComparisonVerdict:
    verdict: Verdict
    via_aut: Verdict | None
    via_affaut: Verdict
    # primitive of the left geometry not closed under the right group, and vice versa
    left_witness: str | None = None
    right_witness: str | None = None
    corroborated: bool = True

    @property
    def agree(self) -> bool:
        return self.via_aut is None or self.via_aut == self.via_affaut

    @property
    def witness(self) -> str | None:
        return self.left_witness or self.right_witness

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "via_aut": None if self.via_aut is None else self.via_aut.value,
            "via_affaut": self.via_affaut.value,
            "agree": self.agree,
            "left_witness": self.left_witness,
            "right_witness": self.right_witness,
            "corroborated": self.corroborated,
        }


def _check_pair(G: Geometry, H: Geometry):
    if G.field != H.field or G.d != H.d:
        raise FieldMismatch(f"{G.space!r} vs {H.space!r}")
    if G.field.q == 2:
        raise TwoElementField("concept comparison needs a field with more than two elements")


def _unclosed_primitive(G: Geometry, group: PointGroup) -> str | None:
    for name, _, ext in G.relations:
        if not is_closed_under(ext, group)[0]:
            return name
    return None


def compare_concepts(G: Geometry, H: Geometry, use_aut: bool = True) -> ComparisonVerdict:
    """Compare Cn(G) and Cn(H): Cn(G) ⊆ Cn(H) iff Aut(G) ⊇ Aut(H)."""
    _check_pair(G, H)
    aG, aH = affaut_of(G), affaut_of(H)
    via_aff = _verdict(aG.issuperset(aH), aH.issuperset(aG))
    via_aut = None
    if use_aut:
        fG, fH = aut_of(G), aut_of(H)
        via_aut = _verdict(fG.issuperset(fH), fH.issuperset(fG))
    groupG, groupH = (aut_of(G), aut_of(H)) if use_aut else (aG, aH)
    left_w = right_w = None
    if via_aff in (Verdict.RIGHT_PROPER_SUBSET, Verdict.INCOMPARABLE):
        left_w = _unclosed_primitive(G, groupH)
    if via_aff in (Verdict.LEFT_PROPER_SUBSET, Verdict.INCOMPARABLE):
        right_w = _unclosed_primitive(H, groupG)
    corroborated = spot_check(G, H, via_aff, groupG, groupH)
    out = ComparisonVerdict(via_aff, via_aut, via_aff, left_w, right_w, corroborated)
    if not out.agree:
        raise GeodefError(f"Aut route says {via_aut.value}, AffAut route says {via_aff.value}")
    return out


def small_orbits(group: PointGroup, max_arity: int = 2):
    """Orbits of the group on point tuples of length up to max_arity, as relations."""
    m = group.universe
    for n in range(1, max_arity + 1):
        seen = np.zeros(m**n, dtype=bool)
        for code in range(m**n):
            if seen[code]:
                continue
            orbit = orbit_of(code, n, group)
            seen[orbit] = True
            yield n, orbit


def spot_check(G: Geometry, H: Geometry, verdict: Verdict, groupG=None, groupH=None, max_arity: int = 2) -> bool:
    """Corroborate an inclusion verdict on concepts of small arity.

    Orbits of Aut(G) on short tuples are concepts of G; whenever Cn(G) is
    claimed to sit inside Cn(H), each must be closed under Aut(H).  This can
    only confirm a group verdict, never replace it.
    """
    groupG = aut_of(G) if groupG is None else groupG
    groupH = aut_of(H) if groupH is None else groupH
    checks = []
    if verdict in (Verdict.EQUAL, Verdict.LEFT_PROPER_SUBSET):
        checks.append((G, groupG, groupH))
    if verdict in (Verdict.EQUAL, Verdict.RIGHT_PROPER_SUBSET):
        checks.append((H, groupH, groupG))
    for geo, own, other in checks:
        for n, orbit in small_orbits(own, max_arity):
            R = ExtRelation.from_codes(geo.space, n, orbit)
            if not is_closed_under(R, other)[0]:
                return False
    return True


# -- Hasse diagram ----------------------------------------------------------


@dataclass
class Hasse:
    nodes: list[str]
    edges: list[tuple[str, str]]  # (smaller concept set, larger concept set)
    classes: dict[str, list[str]]

    def to_dot(self, name: str = "concepts") -> str:
        lines = [f"digraph {name} {{"]
        lines += [f'  "{n}";' for n in self.nodes]
        lines += [f'  "{a}" -> "{b}";' for a, b in self.edges]
        lines.append("}")
        return "\n".join(lines) + "\n"


def hasse(geometries: Sequence[tuple[str, Geometry]]) -> Hasse:
    """Covering relation of the concept-set order, from AffAut inclusions only."""
    geometries = list(geometries)
    if not geometries:
        return Hasse([], [], {})
    base = geometries[0][1]
    for _, H in geometries[1:]:
        _check_pair(base, H)
    if base.field.q == 2:
        raise TwoElementField("concept comparison needs a field with more than two elements")
    groups = [(name, affaut_of(G)) for name, G in geometries]
    classes: list[tuple[list[str], PointGroup]] = []
    for name, grp in groups:
        for members, rep in classes:
            if rep == grp:
                members.append(name)
                break
        else:
            classes.append(([name], grp))
    labelled = [("=".join(sorted(members)), sorted(members), grp) for members, grp in classes]
    labelled.sort(key=lambda item: item[0])
    # a < b: Cn(a) strictly inside Cn(b), i.e. AffAut(a) strictly contains AffAut(b)
    less = {
        (a[0], b[0])
        for a in labelled
        for b in labelled
        if a[0] != b[0] and a[2].issuperset(b[2])
    }
    labels = [item[0] for item in labelled]
    edges = sorted(
        (a, b)
        for (a, b) in less
        if not any((a, c) in less and (c, b) in less for c in labels)
    )
    return Hasse(labels, edges, {item[0]: item[1] for item in labelled})
