"""Definability and automorphism groups of finite coordinate geometries."""

from .affine import AffineMap, affaut, affine_group, enumerate_affine_group, frame_map, respects
from .autgrp import brute_force_aut, decompose, fundamental_group, induced_group
from .defin import (
    ComparisonVerdict,
    DefinabilityReport,
    Verdict,
    compare_concepts,
    hasse,
    is_closed_under,
    is_field_definable,
    orbit_closure,
    theorem1_check,
)
from .errors import GeodefError
from .field import QQ, FiniteField, make_gf, parse_field_spec
from .geom import ExtRelation, Geometry, PointSpace, affine_geometry, build_geometry, gf2_fixture, materialize
from .groups import PointGroup
from .translate import SymbolBinding, tr, verify_tr

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
