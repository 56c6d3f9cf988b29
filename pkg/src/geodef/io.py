"""Text formats: geometry specs (.geo), formula lists (.fol) and relation stanzas.

A .geo file holds optional ``field`` and ``dim`` directives and one relation
per line as ``name := formula : arity``.  The formula is a field formula in
v1..v_{d*arity}; the macros @gamma, @beta, @lambda, @cong and @diagonal
expand to the standard formulas for the dimension in use.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import GeodefError
from .field import parse_field_spec
from .fol.named import RelSymbol, beta, congruence, diagonal, gamma, lightlike
from .fol.syntax import parse
from .geom import Geometry, build_geometry

MACROS = {
    "@gamma": (gamma, 3),
    "@beta": (beta, 3),
    "@lambda": (lightlike, 2),
    "@cong": (congruence, 4),
    "@diagonal": (diagonal, 2),
}

_STANZA = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*:=\s*(.+?)\s*(?::\s*(\d+))?\s*$")


class SpecError(GeodefError):
    """Malformed geometry or formula file."""


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def relation_symbol(text: str, d: int, arity: int | None = None) -> RelSymbol:
    """A relation from ``formula : arity`` (arity optional for macros)."""
    text = text.strip()
    if arity is None and ":" in text and not text.rstrip().endswith(":"):
        head, _, tail = text.rpartition(":")
        if tail.strip().isdigit():
            text, arity = head.strip(), int(tail)
    if text in MACROS:
        build, n = MACROS[text]
        if arity is not None and arity != n:
            raise SpecError(f"{text} has arity {n}, not {arity}")
        return RelSymbol(build(d), n, d)
    if arity is None:
        raise SpecError(f"missing ': arity' after {text!r}")
    return RelSymbol(parse(text), arity, d)


@dataclass
class GeoSpec:
    relations: list  # (name, formula text, arity or None)
    field: str | None = None
    dim: int | None = None
    source: str = "<text>"

    def resolve(self, field: str | None = None, dim: int | None = None):
        """The field and dimension, flags taking effect where the file is silent."""
        f = field or self.field
        d = dim or self.dim
        if field and self.field and parse_field_spec(field) != parse_field_spec(self.field):
            raise SpecError(f"{self.source} is over {self.field}, not {field}")
        if dim and self.dim and dim != self.dim:
            raise SpecError(f"{self.source} is in dimension {self.dim}, not {dim}")
        if f is None:
            raise SpecError("no field given")
        if d is None:
            raise SpecError("no dimension given")
        return parse_field_spec(f), d

    def symbols(self, d: int) -> list[tuple[str, RelSymbol]]:
        return [(name, relation_symbol(text, d, arity)) for name, text, arity in self.relations]

    def build(self, field: str | None = None, dim: int | None = None) -> Geometry:
        F, d = self.resolve(field, dim)
        return build_geometry(self.symbols(d), F, d)


def parse_geo(text: str, source: str = "<text>") -> GeoSpec:
    spec = GeoSpec([], source=source)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        word, _, rest = line.partition(" ")
        if word == "field" and ":=" not in line:
            spec.field = rest.strip()
            continue
        if word == "dim" and ":=" not in line:
            try:
                spec.dim = int(rest)
            except ValueError:
                raise SpecError(f"{source}:{lineno}: bad dimension {rest!r}") from None
            continue
        m = _STANZA.match(line)
        if not m:
            raise SpecError(f"{source}:{lineno}: expected 'name := formula : arity'")
        name, formula, arity = m.group(1), m.group(2), m.group(3)
        spec.relations.append((name, formula, None if arity is None else int(arity)))
    if not spec.relations:
        raise SpecError(f"{source}: no relations")
    return spec


def load_geo(path) -> GeoSpec:
    path = Path(path)
    return parse_geo(path.read_text(), str(path))


_NAMED = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*:=\s*(.+)$")


def parse_named_fol(text: str, symbols=None) -> list[tuple[str, object]]:
    """Formulas one per line, either bare or as ``name := formula``."""
    out = []
    for line in map(_strip, text.splitlines()):
        if not line:
            continue
        m = _NAMED.match(line)
        name, body = (m.group(1), m.group(2)) if m else (f"f{len(out) + 1}", line)
        out.append((name, parse(body, symbols)))
    return out


def parse_fol(text: str, symbols=None) -> list:
    return [phi for _, phi in parse_named_fol(text, symbols)]


def load_fol(path, symbols=None) -> list:
    return parse_fol(Path(path).read_text(), symbols)


def data_path(name: str) -> Path:
    """Path of a file shipped in the package data directory."""
    return Path(str(resources.files("geodef") / "data" / name))
