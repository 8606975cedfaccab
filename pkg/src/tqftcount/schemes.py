"""Built-in group families and the constructible generators living over them.

A generator is a polynomial map from an affine domain (cut out by
equations and inequations) into a family; integrating it over F_p gives the
fiber-count class function, scaled by a coefficient polynomial in q
evaluated at q = p.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .classalg import ClassFunction
from .errors import MapNotInGroup, NotClassInvariant, TooLarge, UsageError
from .groups import ENUMERATION_CAP, FamilySpec, FiniteGroup, coordinate_grid, parse_constraints
from .polynomials import IntPoly
from .polyq import PolyQ


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    name: str
    coords: tuple[str, ...]
    constraints: tuple
    map_to_group: tuple  # rows of IntPoly
    coefficient: PolyQ
    provenance: str = ""

    @property
    def coord_count(self) -> int:
        return len(self.coords)

    @classmethod
    def from_json(cls, data: dict) -> "GeneratorSpec":
        try:
            coords = data.get("coords", [])
            if isinstance(coords, int):
                coords = [f"x{i}" for i in range(coords)]
            coords = tuple(coords)
            rows = tuple(tuple(IntPoly.parse(str(cell), coords) for cell in row) for row in data["map"])
            return cls(
                family=data["family"],
                name=data["name"],
                coords=coords,
                constraints=parse_constraints(data.get("constraints", []), coords),
                map_to_group=rows,
                coefficient=PolyQ.parse(data.get("coefficient", "1")),
                provenance=data.get("provenance", ""),
            )
        except KeyError as exc:
            raise UsageError(f"generator spec is missing field {exc}") from None

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "name": self.name,
            "coords": list(self.coords),
            "constraints": [{"poly": c.text, "rel": c.rel} for c in self.constraints],
            "map": [[str(c) for c in row] for row in self.map_to_group],
            "coefficient": str(self.coefficient),
            "provenance": self.provenance,
        }

    def domain_points(self, p: int, cap: int = ENUMERATION_CAP) -> np.ndarray:
        m = len(self.coords)
        if p**m > cap:
            raise TooLarge(f"generator {self.name} has {p}^{m} candidate points, cap is {cap}")
        grid = coordinate_grid(m, p)
        keep = np.ones(len(grid), dtype=bool)
        for con in self.constraints:
            keep &= con.mask(grid, p)
        return grid[keep]

    def image_matrices(self, p: int) -> np.ndarray:
        pts = self.domain_points(p)
        n = len(self.map_to_group)
        out = np.zeros((len(pts), n, n), dtype=np.int64)
        for r, row in enumerate(self.map_to_group):
            for c, poly in enumerate(row):
                out[:, r, c] = poly.evaluate_mod(pts, p)
        return out


def fiber_counts(spec: GeneratorSpec, G: FiniteGroup) -> np.ndarray:
    """#{x in domain(F_p) : map(x) = g} for every element g of G."""
    mats = spec.image_matrices(G.p)
    if mats.shape[1:] != (G.dim, G.dim):
        raise MapNotInGroup(f"generator {spec.name} maps to {mats.shape[1]}x{mats.shape[2]} matrices, "
                            f"group has dimension {G.dim}")
    idx = G.lookup(mats) if len(mats) else np.zeros(0, dtype=np.int64)
    if (idx < 0).any():
        bad = mats[int(np.flatnonzero(idx < 0)[0])]
        raise MapNotInGroup(f"generator {spec.name} sends a point to {bad.tolist()}, not in {G.name}")
    return np.bincount(idx, minlength=G.order)


def integrate_generator(spec: GeneratorSpec, G: FiniteGroup) -> ClassFunction:
    counts = fiber_counts(spec, G)
    cls = G.classes
    reps = np.array(cls.class_reps)
    expected = counts[reps][cls.class_of]
    if (counts != expected).any():
        g = int(np.flatnonzero(counts != expected)[0])
        raise NotClassInvariant(
            f"fiber counts of {spec.name} are not constant on the class of element {g}"
        )
    scale = spec.coefficient(G.p)
    return ClassFunction(G, [int(c) * scale for c in counts[reps]])


@dataclass(frozen=True)
class Lift:
    family: str
    name: str
    terms: tuple  # (PolyQ, generator name)
    eigenvalue: PolyQ | None = None

    @classmethod
    def from_json(cls, data: dict) -> "Lift":
        ev = data.get("eigenvalue")
        return cls(
            family=data["family"],
            name=data["name"],
            terms=tuple((PolyQ.parse(c), g) for c, g in data["terms"]),
            eigenvalue=None if ev is None else PolyQ.parse(ev),
        )

    def __str__(self):
        parts = []
        for c, g in self.terms:
            parts.append(f"({c})[{g}]")
        return " + ".join(parts)


@dataclass
class Catalog:
    families: dict = field(default_factory=dict)
    generators: dict = field(default_factory=dict)  # family -> {name: GeneratorSpec}
    bases: dict = field(default_factory=dict)
    lifts: dict = field(default_factory=dict)  # family -> [Lift]
    provenance: dict = field(default_factory=dict)

    @classmethod
    def from_json(cls, data) -> "Catalog":
        if isinstance(data, (str, Path)):
            data = json.loads(Path(data).read_text())
        cat = cls()
        if "families" not in data and "pattern" in data:
            data = {"families": [data]}
        for fam in data.get("families", []):
            spec = FamilySpec.from_json(fam)
            cat.families[spec.name] = spec
            cat.provenance[spec.name] = fam.get("provenance", "")
            cat.generators.setdefault(spec.name, {})
        for gen in data.get("generators", []):
            g = GeneratorSpec.from_json(gen)
            cat.generators.setdefault(g.family, {})[g.name] = g
        cat.bases.update(data.get("bases", {}))
        for lift in data.get("lifts", []):
            lf = Lift.from_json(lift)
            cat.lifts.setdefault(lf.family, []).append(lf)
        return cat

    def merge(self, other: "Catalog") -> "Catalog":
        out = Catalog(dict(self.families), {k: dict(v) for k, v in self.generators.items()},
                      dict(self.bases), {k: list(v) for k, v in self.lifts.items()}, dict(self.provenance))
        out.families.update(other.families)
        for fam, gens in other.generators.items():
            out.generators.setdefault(fam, {}).update(gens)
        out.bases.update(other.bases)
        for fam, lifts in other.lifts.items():
            out.lifts[fam] = lifts
        out.provenance.update(other.provenance)
        return out

    def family(self, name: str) -> FamilySpec:
        try:
            return self.families[name]
        except KeyError:
            raise UsageError(f"unknown family {name!r}; known: {', '.join(self.families)}") from None

    def generator(self, family: str, name: str) -> GeneratorSpec:
        try:
            return self.generators[family][name]
        except KeyError:
            raise UsageError(f"family {family!r} has no generator {name!r}") from None

    def basis(self, family: str) -> list[str]:
        return list(self.bases.get(family, self.generators.get(family, {}).keys()))

    def lift(self, family: str, name: str) -> Lift:
        for lf in self.lifts.get(family, []):
            if lf.name == name:
                return lf
        raise UsageError(f"family {family!r} has no lift {name!r}")


_BUILTIN: Catalog | None = None


def builtin_catalog() -> Catalog:
    global _BUILTIN
    if _BUILTIN is None:
        text = resources.files("tqftcount").joinpath("data/catalog.json").read_text()
        _BUILTIN = Catalog.from_json(json.loads(text))
    return _BUILTIN


def load_catalog(path=None) -> Catalog:
    """The built-in catalog, extended (or overridden) by a user JSON file."""
    if path is None:
        return builtin_catalog()
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read catalog {path}: {exc}") from None
    return builtin_catalog().merge(Catalog.from_json(data))


def list_builtins() -> dict:
    cat = builtin_catalog()
    out = {}
    for name, spec in cat.families.items():
        out[name] = {
            "dim": spec.dim,
            "coordinates": list(spec.variables),
            "odd_only": spec.odd_only,
            "description": spec.description,
            "provenance": cat.provenance.get(name, ""),
            "generators": {g.name: g.provenance for g in cat.generators.get(name, {}).values()},
            "basis": cat.basis(name),
            "lifts": [lf.name for lf in cat.lifts.get(name, [])],
        }
    return out


def integrate_named(family: str, names, G: FiniteGroup, catalog: Catalog | None = None) -> list[ClassFunction]:
    cat = catalog or builtin_catalog()
    return [integrate_generator(cat.generator(family, n), G) for n in names]


def integrate_lift(lift: Lift, G: FiniteGroup, catalog: Catalog | None = None) -> ClassFunction:
    cat = catalog or builtin_catalog()
    total = ClassFunction.zero(G)
    for coeff, gname in lift.terms:
        total = total + integrate_generator(cat.generator(lift.family, gname), G) * coeff(G.p)
    return total
