"""Rule-based carbon accounting: inventory times emission factors.

The calculation is deliberately plain: convert each inventory quantity to
the factor's canonical unit, multiply, and sum. Ranges propagate bound-wise,
which is sound because factors are nonnegative. Missing factors abort the
whole computation; a silent zero would understate the footprint, and that is
the costlier mistake.
"""

from __future__ import annotations

import csv
import enum
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import AccountingError, FormatError, UnitError
from .quantity import Quantity

FACTOR_CSV_HEADER = ["activity", "factor_kgco2e", "canonical_unit", "source_note"]


class LifecycleStage(enum.Enum):
    RAW_MATERIAL = "raw_material"
    MANUFACTURING = "manufacturing"
    DISTRIBUTION = "distribution"
    USE = "use"
    END_OF_LIFE = "end_of_life"


class Scope(enum.Enum):
    CRADLE_TO_GATE = "cradle_to_gate"
    CRADLE_TO_GRAVE = "cradle_to_grave"


_GATE_STAGES = frozenset(
    {LifecycleStage.RAW_MATERIAL, LifecycleStage.MANUFACTURING, LifecycleStage.DISTRIBUTION}
)


class UnitTable:
    """Multiplicative unit conversions grouped by dimension.

    Each unit carries a scale to its dimension's base unit; converting
    between units of the same dimension multiplies by the scale ratio.
    Identical unit strings convert as the identity even when the unit is
    unknown, so free-form units (percentages, ratios, temperatures) pass
    through untouched as long as both sides agree.
    """

    def __init__(self, scales: Mapping[str, tuple[str, float]], aliases: Mapping[str, str] | None = None):
        self._scales = dict(scales)
        self._aliases = dict(aliases or {})

    def canonical_name(self, unit: str) -> str:
        unit = unit.strip()
        return self._aliases.get(unit, unit)

    def knows(self, unit: str) -> bool:
        return self.canonical_name(unit) in self._scales

    def with_unit(self, unit: str, dimension: str, scale: float) -> "UnitTable":
        scales = dict(self._scales)
        scales[unit] = (dimension, scale)
        return UnitTable(scales, self._aliases)

    def factor_between(self, from_unit: str, to_unit: str) -> float:
        if from_unit.strip() == to_unit.strip():
            return 1.0
        src, dst = self.canonical_name(from_unit), self.canonical_name(to_unit)
        if src == dst:
            return 1.0
        if src not in self._scales:
            raise UnitError(f"unknown unit {from_unit!r} (converting to {to_unit!r})")
        if dst not in self._scales:
            raise UnitError(f"unknown unit {to_unit!r} (converting from {from_unit!r})")
        src_dim, src_scale = self._scales[src]
        dst_dim, dst_scale = self._scales[dst]
        if src_dim != dst_dim:
            raise UnitError(
                f"units {from_unit!r} ({src_dim}) and {to_unit!r} ({dst_dim}) "
                "measure different dimensions"
            )
        return src_scale / dst_scale


def default_unit_table() -> UnitTable:
    return UnitTable(
        scales={
            "kWh": ("energy", 1.0),
            "MWh": ("energy", 1000.0),
            "GJ": ("energy", 1000.0 / 3.6),
            "kg": ("mass", 1.0),
            "t": ("mass", 1000.0),
            "g": ("mass", 0.001),
            "L": ("volume", 1.0),
            "m3": ("volume", 1000.0),
            "km": ("distance", 1.0),
            "piece": ("count", 1.0),
        },
        aliases={
            "m³": "m3",
            "l": "L",
            "litre": "L",
            "liter": "L",
            "tonne": "t",
            "ton": "t",
            "kwh": "kWh",
            "mwh": "MWh",
            "pieces": "piece",
            "pc": "piece",
        },
    )


_DEFAULT_UNITS = default_unit_table()


def convert_unit(
    quantity: Quantity | float | int,
    from_unit: str,
    to_unit: str,
    table: UnitTable | None = None,
) -> Quantity | float:
    """Convert a quantity between units of the same dimension.

    Scalars come back as floats, quantities as quantities.
    """
    table = table or _DEFAULT_UNITS
    factor = table.factor_between(from_unit, to_unit)
    if isinstance(quantity, Quantity):
        if factor == 1.0:
            return quantity
        return Quantity(quantity.lower * factor, quantity.upper * factor)
    return float(quantity) * factor


@dataclass(frozen=True)
class InventoryItem:
    activity: str
    quantity: Quantity
    unit: str
    lifecycle_stage: LifecycleStage = LifecycleStage.RAW_MATERIAL

    def __post_init__(self):
        if self.quantity.lower < 0:
            raise ValueError(
                f"inventory quantity for {self.activity!r} must be nonnegative, "
                f"got {self.quantity}"
            )


@dataclass(frozen=True)
class EmissionFactor:
    activity: str
    factor: float
    canonical_unit: str
    source_note: str = ""

    def __post_init__(self):
        if self.factor < 0:
            raise ValueError(
                f"emission factor for {self.activity!r} must be nonnegative, "
                f"got {self.factor}"
            )


class EmissionFactorDb:
    """One emission factor per activity, loadable from a versioned CSV."""

    def __init__(self, factors: Iterable[EmissionFactor] = ()):
        self._factors: dict[str, EmissionFactor] = {}
        for f in factors:
            self.add(f)

    def add(self, factor: EmissionFactor) -> None:
        if factor.activity in self._factors:
            raise FormatError(f"duplicate emission factor for activity {factor.activity!r}")
        self._factors[factor.activity] = factor

    def get(self, activity: str) -> EmissionFactor | None:
        return self._factors.get(activity)

    def __contains__(self, activity: str) -> bool:
        return activity in self._factors

    def __len__(self) -> int:
        return len(self._factors)

    def activities(self) -> list[str]:
        return sorted(self._factors)

    @classmethod
    def from_csv(cls, path: str | Path) -> "EmissionFactorDb":
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise FormatError(f"cannot read factor database {path}: {exc}") from None
        reader = csv.reader(text.splitlines())
        rows = list(reader)
        if not rows or rows[0] != FACTOR_CSV_HEADER:
            raise FormatError(
                f"factor database {path} must start with header "
                f"{','.join(FACTOR_CSV_HEADER)!r}"
            )
        db = cls()
        for lineno, row in enumerate(rows[1:], start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 4:
                raise FormatError(f"{path}:{lineno}: expected 4 columns, got {len(row)}")
            activity, factor_text, unit, note = (cell.strip() for cell in row)
            try:
                factor = float(factor_text)
            except ValueError:
                raise FormatError(
                    f"{path}:{lineno}: factor {factor_text!r} is not a number"
                ) from None
            try:
                db.add(EmissionFactor(activity, factor, unit, note))
            except (ValueError, FormatError) as exc:
                raise FormatError(f"{path}:{lineno}: {exc}") from None
        return db

    def to_csv(self, path: str | Path) -> None:
        path = Path(path)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(FACTOR_CSV_HEADER)
            for activity in self.activities():
                f = self._factors[activity]
                writer.writerow([f.activity, repr(f.factor), f.canonical_unit, f.source_note])


@dataclass(frozen=True)
class ItemContribution:
    activity: str
    contribution: Quantity
    lifecycle_stage: LifecycleStage


@dataclass(frozen=True)
class FootprintResult:
    total: Quantity
    per_item: tuple[ItemContribution, ...]
    functional_unit: str
    scope: Scope

    def to_json_obj(self) -> dict:
        return {
            "total_kgco2e": self.total.as_json_value(),
            "functional_unit": self.functional_unit,
            "scope": self.scope.value,
            "per_item": [
                {
                    "activity": c.activity,
                    "contribution_kgco2e": c.contribution.as_json_value(),
                    "lifecycle_stage": c.lifecycle_stage.value,
                }
                for c in self.per_item
            ],
        }

    def write_json(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_json_obj(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["activity", "lifecycle_stage", "contribution_lower_kgco2e", "contribution_upper_kgco2e"]
            )
            for c in self.per_item:
                writer.writerow(
                    [
                        c.activity,
                        c.lifecycle_stage.value,
                        repr(c.contribution.lower),
                        repr(c.contribution.upper),
                    ]
                )
            writer.writerow(["TOTAL", self.scope.value, repr(self.total.lower), repr(self.total.upper)])


def compute_footprint(
    items: Sequence[InventoryItem],
    factors: EmissionFactorDb,
    scope: Scope = Scope.CRADLE_TO_GATE,
    functional_unit: str = "unit",
    units: UnitTable | None = None,
) -> FootprintResult:
    """Aggregate inventory items into a footprint with interval propagation.

    Every item needs a factor; any that lack one abort the whole run with
    the full list of unmatched activities, never a partial total.
    """
    units = units or _DEFAULT_UNITS
    missing = sorted({i.activity for i in items if i.activity not in factors})
    if missing:
        raise AccountingError(
            "no emission factor for: " + ", ".join(missing),
            missing_activities=missing,
        )
    if scope is Scope.CRADLE_TO_GATE:
        out_of_scope = sorted(
            {i.activity for i in items if i.lifecycle_stage not in _GATE_STAGES}
        )
        if out_of_scope:
            raise AccountingError(
                "cradle-to-gate scope excludes use/end-of-life items: "
                + ", ".join(out_of_scope)
            )

    contributions: list[ItemContribution] = []
    total = Quantity.point(0.0)
    for item in items:
        factor = factors.get(item.activity)
        assert factor is not None
        converted = convert_unit(item.quantity, item.unit, factor.canonical_unit, units)
        assert isinstance(converted, Quantity)
        contribution = converted.scale(factor.factor)
        contributions.append(
            ItemContribution(item.activity, contribution, item.lifecycle_stage)
        )
        total = total + contribution
    return FootprintResult(
        total=total,
        per_item=tuple(contributions),
        functional_unit=functional_unit,
        scope=scope,
    )
