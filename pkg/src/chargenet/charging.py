"""CCCV battery model: usable driving range and charge-time estimation.

The charge curve has two phases. Below the CV transition state of charge the
charger delivers its rated power (constant current, linear energy in time).
Above it the power decays exponentially with time constant ``cv_tau_min``,
so the tail is slow and the last few percent may be unreachable outright.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

from .ingest import DuplicateId, ParseError


class UnreachableSoc(ValueError):
    """Requested target SOC lies beyond the CV-phase energy asymptote."""


@dataclass(frozen=True)
class EVModel:
    """Vehicle battery parameters.

    soc_min is the reserve the planner never dips below; soc_cv is where
    charging switches from constant power to exponential taper.
    """

    name: str
    battery_kwh: float
    rated_range_mi: float
    soc_min: float = 0.15
    soc_cv: float = 0.80
    cv_tau_min: float = 20.0

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("EV model name must be non-empty")
        if not (math.isfinite(self.battery_kwh) and self.battery_kwh > 0):
            raise ValueError(f"battery_kwh must be positive, got {self.battery_kwh!r}")
        if not (math.isfinite(self.rated_range_mi) and self.rated_range_mi > 0):
            raise ValueError(f"rated_range_mi must be positive, got {self.rated_range_mi!r}")
        if not 0.0 <= self.soc_min < self.soc_cv <= 1.0:
            raise ValueError(
                f"need 0 <= soc_min < soc_cv <= 1, got {self.soc_min!r}, {self.soc_cv!r}"
            )
        if not (math.isfinite(self.cv_tau_min) and self.cv_tau_min > 0):
            raise ValueError(f"cv_tau_min must be positive, got {self.cv_tau_min!r}")


# Built-in catalog spanning the short/typical/long range points of current
# production EVs. Loaded catalogs (load_ev_models) can replace or extend it.
DEFAULT_EV_MODELS: dict[str, EVModel] = {
    m.name: m
    for m in (
        EVModel(name="base209", battery_kwh=50.0, rated_range_mi=209.0),
        EVModel(name="lr281", battery_kwh=60.0, rated_range_mi=281.0),
        EVModel(name="max353", battery_kwh=95.0, rated_range_mi=353.0),
    )
}


def cc_range_miles(model: EVModel) -> float:
    """Miles drivable on the constant-current band of the battery.

    This is the planning range between charging stops: depart at soc_cv
    (charging past it is slow) and keep soc_min in reserve.
    """
    return (model.soc_cv - model.soc_min) * model.rated_range_mi


def charge_time_minutes(
    model: EVModel, power_kw: float, soc_from: float, soc_to: float
) -> float:
    """Minutes to charge from ``soc_from`` to ``soc_to`` at a rated power.

    CC phase (up to soc_cv) charges at ``power_kw`` flat. The CV phase
    delivers power_kw * exp(-t / cv_tau_min), whose total energy converges
    to power_kw * cv_tau_min / 60 kWh; a target needing at least that much
    CV energy raises :class:`UnreachableSoc`.
    """
    if not (math.isfinite(power_kw) and power_kw > 0):
        raise ValueError(f"power_kw must be positive, got {power_kw!r}")
    if not 0.0 <= soc_from <= soc_to <= 1.0:
        raise ValueError(f"need 0 <= soc_from <= soc_to <= 1, got {soc_from!r}, {soc_to!r}")

    minutes = 0.0

    cc_hi = min(soc_to, model.soc_cv)
    if soc_from < cc_hi:
        energy_cc = (cc_hi - soc_from) * model.battery_kwh
        minutes += energy_cc / power_kw * 60.0

    cv_lo = max(soc_from, model.soc_cv)
    if soc_to > cv_lo:
        energy_cv = (soc_to - cv_lo) * model.battery_kwh
        asymptote_kwh = power_kw * model.cv_tau_min / 60.0
        if energy_cv >= asymptote_kwh:
            raise UnreachableSoc(
                f"target soc {soc_to} needs {energy_cv:.3f} kWh in the CV phase "
                f"but the taper tops out at {asymptote_kwh:.3f} kWh"
            )
        minutes += -model.cv_tau_min * math.log(1.0 - energy_cv / asymptote_kwh)

    return minutes


_EV_REQUIRED = ("name", "battery_kwh", "rated_range_mi")
_EV_OPTIONAL = ("soc_min", "soc_cv", "cv_tau_min")


def load_ev_models(path: str) -> list[EVModel]:
    """Load a vehicle catalog from CSV.

    Columns: name, battery_kwh, rated_range_mi, and optionally soc_min,
    soc_cv, cv_tau_min (blank cells fall back to the model defaults).
    """
    models: list[EVModel] = []
    seen: set[str] = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in _EV_REQUIRED:
            if col not in header:
                raise ParseError(path, 0, col, "missing required column")
        for row_num, row in enumerate(reader, start=1):
            kwargs = {}
            for col in _EV_REQUIRED[1:] + _EV_OPTIONAL:
                raw = (row.get(col) or "").strip()
                if raw == "":
                    if col in _EV_REQUIRED:
                        raise ParseError(path, row_num, col, "missing value")
                    continue
                try:
                    kwargs[col] = float(raw)
                except ValueError:
                    raise ParseError(path, row_num, col, f"not a number: {raw!r}") from None
            name = (row.get("name") or "").strip()
            if not name:
                raise ParseError(path, row_num, "name", "missing value")
            if name in seen:
                raise DuplicateId(f"{path}: duplicate EV model name {name!r}")
            seen.add(name)
            try:
                models.append(EVModel(name=name, **kwargs))
            except ValueError as exc:
                raise ParseError(path, row_num, "name", str(exc)) from None
    return models
