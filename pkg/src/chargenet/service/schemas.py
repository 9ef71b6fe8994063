"""Request bodies for the HTTP service.

Kept separate from the domain dataclasses on purpose: these define the
wire contract (field names, defaults, strictness), nothing more. Responses
are the library serializations passed through untouched.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field


class LatLon(BaseModel):
    model_config = ConfigDict(extra="forbid")

    lat: float
    lon: float


class PlanRequest(BaseModel):
    """Body of POST /plan. 'from'/'to' mirror the CLI flag names."""

    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    origin: LatLon = Field(alias="from")
    destination: LatLon = Field(alias="to")
    ev: str = "lr281"
    soc_start: float = 0.8
    alpha: float = 1.0
    objective: Literal["time", "distance"] = "time"
    cv_overshoot: bool = False


class SiteProposalRequest(BaseModel):
    """Body of POST /site-proposals."""

    model_config = ConfigDict(extra="forbid")

    k: int = 5
    seed: int = 0
    radius_mi: float | None = None
