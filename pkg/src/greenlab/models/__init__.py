"""The three concrete model spaces and their registry."""

from __future__ import annotations

import re

from ..errors import ConfigError
from ..kernels import ModelSpace
from .bilaplace import bilaplace_model
from .interval import interval_model
from .newtonian import newtonian_model

MODEL_NAMES = ("interval", "bilaplace", "newtonian5", "newtonian6")


def get_model(name: str) -> ModelSpace:
    """Resolve a model by its user-facing name.

    Accepts "interval", "bilaplace" (alias "bilaplace1d"), and
    "newtonian<N>" for N >= 5.
    """
    key = str(name).strip().lower()
    if key == "interval":
        return interval_model()
    if key in ("bilaplace", "bilaplace1d"):
        return bilaplace_model()
    m = re.fullmatch(r"newtonian(\d+)", key)
    if m:
        dim = int(m.group(1))
        try:
            return newtonian_model(dim)
        except Exception as exc:
            raise ConfigError(f"cannot build model {name!r}: {exc}") from exc
    raise ConfigError(
        f"unknown model {name!r}; available: {', '.join(MODEL_NAMES)}")
