"""Access to the shipped catalog of worked examples (``data/catalog.json``)."""
from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from .errors import UnsupportedParameters


@lru_cache(maxsize=None)
def load() -> dict:
    text = resources.files("normord").joinpath("data/catalog.json").read_text()
    return json.loads(text)


def flow_entry(name: str) -> dict:
    flows = load()["flows"]
    if name not in flows:
        raise UnsupportedParameters(f"unknown flow example {name!r}; choose from {sorted(flows)}")
    return flows[name]


def sequence_entry(name: str) -> dict:
    seqs = load()["sequences"]
    if name not in seqs:
        raise UnsupportedParameters(f"unknown catalog entry {name!r}; choose from {sorted(seqs)}")
    return seqs[name]


def resolve_params(entry: dict, **given) -> dict:
    """Merge defaults with ``given`` and add the derived ``rm1`` / ``e`` fields."""
    params = dict(entry.get("defaults", {}))
    params.update({k: v for k, v in given.items() if v is not None and k in entry.get("params", {})})
    if "r" in params:
        r = params["r"]
        if isinstance(r, bool) or not isinstance(r, int) or r < 2:
            raise UnsupportedParameters(f"r must be an integer > 1, got {r!r}")
        params["rm1"] = r - 1
    if "s" in params:
        s = params["s"]
        if isinstance(s, bool) or not isinstance(s, int) or s < 0:
            raise UnsupportedParameters(f"s must be an integer >= 0, got {s!r}")
        params["e"] = s - params["r"] + 1
        if params["e"] == 0:
            raise UnsupportedParameters("s = r - 1 makes the closed-form prefunction degenerate")
    return params


def fill(template: str, x=None, **params) -> str:
    """Substitute parameters, and the point ``x`` (a rational or a symbol name)."""
    if x is None:
        point = "x"
    elif isinstance(x, str):
        point = x
    else:
        point = f"({Fraction(x)})"
    return template.format(x=point, **params)
