"""Bundled fixture quivers and representations used by the CLI and tests."""

from __future__ import annotations

from importlib import resources

from .quiver import Quiver, parse_quiver
from .reps import Representation, parse_rep

QUIVER_FILES = {
    "K2": "k2.quiver",
    "K3": "k3.quiver",
    "S4": "sub4.quiver",
    "S5": "sub5.quiver",
    "S8": "sub8.quiver",
    "EX39": "ex39.quiver",
}

REP_FILES = {
    # rep name -> (file, quiver name)
    "M": ("m5.rep", "K3"),
    "X0": ("x0.rep", "K2"),
    "X1": ("x1.rep", "K2"),
    "Malpha": ("malpha.rep", "S4"),
    "Mbeta": ("mbeta.rep", "S4"),
}


def fixture_text(filename: str) -> str:
    return resources.files("quiverglue").joinpath("fixtures", filename).read_text()


def load_quiver(name: str) -> Quiver:
    if name not in QUIVER_FILES:
        raise KeyError(f"unknown fixture quiver {name!r}")
    return parse_quiver(fixture_text(QUIVER_FILES[name]))


def load_rep(name: str) -> Representation:
    if name not in REP_FILES:
        raise KeyError(f"unknown fixture representation {name!r}")
    filename, quiver_name = REP_FILES[name]
    return parse_rep(fixture_text(filename), load_quiver(quiver_name))


def all_quivers():
    return {name: load_quiver(name) for name in QUIVER_FILES}
