"""Finite-model verification workbench for relational QFT.

Everything here lives on a finite toy Poincare group: spacetime is the
lattice Z_N x Z_N in lightcone coordinates, boosts are multiplication by a
unit s mod N, and the frame space is a torsor for the resulting semidirect
product.  All integrals are finite sums, so covariance laws, causality
statements and Wightman-type identities become matrix identities that can
be checked to machine precision.
"""

from relqft.config import DEFAULT_CONFIG, ScenarioConfig, load_config
from relqft.lattice import (
    ModelParams,
    LatticePoint,
    GroupElement,
    FramePoint,
    compose,
    inverse,
    act,
    spacelike,
    causal_hull,
    region_spacelike,
)
from relqft.runner import run
from relqft.scenarios import CHECKS, SUITES

__all__ = [
    "ModelParams",
    "LatticePoint",
    "GroupElement",
    "FramePoint",
    "compose",
    "inverse",
    "act",
    "spacelike",
    "causal_hull",
    "region_spacelike",
    "ScenarioConfig",
    "DEFAULT_CONFIG",
    "load_config",
    "run",
    "CHECKS",
    "SUITES",
]

__version__ = "0.1.0"
