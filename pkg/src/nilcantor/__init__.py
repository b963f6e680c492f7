"""nilcantor: exact arithmetic for Heisenberg group chains and their towers.

The package computes, in exact integer arithmetic, with

  * supernatural (Steinitz) numbers, their prime spectra, asymptotic
    equivalence and the type order (:mod:`nilcantor.steinitz`),
  * the integer Heisenberg group and its box subgroups, with closed-form
    cores, relative cores and indices (:mod:`nilcantor.heisenberg`),
  * symbolic descending chains of box subgroups, their finite quotient
    towers, discriminant levels and Steinitz orders (:mod:`nilcantor.towers`),
  * stability / wildness and topological-freeness certificates built from
    trivial-action kernels (:mod:`nilcantor.dynamics`),
  * dumb enumeration oracles that every closed form is validated against
    (:mod:`nilcantor.oracle`),

and exposes a CLI (``nilcantor``) that emits deterministic, exact-integer
reports (:mod:`nilcantor.cli`).
"""

__version__ = "0.1.0"

from .errors import ContractError, ResourceError, UndecidableError
from .heisenberg import GAMMA, BoxSubgroup, HeisenbergElement
from .steinitz import INF, PrimeSpectra, SteinitzNumber
from .towers import ChainSpec, CosetSpace, FiniteQuotient, builtin_chain
from .dynamics import (
    Certificate,
    KernelReport,
    freeness_certificate,
    trivial_action_kernel,
    wildness_certificate,
)

__all__ = [
    "__version__",
    "ContractError",
    "ResourceError",
    "UndecidableError",
    "BoxSubgroup",
    "HeisenbergElement",
    "GAMMA",
    "INF",
    "SteinitzNumber",
    "PrimeSpectra",
    "ChainSpec",
    "FiniteQuotient",
    "CosetSpace",
    "builtin_chain",
    "Certificate",
    "KernelReport",
    "trivial_action_kernel",
    "wildness_certificate",
    "freeness_certificate",
]
