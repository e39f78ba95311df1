"""Constant profiles for the randomized algorithms.

The ``paper`` profile keeps the analysis constants verbatim. The ``desk``
profile shrinks the repetition and hitting constants so that runs at small n
are not dominated by repetitions. Failure budgets are never scaled.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._util import ceil_log2
from .exceptions import ParameterError


@dataclass(frozen=True)
class Profile:
    """Named bundle of algorithm constants.

    Attributes
    ----------
    name : str
    repetition : int
        Multiplier of the majority-vote repetition count in approximate counting.
    hit_factor : int
        Constant c in the ``c ln n`` bound on sampled neighbours (64 or 16).
    degree_coef : int
        Coefficient of the degree threshold ``coef * ceil(log2 n) ** degree_power``.
    degree_power : int
    """

    name: str
    repetition: int
    hit_factor: int
    degree_coef: int
    degree_power: int

    def degree_parameter(self, n: int) -> int:
        """Degree threshold used by the top-level connectivity loop."""
        return self.degree_coef * ceil_log2(n) ** self.degree_power

    def low_bound(self, ln_n: float) -> float:
        """Sparsity bound for rows restricted to a sampled column set."""
        return 3 * self.hit_factor * ln_n


PAPER = Profile("paper", repetition=200, hit_factor=64, degree_coef=1024, degree_power=2)
DESK = Profile("desk", repetition=20, hit_factor=16, degree_coef=8, degree_power=1)

PROFILES = {p.name: p for p in (PAPER, DESK)}


def get_profile(profile) -> Profile:
    if isinstance(profile, Profile):
        return profile
    try:
        return PROFILES[str(profile)]
    except KeyError:
        raise ParameterError(f"unknown profile {profile!r}; choose from {sorted(PROFILES)}") from None
