"""System and interaction descriptions shared by the evaluators and the simulator."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Union

from .combinatorics import Statistics
from .errors import ValidationError

__all__ = [
    "SystemSpec",
    "Uniform",
    "RScheme",
    "Table",
    "VarianceScheme",
    "InteractionSpec",
    "YTermPolicy",
    "to_fraction",
]

Number = Union[int, float, str, Fraction]


def to_fraction(value: Number) -> Fraction:
    """Exact rational from user input; floats go through their shortest repr so 0.2 -> 1/5."""
    if isinstance(value, bool):
        raise ValidationError(f"not a number: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise ValidationError(f"variance must be finite, got {value}")
        return Fraction(repr(value))
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"not a rational number: {value!r}") from None


@dataclass(frozen=True)
class SystemSpec:
    """Two species: m1 particles in N1 orbitals and m2 particles in N2 orbitals."""

    stats: Statistics
    N1: int
    m1: int
    N2: int
    m2: int

    def __post_init__(self):
        object.__setattr__(self, "stats", Statistics.parse(self.stats))
        for name in ("N1", "m1", "N2", "m2"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value:
                raise ValidationError(f"{name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        if self.N1 < 1 or self.N2 < 1:
            raise ValidationError(f"need N1, N2 >= 1, got N1={self.N1}, N2={self.N2}")
        if self.m1 < 0 or self.m2 < 0:
            raise ValidationError(f"particle numbers must be >= 0, got m1={self.m1}, m2={self.m2}")
        if self.m1 + self.m2 < 1:
            raise ValidationError("need at least one particle (m1 + m2 >= 1)")
        if self.stats is Statistics.FERMION and (self.m1 > self.N1 or self.m2 > self.N2):
            raise ValidationError(
                f"fermions need m1 <= N1 and m2 <= N2, got ({self.N1},{self.m1},{self.N2},{self.m2})"
            )

    @property
    def species(self):
        return ((self.N1, self.m1), (self.N2, self.m2))


@dataclass(frozen=True)
class Uniform:
    """v^2(i, j) = v2 for every split."""

    v2: Fraction = Fraction(1)
    name = "uniform"

    def __post_init__(self):
        object.__setattr__(self, "v2", to_fraction(self.v2))
        if self.v2 < 0:
            raise ValidationError(f"variance must be >= 0, got {self.v2}")

    def variance(self, i: int, j: int) -> Fraction:
        return self.v2


@dataclass(frozen=True)
class RScheme:
    """v^2(i, j) = R v2 when both species take part (i, j > 0), v2 otherwise."""

    v2: Fraction = Fraction(1)
    R: Fraction = Fraction(1)
    name = "rscheme"

    def __post_init__(self):
        object.__setattr__(self, "v2", to_fraction(self.v2))
        object.__setattr__(self, "R", to_fraction(self.R))
        if self.v2 < 0 or self.R < 0:
            raise ValidationError(f"v2 and R must be >= 0, got v2={self.v2}, R={self.R}")

    def variance(self, i: int, j: int) -> Fraction:
        if i > 0 and j > 0:
            return self.R * self.v2
        return self.v2


@dataclass(frozen=True)
class Table:
    """Explicit v^2(i, j) for every split i + j = k."""

    entries: Mapping[tuple, Fraction] = field(default_factory=dict)
    name = "table"

    def __post_init__(self):
        clean = {}
        for key, value in dict(self.entries).items():
            i, j = (int(x) for x in key)
            v = to_fraction(value)
            if v < 0:
                raise ValidationError(f"variance v2({i},{j}) must be >= 0, got {v}")
            clean[(i, j)] = v
        object.__setattr__(self, "entries", clean)

    def variance(self, i: int, j: int) -> Fraction:
        try:
            return self.entries[(i, j)]
        except KeyError:
            raise ValidationError(f"variance table has no entry for (i, j) = ({i}, {j})") from None


VarianceScheme = Union[Uniform, RScheme, Table]


@dataclass(frozen=True)
class InteractionSpec:
    k: int
    scheme: VarianceScheme = field(default_factory=Uniform)

    def __post_init__(self):
        if isinstance(self.k, bool) or int(self.k) != self.k or self.k < 1:
            raise ValidationError(f"body rank k must be a positive integer, got {self.k!r}")
        object.__setattr__(self, "k", int(self.k))
        if isinstance(self.scheme, Table):
            wanted = {(i, self.k - i) for i in range(self.k + 1)}
            have = set(self.scheme.entries)
            if have != wanted:
                raise ValidationError(
                    f"variance table must cover exactly the splits {sorted(wanted)}, got {sorted(have)}"
                )

    def splits(self):
        """All (i, j) with i + j = k, i ascending."""
        return [(i, self.k - i) for i in range(self.k + 1)]

    def variances(self) -> dict:
        return {(i, j): self.scheme.variance(i, j) for i, j in self.splits()}

    def active_splits(self, sys: SystemSpec):
        """Splits that act on the (m1, m2) space with positive variance."""
        return [
            (i, j)
            for (i, j), v in self.variances().items()
            if v > 0 and i <= sys.m1 and j <= sys.m2
        ]


class YTermPolicy(str, enum.Enum):
    """How the <ABCABC> correlator of the sixth moment is evaluated.

    ``ASYMPTOTIC_U``: dilute-limit binomial product for Y, divided by the
    finite mu2^3 like every other term.  ``DROP``: Y = 0.
    ``ASYMPTOTIC_REDUCED``: the whole reduced ABCABC contribution is taken
    from the dilute limit (Y and mu2 both asymptotic).  ``EXACT_TRACE``: Y
    from explicit Wick contractions on the many-body space (small spaces only).
    """

    ASYMPTOTIC_U = "asymptotic_u"
    DROP = "drop"
    ASYMPTOTIC_REDUCED = "asymptotic_reduced"
    EXACT_TRACE = "exact_trace"

    @classmethod
    def parse(cls, value) -> "YTermPolicy":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "_")
        aliases = {"asymptoticu": cls.ASYMPTOTIC_U, "asymptotic": cls.ASYMPTOTIC_U}
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            choices = ", ".join(repr(p.value) for p in cls)
            raise ValidationError(f"unknown Y-term policy {value!r}; expected one of {choices}") from None

    @classmethod
    def default_for(cls, stats: Statistics) -> "YTermPolicy":
        return cls.ASYMPTOTIC_U if Statistics.parse(stats) is Statistics.FERMION else cls.DROP
