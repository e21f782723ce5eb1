"""Weighted point sets (divisors) in tagged planar domains.

A divisor is an unordered finite multiset of complex points; multiplicity is
recorded by repetition.  Points are stored in canonical order (modulus, then
argument) so that serialization is deterministic.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

from .errors import OutOfDomain, ValidationError

_STRICT_MARGIN = 0.0  # membership is strict; no fudge on purpose


class Ambient:
    """Base tag for the domain a divisor lives in."""

    def contains(self, z: complex) -> bool:  # pragma: no cover - interface
        raise NotImplementedError

    def describe(self) -> str:  # pragma: no cover - interface
        raise NotImplementedError


class Disk(Ambient):
    """Open unit disk."""

    def contains(self, z):
        return abs(z) < 1.0

    def describe(self):
        return "disk"

    def __eq__(self, other):
        return isinstance(other, Disk)

    def __hash__(self):
        return hash("disk")


class Annulus(Ambient):
    """Open round annulus {r < |z| < 1}."""

    def __init__(self, r: float):
        if not 0.0 < r < 1.0:
            raise ValidationError(f"annulus inner radius must be in (0,1), got {r}")
        self.r = float(r)

    def contains(self, z):
        return self.r < abs(z) < 1.0

    def describe(self):
        return f"annulus({self.r})"

    def __eq__(self, other):
        return isinstance(other, Annulus) and other.r == self.r

    def __hash__(self):
        return hash(("annulus", self.r))


class Plane(Ambient):
    """All of C; used for free-floating root sets."""

    def contains(self, z):
        return True

    def describe(self):
        return "plane"

    def __eq__(self, other):
        return isinstance(other, Plane)

    def __hash__(self):
        return hash("plane")


class PuncturedPlane(Ambient):
    """C* = C minus the origin."""

    def contains(self, z):
        return z != 0

    def describe(self):
        return "punctured_plane"

    def __eq__(self, other):
        return isinstance(other, PuncturedPlane)

    def __hash__(self):
        return hash("punctured_plane")


class CircleDomainAmbient(Ambient):
    """Interior of a circle domain (outer circle minus inner closed disks)."""

    def __init__(self, domain):
        self.domain = domain

    def contains(self, z):
        return self.domain.contains(z)

    def describe(self):
        return f"circle_domain({id(self.domain):x})"

    def __eq__(self, other):
        return isinstance(other, CircleDomainAmbient) and other.domain is self.domain

    def __hash__(self):
        return hash(("circle_domain", id(self.domain)))


def _canonical_order(points):
    return tuple(sorted((complex(p) for p in points),
                        key=lambda p: (abs(p), cmath.phase(p), p.real, p.imag)))


@dataclass(frozen=True)
class Divisor:
    """Unordered weighted point set inside a tagged ambient domain."""

    points: tuple
    ambient: Ambient = field(default_factory=Plane)

    def __post_init__(self):
        pts = _canonical_order(self.points)
        if len(pts) < 1:
            raise ValidationError("divisor needs at least one point")
        for p in pts:
            if not self.ambient.contains(p):
                raise OutOfDomain(
                    f"point {p} not strictly inside {self.ambient.describe()}")
        object.__setattr__(self, "points", pts)

    @property
    def e(self) -> int:
        return len(self.points)

    def product(self) -> complex:
        out = 1.0 + 0.0j
        for p in self.points:
            out *= p
        return out

    def moduli(self):
        return tuple(abs(p) for p in self.points)

    def to_json(self):
        """JSON form: array of [re, im] pairs, multiplicity by repetition."""
        return [[p.real, p.imag] for p in self.points]

    @classmethod
    def from_json(cls, data, ambient=None):
        pts = tuple(complex(re, im) for re, im in data)
        return cls(pts, ambient if ambient is not None else Plane())


def points_from_json(data):
    return tuple(complex(re, im) for re, im in data)
