"""Integer combinatorics of Cantor-circle mapping schemes.

Everything here is exact: Fractions for the admissibility sum and covering
degree, plain integers elsewhere.  A partition vector d = (d_1, ..., d_{n+1})
lists the covering degrees of the n+1 preimage annuli, ordered innermost to
outermost; scheme types I/II/III record how the two simply connected
components map, which forces the parity of n (I: odd, II/III: even).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import EmptyRange, ParityViolation, ValidationError

TYPE_I = "I"
TYPE_II = "II"
TYPE_III = "III"
SCHEME_TYPES = (TYPE_I, TYPE_II, TYPE_III)

PLUS = "+"
MINUS = "-"


def _as_tuple(d):
    out = tuple(int(x) for x in d)
    if len(out) < 1:
        raise ValidationError("empty degree vector")
    if any(x < 1 for x in out):
        raise ValidationError(f"degrees must be >= 1, got {out}")
    return out


def is_admissible(d) -> bool:
    """All entries >= 2 and sum of reciprocals < 1, in exact arithmetic."""
    d = _as_tuple(d)
    if any(x < 2 for x in d):
        return False
    return sum(Fraction(1, x) for x in d) < 1


@dataclass(frozen=True)
class PartitionVector:
    """Admissible degree vector with its derived quantities."""

    d: tuple

    def __post_init__(self):
        d = _as_tuple(self.d)
        object.__setattr__(self, "d", d)
        if not is_admissible(d):
            raise ValidationError(f"{d} is not admissible")
        if sum(1 for x in d if x == 2) > 1:
            raise ValidationError(f"{d} has more than one entry equal to 2")
        if self.total < 5:
            raise ValidationError(f"total degree {self.total} below 5")
        if (self.n + 1) ** 2 >= self.total:
            raise ValidationError(
                f"n = {self.n} violates n < sqrt(d) - 1 for total {self.total}")

    @property
    def n(self) -> int:
        return len(self.d) - 1

    @property
    def total(self) -> int:
        return sum(self.d)

    def reversed(self) -> "PartitionVector":
        return PartitionVector(tuple(reversed(self.d)))


def _check_parity(d, scheme_type):
    d = _as_tuple(d)
    n = len(d) - 1
    if scheme_type not in SCHEME_TYPES:
        raise ValidationError(f"unknown scheme type {scheme_type!r}")
    if scheme_type == TYPE_I and n % 2 == 0:
        raise ParityViolation(f"Type I needs odd n, got n = {n}")
    if scheme_type in (TYPE_II, TYPE_III) and n % 2 == 1:
        raise ParityViolation(f"Type {scheme_type} needs even n, got n = {n}")
    return d, n


def scheme_tau(scheme_type, n):
    """The induced index map on {0, 'inf', 1..n} for each scheme type."""
    if scheme_type == TYPE_I:
        tau = {0: 0, "inf": 0}
        for j in range(1, n + 1):
            tau[j] = "inf" if j % 2 == 1 else 0
    elif scheme_type == TYPE_II:
        tau = {0: "inf", "inf": 0}
        for j in range(1, n + 1):
            tau[j] = 0 if j % 2 == 1 else "inf"
    else:
        tau = {0: 0, "inf": "inf"}
        for j in range(1, n + 1):
            tau[j] = "inf" if j % 2 == 1 else 0
    return tau


@dataclass(frozen=True)
class MappingScheme:
    scheme_type: str
    partition: PartitionVector
    tau: dict = field(default=None)

    def __post_init__(self):
        _check_parity(self.partition.d, self.scheme_type)
        if self.tau is None:
            object.__setattr__(
                self, "tau", scheme_tau(self.scheme_type, self.partition.n))


@dataclass(frozen=True)
class Characteristic:
    """Boundary-marking signs, one per critical annular component."""

    chi: tuple

    def __post_init__(self):
        chi = tuple(self.chi)
        if any(c not in (PLUS, MINUS) for c in chi):
            raise ValidationError(f"characteristic symbols must be +/-: {chi}")
        object.__setattr__(self, "chi", chi)

    def __len__(self):
        return len(self.chi)

    def __iter__(self):
        return iter(self.chi)


def enumerate_admissible(total, n):
    """All ordered admissible (d_1, ..., d_{n+1}) with the given total.

    Ordered tuples in lexicographic order; (2,3) and (3,2) are distinct.
    """
    total = int(total)
    n = int(n)
    if total < 5:
        raise EmptyRange(f"total degree must be >= 5, got {total}")
    if n < 1 or (n + 1) ** 2 >= total:
        raise EmptyRange(f"need 1 <= n < sqrt({total}) - 1, got n = {n}")
    parts = n + 1
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            if remaining >= 2:
                cand = prefix + (remaining,)
                if is_admissible(cand):
                    out.append(cand)
            return
        for v in range(2, remaining - 2 * (slots - 1) + 1):
            rec(prefix + (v,), remaining - v, slots - 1)

    rec((), total, parts)
    return [PartitionVector(d) for d in out]


def covering_degree(d) -> int:
    """(1 - sum 1/d_k) * lcm(d_1, ..., d_{n+1}), exactly an integer."""
    d = _as_tuple(d)
    if not is_admissible(d):
        raise ValidationError(f"{d} is not admissible")
    ell = math.lcm(*d)
    value = (1 - sum(Fraction(1, x) for x in d)) * ell
    assert value.denominator == 1
    return int(value)


def is_rho_homeomorphism(d) -> bool:
    """Exact test of sum 1/d_k + 1/lcm = 1."""
    d = _as_tuple(d)
    if not is_admissible(d):
        raise ValidationError(f"{d} is not admissible")
    ell = math.lcm(*d)
    return sum(Fraction(1, x) for x in d) + Fraction(1, ell) == 1


@dataclass(frozen=True)
class MarkingCounts:
    s: tuple      # s_1 .. s_n
    s_inf: int


def _deltas(d, chi):
    # delta_j = d_{j+1} when eps_j = '-', d_j when eps_j = '+'
    return tuple(d[j + 1] if eps == MINUS else d[j]
                 for j, eps in enumerate(chi))


def marking_counts(d, scheme_type, chi) -> MarkingCounts:
    """Counts of admissible marked points per critical component.

    s_inf is d_{n+1} (I), 1 (II) or d_{n+1} - 1 (III); each s_j starts from
    d_j + d_{j+1} - delta_j, and for types I and III the odd-j counts pick up
    a factor s_inf.
    """
    d, n = _check_parity(d, scheme_type)
    chi = chi if isinstance(chi, Characteristic) else Characteristic(tuple(chi))
    if len(chi) != n:
        raise ValidationError(f"characteristic length {len(chi)} != n = {n}")
    deltas = _deltas(d, tuple(chi))
    if scheme_type == TYPE_I:
        s_inf = d[n]
    elif scheme_type == TYPE_II:
        s_inf = 1
    else:
        s_inf = d[n] - 1
    s = []
    for j in range(1, n + 1):
        base = d[j - 1] + d[j] - deltas[j - 1]
        if scheme_type == TYPE_II:
            s.append(base)
        else:
            s.append(base * s_inf if j % 2 == 1 else base)
    return MarkingCounts(s=tuple(s), s_inf=s_inf)


def p2_fiber_bound(d, scheme_type):
    """(s_0, fiber bound) for the projection to the unmarked component.

    s_0 counts boundary fixed points (of f, or f^2 for type II): d_1 - 1 for
    types I and III, d_1 d_{n+1} - 1 for type II.  The fiber bound is s_0 for
    type I and 2 s_0 otherwise.
    """
    d, n = _check_parity(d, scheme_type)
    if scheme_type == TYPE_II:
        s0 = d[0] * d[n] - 1
    else:
        s0 = d[0] - 1
    bound = s0 if scheme_type == TYPE_I else 2 * s0
    return s0, bound


@dataclass(frozen=True)
class AutBound:
    cyclic_order_divisor: int
    dihedral_possible: bool


def _signed_gcd(d, sign_of_even):
    # gcd over k (1-based) of d_k + (-1)^k (sign_of_even=+1) or d_k - (-1)^k
    vals = []
    for k, dk in enumerate(d, start=1):
        parity = 1 if k % 2 == 0 else -1
        vals.append(dk + sign_of_even * parity)
    return math.gcd(*vals)


def aut_bound(d, scheme_type) -> AutBound:
    """Divisibility bound for the automorphism group of a scheme-type map.

    The cyclic order divides gcd{d_k + (-1)^k} for types I and III and
    gcd{d_k - (-1)^k} for type II; a dihedral group needs type II or III
    with a palindromic degree vector.
    """
    d, n = _check_parity(d, scheme_type)
    sign = -1 if scheme_type == TYPE_II else 1
    ell = _signed_gcd(d, sign)
    dihedral = (scheme_type in (TYPE_II, TYPE_III)
                and d == tuple(reversed(d)) and n % 2 == 0)
    return AutBound(cyclic_order_divisor=ell, dihedral_possible=dihedral)


def rot_group_order_divisors(kind, *, degree=None, e=None, delta=None, sign=PLUS):
    """Modulus that the order of a rotation symmetry group must divide.

    kind='disk': order divides D -/+ 1 (sign '+' gives D - 1).
    kind='annulus': order divides gcd(delta +/- 1, e), with gcd(0, e) = e.
    """
    if sign not in (PLUS, MINUS):
        raise ValidationError("sign must be '+' or '-'")
    if kind == "disk":
        if degree is None or degree < 2:
            raise ValidationError("disk kind needs degree D >= 2")
        return degree - 1 if sign == PLUS else degree + 1
    if kind == "annulus":
        if e is None or delta is None or not e > delta >= 1:
            raise ValidationError("annulus kind needs e > delta >= 1")
        shifted = delta + 1 if sign == PLUS else delta - 1
        return math.gcd(shifted, e)
    raise ValidationError(f"unknown kind {kind!r}")


def torus_cover_criterion(d, scheme_type) -> bool:
    """Arithmetic condition for the component to be finitely covered by
    R^(4d-4-n) x T^n: trivial rotation gcd, and for types II/III a
    non-palindromic degree vector."""
    d, n = _check_parity(d, scheme_type)
    sign = -1 if scheme_type == TYPE_II else 1
    if _signed_gcd(d, sign) != 1:
        return False
    if scheme_type in (TYPE_II, TYPE_III) and d == tuple(reversed(d)):
        return False
    return True


def scheme_table_rows(total, n, scheme_type=None):
    """CSV rows (d, n, total, deg_rho, homeo, s0, bound, aut_l, dihedral,
    torus_cover) for every admissible vector of the given shape."""
    rows = []
    for pv in enumerate_admissible(total, n):
        sigma = scheme_type
        if sigma is None:
            sigma = TYPE_I if pv.n % 2 == 1 else TYPE_II
        s0, bound = p2_fiber_bound(pv.d, sigma)
        ab = aut_bound(pv.d, sigma)
        rows.append({
            "d": " ".join(str(x) for x in pv.d),
            "n": pv.n,
            "total": pv.total,
            "deg_rho": covering_degree(pv.d),
            "homeo": is_rho_homeomorphism(pv.d),
            "s0": s0,
            "bound": bound,
            "aut_l": ab.cyclic_order_divisor,
            "dihedral": ab.dihedral_possible,
            "torus_cover": torus_cover_criterion(pv.d, sigma),
        })
    return rows
