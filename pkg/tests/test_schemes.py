from fractions import Fraction
from math import gcd, lcm

import pytest

from abp import schemes
from abp.errors import EmptyRange, ParityViolation, ValidationError
from abp.schemes import (TYPE_I, TYPE_II, TYPE_III, Characteristic,
                         MappingScheme, PartitionVector, aut_bound,
                         covering_degree, enumerate_admissible, is_admissible,
                         is_rho_homeomorphism, marking_counts, p2_fiber_bound,
                         rot_group_order_divisors, scheme_tau,
                         torus_cover_criterion)


def all_admissible(max_total):
    """Independent brute-force enumeration of admissible ordered vectors."""
    out = []

    def rec(prefix, total):
        if len(prefix) >= 2 and sum(Fraction(1, x) for x in prefix) < 1:
            out.append(tuple(prefix))
        if total >= max_total:
            return
        for v in range(2, max_total - total + 1):
            rec(prefix + [v], total + v)

    rec([], 0)
    return [d for d in out if sum(d) <= max_total]


class TestAdmissibility:
    def test_examples(self):
        assert is_admissible((2, 3))
        assert not is_admissible((2, 2))
        assert is_admissible((3, 3, 4))
        assert not is_admissible((2, 4, 4))  # reciprocals sum to exactly 1
        assert not is_admissible((1, 5))

    def test_partition_vector_invariants(self):
        pv = PartitionVector((2, 3))
        assert pv.n == 1 and pv.total == 5
        with pytest.raises(ValidationError):
            PartitionVector((2, 2))

    def test_enumerate_five_one(self):
        got = [pv.d for pv in enumerate_admissible(5, 1)]
        assert got == [(2, 3), (3, 2)]

    def test_enumerate_empty_range(self):
        with pytest.raises(EmptyRange):
            enumerate_admissible(5, 2)

    def test_enumerate_ten_two(self):
        got = [pv.d for pv in enumerate_admissible(10, 2)]
        assert (3, 3, 4) in got
        assert (2, 4, 4) not in got

    def test_enumerate_matches_bruteforce(self):
        for total in range(5, 16):
            brute = sorted(d for d in all_admissible(total)
                           if sum(d) == total and len(d) == 2)
            if (1 + 1) ** 2 >= total:
                continue
            got = sorted(pv.d for pv in enumerate_admissible(total, 1))
            assert got == brute

    def test_closed_under_reversal(self):
        for total in range(5, 21):
            for n in (1, 2, 3):
                if (n + 1) ** 2 >= total:
                    continue
                vecs = {pv.d for pv in enumerate_admissible(total, n)}
                assert {tuple(reversed(d)) for d in vecs} == vecs


class TestCoveringDegree:
    @pytest.mark.parametrize("d,deg", [
        ((2, 3, 7), 1), ((2, 5), 3), ((3, 4), 5), ((2, 3), 1), ((3, 3, 4), 1)])
    def test_examples(self, d, deg):
        assert covering_degree(d) == deg

    @pytest.mark.parametrize("d,homeo", [
        ((2, 3), True), ((3, 3, 4), True), ((2, 5), False), ((2, 3, 7), True)])
    def test_homeomorphism_examples(self, d, homeo):
        assert is_rho_homeomorphism(d) is homeo

    def test_exhaustive_integrality_and_equivalence(self):
        checked = 0
        for total in range(5, 21):
            for n in (1, 2, 3):
                if (n + 1) ** 2 >= total:
                    continue
                for pv in enumerate_admissible(total, n):
                    deg = covering_degree(pv.d)
                    formula = ((1 - sum(Fraction(1, x) for x in pv.d))
                               * lcm(*pv.d))
                    assert deg == formula and formula.denominator == 1
                    assert deg >= 1
                    assert (deg == 1) == is_rho_homeomorphism(pv.d)
                    checked += 1
        assert checked > 100


class TestMarkingCounts:
    def test_type_ii_334(self):
        counts = marking_counts((3, 3, 4), TYPE_II, ("-", "-"))
        assert counts.s == (3, 3)
        assert counts.s_inf == 1

    def test_type_i_23(self):
        counts = marking_counts((2, 3), TYPE_I, ("+",))
        assert counts.s_inf == 3
        assert counts.s == (9,)

    def test_type_iii_626(self):
        counts = marking_counts((6, 2, 6), TYPE_III, ("+", "+"))
        assert counts.s_inf == 5
        assert counts.s == (10, 6)

    def test_parity_violation(self):
        with pytest.raises(ParityViolation):
            marking_counts((3, 3, 4), TYPE_I, ("-", "-"))
        with pytest.raises(ParityViolation):
            marking_counts((2, 3), TYPE_II, ("+",))

    def test_chi_length_checked(self):
        with pytest.raises(ValidationError):
            marking_counts((3, 3, 4), TYPE_II, ("-",))

    def test_characteristic_symbols(self):
        with pytest.raises(ValidationError):
            Characteristic(("x",))


class TestFiberBounds:
    def test_s0_334_type_ii(self):
        s0, bound = p2_fiber_bound((3, 3, 4), TYPE_II)
        assert s0 == 11
        assert bound == 22

    def test_bound_70_for_626(self):
        s0, bound = p2_fiber_bound((6, 2, 6), TYPE_II)
        assert s0 == 35
        assert bound == 70

    def test_type_i_23(self):
        s0, bound = p2_fiber_bound((2, 3), TYPE_I)
        assert (s0, bound) == (1, 1)


class TestAutBounds:
    def test_trivial_23_type_i(self):
        ab = aut_bound((2, 3), TYPE_I)
        assert ab.cyclic_order_divisor == gcd(2 - 1, 3 + 1) == 1
        assert not ab.dihedral_possible

    def test_trivial_334_type_ii(self):
        ab = aut_bound((3, 3, 4), TYPE_II)
        assert ab.cyclic_order_divisor == gcd(4, 2, 5) == 1
        assert not ab.dihedral_possible

    def test_dihedral_626_type_ii(self):
        ab = aut_bound((6, 2, 6), TYPE_II)
        assert ab.cyclic_order_divisor == gcd(7, 1, 7) == 1
        assert ab.dihedral_possible

    def test_divisor_pattern_exhaustive(self):
        for total in range(5, 21):
            for n in (1, 2, 3):
                if (n + 1) ** 2 >= total:
                    continue
                for pv in enumerate_admissible(total, n):
                    sigma = TYPE_I if n % 2 == 1 else TYPE_II
                    ab = aut_bound(pv.d, sigma)
                    for k, dk in enumerate(pv.d, start=1):
                        signed = dk + (-1) ** k if sigma != TYPE_II \
                            else dk - (-1) ** k
                        assert signed % ab.cyclic_order_divisor == 0


class TestRotOrders:
    def test_disk_plus(self):
        assert rot_group_order_divisors("disk", degree=5, sign="+") == 4

    def test_annulus_plus(self):
        assert rot_group_order_divisors("annulus", e=6, delta=2, sign="+") == 3

    def test_annulus_minus_gcd_zero_convention(self):
        assert rot_group_order_divisors("annulus", e=5, delta=1, sign="-") == 5

    def test_disk_minus(self):
        assert rot_group_order_divisors("disk", degree=5, sign="-") == 6


class TestTorusCover:
    @pytest.mark.parametrize("d,sigma,expected", [
        ((2, 3), TYPE_I, True),
        ((6, 2, 6), TYPE_II, False),
        ((3, 3, 4), TYPE_II, True)])
    def test_examples(self, d, sigma, expected):
        assert torus_cover_criterion(d, sigma) is expected


class TestSchemeDiagrams:
    def test_tau_type_i(self):
        tau = scheme_tau(TYPE_I, 3)
        assert tau[0] == 0 and tau["inf"] == 0
        assert tau[1] == "inf" and tau[2] == 0 and tau[3] == "inf"

    def test_tau_type_ii(self):
        tau = scheme_tau(TYPE_II, 2)
        assert tau[0] == "inf" and tau["inf"] == 0
        assert tau[1] == 0 and tau[2] == "inf"

    def test_tau_type_iii(self):
        tau = scheme_tau(TYPE_III, 2)
        assert tau[0] == 0 and tau["inf"] == "inf"
        assert tau[1] == "inf" and tau[2] == 0

    def test_mapping_scheme_parity(self):
        MappingScheme(TYPE_I, PartitionVector((2, 3)))
        with pytest.raises(ParityViolation):
            MappingScheme(TYPE_II, PartitionVector((2, 3)))


class TestTableRows:
    def test_csv_row_content(self):
        rows = schemes.scheme_table_rows(5, 1)
        assert [row["d"] for row in rows] == ["2 3", "3 2"]
        assert all(row["deg_rho"] == 1 and row["homeo"] for row in rows)
