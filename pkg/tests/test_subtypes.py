import itertools

import pytest
from hypothesis import given, strategies as st

from hotkit.boolfn import BoolFn, basis_pT, complement, full_mask, io_split, mask_of, permute
from hotkit.errors import UsageError
from hotkit.mobius import from_expansion, transform
from hotkit.subtypes import (OutputOrder, basic_strings, enumerate_regular, f_s, generators, is_monotone,
                             is_monotone_subtype, is_monotone_subtype_pairs, lattice_closure,
                             monotone_subtypes, nonunit_mobius_witnesses, two_condition_check)
from hotkit.typeterm import is_chain_type, type_catalog

from conftest import functions, permutations


def order(n, outs):
    return OutputOrder.of(n, outs)


def leq_oracle(O, s, t):
    # coordinatewise on text strings, s_1 leftmost
    for i, (a, b) in enumerate(zip(s, t), start=1):
        if i in O and a > b:
            return False
        if i not in O and a < b:
            return False
    return True


# --- the order ------------------------------------------------------------------------

def test_leq_example_chain():
    o = order(2, [1])
    assert o.leq("01", "00") and o.leq("00", "10") and o.leq("01", "10")
    assert not o.leq("10", "00")


def test_leq_reflexive():
    o = order(3, [2])
    for s in range(8):
        assert o.leq(s, s)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_leq_matches_coordinate_oracle(n):
    strings = ["".join(p) for p in itertools.product("01", repeat=n)]
    for O in range(1 << n):
        o = OutputOrder(n, O)
        outs = {i + 1 for i in range(n) if O >> i & 1}
        for s in strings:
            for t in strings:
                assert o.leq(s, t) == leq_oracle(outs, s, t)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_complement_set_gives_opposite_order(n):
    for O in range(1 << n):
        o, op = OutputOrder(n, O), OutputOrder(n, O).opposite()
        assert op.O == full_mask(n) & ~O
        for s in range(1 << n):
            for t in range(1 << n):
                assert o.leq(s, t) == op.leq(t, s)


def test_join_meet_are_bounds():
    o = order(4, [1, 3])
    for s in range(16):
        for t in range(16):
            j, m = o.join(s, t), o.meet(s, t)
            assert o.leq(s, j) and o.leq(t, j) and o.leq(m, s) and o.leq(m, t)


def test_bad_output_set():
    with pytest.raises(UsageError):
        OutputOrder(2, 0b100)


# --- monotone subtypes ------------------------------------------------------------------

def test_monotone_examples():
    assert is_monotone_subtype(basis_pT(3, (2,)))
    assert not is_monotone_subtype(BoolFn.from_support(2, ["00", "11"]))
    assert not is_monotone_subtype_pairs(BoolFn.from_support(2, ["00", "11"]))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_types_are_monotone(n):
    assert all(is_monotone_subtype(f) for f in type_catalog(n).functions())


@pytest.mark.parametrize("n", [1, 2, 3])
def test_monotone_characterisations_exhaustive(n):
    for t in range(1 << (1 << n)):
        if not t & 1:
            continue
        f = BoolFn(n, t)
        a = is_monotone_subtype(f)
        assert a == is_monotone_subtype_pairs(f) == two_condition_check(f)
        assert a == (is_monotone(f) and is_monotone(complement(f)))


@given(functions(4, 4))
def test_monotone_characterisations_n4(f):
    if f(0):
        assert is_monotone_subtype(f) == is_monotone_subtype_pairs(f) == two_condition_check(f)


# --- basic strings and f_s --------------------------------------------------------------

def test_basic_strings_examples():
    assert {str(s) for s in basic_strings(3, mask_of([1, 3]))} == {"110", "011"}
    assert {str(s) for s in basic_strings(4, mask_of([1, 3]))} == {"1100", "1001", "0110", "0011", "1101", "0111"}
    assert [str(s) for s in basic_strings(2, mask_of([1]))] == ["11"]


def test_basic_strings_degenerate():
    assert basic_strings(3, 0) == [] and basic_strings(3, 0b111) == []


def test_basic_strings_by_definition():
    # enumerate strings with some input and output bit, one output bit, <= 1 cleared input bit
    for n in range(2, 6):
        for O in range(1, full_mask(n)):
            I = full_mask(n) & ~O
            expect = {s for s in range(1 << n)
                      if bin(s & O).count("1") == 1 and s & I and bin(I & ~s).count("1") <= 1}
            assert {s.bits for s in basic_strings(n, O)} == expect


def test_f_theta_is_p_I():
    O = mask_of([1, 3])
    assert f_s(3, O, "000") == basis_pT(3, (2,))


def test_f_s_examples():
    O = mask_of([1, 3])
    assert f_s(3, O, "110") == from_expansion("1 - p{1} + p{1,2}", 3)
    assert f_s(3, O, "011") == from_expansion("1 - p{3} + p{2,3}", 3)
    assert f_s(4, O, "1101") == from_expansion("1 - p{1} + p{1,2,4}", 4)
    assert f_s(4, O, "0011") == from_expansion("p{2} - p{2,3} + p{2,3,4}", 4)


def test_comb_as_join_of_basic():
    O = mask_of([1, 3])
    beta = from_expansion("1 - p{1} + p{1,2} - p{1,2,3} + p{1,2,3,4}", 4)
    assert beta == f_s(4, O, "1101") | f_s(4, O, "0011")
    assert is_chain_type(beta)


def test_f_s_refuses_below_theta():
    with pytest.raises(UsageError):
        f_s(2, mask_of([1]), "01")


@pytest.mark.parametrize("n", [2, 3, 4])
def test_basic_f_s_are_chain_types(n):
    for O in range(1, full_mask(n)):
        for s in basic_strings(n, O):
            f = f_s(n, O, s)
            assert is_chain_type(f) and io_split(f).outputs == O


def test_f_s_support_is_union_of_upsets():
    o = order(4, [1, 3])
    for s in range(16):
        if s and o.leq(s, 0):
            continue
        f = f_s(4, o.O, s)
        for t in range(16):
            assert f(t) == int(o.leq(s, t) or o.leq(0, t))


# --- the regular lattice ------------------------------------------------------------------

def test_regular_counts_from_examples():
    L3 = enumerate_regular(3, [1, 3])
    assert len(L3) == 5
    L4 = enumerate_regular(4, [1, 3])
    assert len(L4) == 50 and len(L4.chain_types()) == 14


def test_reg3_members():
    L = enumerate_regular(3, [1, 3])
    b1 = from_expansion("1 - p{1} + p{1,2}", 3)
    b2 = from_expansion("1 - p{3} + p{2,3}", 3)
    expect = {basis_pT(3, (2,)), complement(basis_pT(3, (1, 3))), b1, b2, b1 & b2}
    assert set(L.members) == expect
    assert set(L.chain_types()) == {basis_pT(3, (2,)), complement(basis_pT(3, (1, 3))), b1, b2}


def test_full_output_set_is_singleton():
    for n in (1, 2, 3, 4):
        assert enumerate_regular(n, range(1, n + 1)).members == (BoolFn.one(n),)


def test_empty_output_set_is_singleton():
    for n in (1, 2, 3):
        assert enumerate_regular(n, 0).members == (basis_pT(n, range(1, n + 1)),)


def test_bounds_of_lattice():
    for O in range(16):
        L = enumerate_regular(4, O)
        I = full_mask(4) & ~O
        assert min(L.members, key=len) == basis_pT(4, I)
        assert max(L.members, key=len) == complement(basis_pT(4, O))


def test_generators_close_to_lattice():
    for n in (2, 3, 4):
        for O in range(1 << n):
            L = enumerate_regular(n, O)
            assert lattice_closure(generators(n, O)) == frozenset(L.members)


def test_generators_n3():
    gens = generators(3, mask_of([1, 3]))
    assert len(lattice_closure(gens)) == 5
    # all generators have Moebius support of size <= 3
    assert all(len(transform(g).coeffs) <= 3 for g in gens)


def test_regular_equals_monotone_all_splits():
    for n in (1, 2, 3, 4):
        for O in range(1 << n):
            L = enumerate_regular(n, O)
            assert frozenset(L.members) == monotone_subtypes(n, O)


def test_n5_needs_flag():
    with pytest.raises(UsageError):
        enumerate_regular(5, [1, 3])


@given(st.integers(2, 4).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, (1 << n) - 1),
                                                       permutations(n))))
def test_regular_lattice_permutes(data):
    n, O, sigma = data
    L = enumerate_regular(n, O)
    images = {permute(f, sigma) for f in L.members}
    O2 = io_split(next(iter(images))).outputs
    assert images == set(enumerate_regular(n, O2).members)


def test_nonunit_witnesses_n4():
    wit = nonunit_mobius_witnesses(4)
    assert wit
    values = {v for _, c in wit for v in c.coeffs.values()}
    assert values & {2, -2, 3, -3}
    # no type function appears among them
    assert not any(f in type_catalog(4) for f, _ in wit)


def test_json():
    data = enumerate_regular(3, [1, 3]).to_json()
    assert data["count"] == 5 and data["basic_strings"] == ["110", "011"]
    assert data["outputs"] == [1, 3]
