import itertools

import pytest
from hypothesis import given

from hotkit.boolfn import BoolFn, all_functions, basis_pT, causal, complement, permute, tensor
from hotkit.catalog import TERMS, f_ns_perm, f_pm, gamma2
from hotkit.errors import ParseError, UndecidedError, UsageError
from hotkit.poset import is_chain, structure_poset
from hotkit.subtypes import is_monotone_subtype
from hotkit.typeterm import (ChainSpec, Dual, Leaf, Tensor, all_chain_types, chain_of, chain_type, decompose,
                             enumerate_types, eval_term, format_term, is_chain_type, is_type_function, parse,
                             type_catalog, witness_term)

from conftest import types


# --- parsing -----------------------------------------------------------------------

def test_parse_leaf():
    assert parse("A1") == Leaf(1)


def test_arrow_desugars():
    assert parse("A2 -> A1") == Dual(Tensor(Leaf(2), Dual(Leaf(1))))


def test_superchannel_term():
    t = parse("(A3 -> A2) -> (A4 -> A1)")
    assert sorted(l.index for l in _leaves(t)) == [1, 2, 3, 4]
    assert str(eval_term(t).n) == "4"


def _leaves(t):
    if isinstance(t, Leaf):
        return [t]
    if isinstance(t, Dual):
        return _leaves(t.child)
    return _leaves(t.left) + _leaves(t.right)


@pytest.mark.parametrize("text,pos", [("A1 *", 4), ("A1 * A1", 5), ("(A1", 3), ("A1 ) ", 3), ("B1", 0),
                                      ("A0", 0)])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.position == pos


def test_missing_index_is_rejected():
    with pytest.raises(UsageError):
        parse("A1 * A3")


def test_format_round_trip():
    for text in TERMS.values():
        t = parse(text)
        assert parse(format_term(t)) == t


# --- evaluation ---------------------------------------------------------------------

def test_states_and_channel():
    assert eval_term("A1 * A2") == BoolFn.one(2)
    assert eval_term("A2 -> A1") == gamma2()


def test_process_matrix_term():
    f = eval_term(TERMS["f_pm"])
    assert f == f_pm()
    g = f_ns_perm()
    assert f <= g
    assert [s for s in range(16) if f(s) != g(s)] == [0b1111]
    assert f("1111") == 0 and g("1111") == 1


def test_double_dual_term_is_not_f_pm():
    # the doubly dualised variant evaluates to a different type
    f = eval_term("~(~(A1 -> A2) * ~(A3 -> A4))")
    assert f != f_pm()
    assert str(__import__("hotkit").transform(f)) == "1 - p{2,4} + p{1,2,3,4}"


def test_leaf_order_defines_positions():
    assert eval_term("A2 * ~A1") == tensor(basis_pT(1, 1), BoolFn.one(1))


# --- enumeration --------------------------------------------------------------------

def naive_types(max_n):
    """T_n by the defining closure with scalar operations only."""
    out = {1: {BoolFn.one(1), basis_pT(1, 1)}}
    for n in range(2, max_n + 1):
        acc = set()
        for k in range(1, n):
            for f in out[k]:
                for g in out[n - k]:
                    h = tensor(f, g)
                    for sigma in itertools.permutations(range(1, n + 1)):
                        acc.add(permute(h, sigma))
        acc |= {complement(f) for f in acc}
        out[n] = acc
    return out


def test_counts_against_naive_closure():
    oracle = naive_types(4)
    for n in (1, 2, 3, 4):
        assert enumerate_types(n) == frozenset(oracle[n])
    assert [len(oracle[n]) for n in (1, 2, 3, 4)] == [2, 6, 26, 174]


@pytest.mark.slow
def test_count_n5_against_naive_closure():
    assert len(enumerate_types(5)) == len(naive_types(5)[5]) == 1802


def test_n2_non_members():
    missing = {f for f in all_functions(2)} - set(enumerate_types(2))
    assert {frozenset(f.support_strings()) for f in missing} == {frozenset({"00", "11"}),
                                                                 frozenset({"00", "01", "10"})}


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_closed_under_complement_and_permutation(n):
    T = enumerate_types(n)
    assert all(complement(f) in T for f in T)
    sigma = tuple(list(range(2, n + 1)) + [1])
    assert all(permute(f, sigma) in T for f in T)


@given(types(1, 5))
def test_types_are_monotone_subtypes(f):
    assert is_monotone_subtype(f)


@given(types(1, 5))
def test_witness_terms_evaluate_back(f):
    assert eval_term(witness_term(f)) == f


def test_membership_examples():
    for n in (1, 3, 4):
        for T in range(1 << n):
            assert is_type_function(basis_pT(n, T))
    from hotkit.catalog import f_ns
    # gamma2 is itself a chain type, so gamma2 < f_pm is a type; two non-chains are not
    assert is_type_function(causal(gamma2(), f_pm()))
    assert not is_type_function(causal(f_ns(), f_pm()))
    assert is_type_function(causal(gamma2(), gamma2()))
    assert not is_type_function(BoolFn.from_support(2, ["00", "11"]))


def test_factor_method_agrees_exhaustively():
    for n in (1, 2, 3):
        T = enumerate_types(n)
        for f in all_functions(n):
            assert (decompose(f) is not None) == (f in T)


@pytest.mark.slow
def test_factor_method_agrees_n4():
    T = enumerate_types(4)
    for f in all_functions(4):
        assert (decompose(f) is not None) == (f in T)


def test_guard(monkeypatch):
    monkeypatch.setenv("HOTKIT_MAX_N", "3")
    f = tensor(gamma2(), gamma2())
    with pytest.raises(UndecidedError):
        is_type_function(f, method="enumerate")
    with pytest.raises(UndecidedError):
        type_catalog(4)
    assert is_type_function(f)  # auto falls back to factorisation
    assert type_catalog(4, allow_large=True) is not None


def test_large_n_membership_by_factoring():
    from hotkit.catalog import adapter_pm_global
    a2 = adapter_pm_global()
    assert a2.n == 12 and is_type_function(a2)
    assert eval_term(witness_term(a2)) == a2


# --- chain types --------------------------------------------------------------------

def test_chain_examples():
    assert chain_type(ChainSpec.from_sets(2, [(), (1,), (1, 2)])) == gamma2()
    g = chain_type(ChainSpec.from_sets(4, [(), (3,), (1, 2, 3)]))
    assert str(__import__("hotkit").transform(g)) == "1 - p{3} + p{1,2,3}"
    beta = chain_type(ChainSpec.from_sets(4, [(), (1,), (1, 2), (1, 2, 3), (1, 2, 3, 4)]))
    assert beta == eval_term(TERMS["comb2"])


def test_chain_spec_validation():
    with pytest.raises(UsageError):
        ChainSpec.from_sets(2, [(), (1,)])  # odd length
    with pytest.raises(UsageError):
        ChainSpec.from_sets(2, [(1,), (1,), (1, 2)])


def test_chain_io_matches_alternation():
    c = ChainSpec.from_sets(4, [(), (1,), (1, 2), (1, 2, 3), (1, 2, 3, 4)])
    split = __import__("hotkit").io_split(chain_type(c))
    assert split.inputs == c.inputs() == 0b1010 and split.outputs == c.outputs()


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_chain_oracle_and_total_order(n):
    T = enumerate_types(n)
    direct = all_chain_types(n)
    assert direct == {f for f in T if is_chain_type(f)}
    for f in T:
        assert (chain_of(f) is not None) == is_chain(structure_poset(f).elements)


def test_chain_count_n4():
    assert len(all_chain_types(4)) == 150


@given(types(1, 2), types(1, 3))
def test_causal_of_chains_is_chain(f, g):
    if is_chain_type(f) and is_chain_type(g):
        assert is_chain_type(causal(f, g))
