import pytest
from hypothesis import given, strategies as st

from hotkit.boolfn import BoolFn, basis_pT, causal, complement, io_split, permute, tensor
from hotkit.catalog import adapter_pm, adapter_pm_global, f_ns, f_ns_perm, f_pm, gamma2
from hotkit.errors import UsageError
from hotkit.poset import pair_rank, structure_poset
from hotkit.signalling import (criteria_agree, no_signal, no_signal_by_comparison, no_signal_by_lower_chain,
                               no_signal_by_rank, no_signal_from_reduced, rank_bound_holds, signalling_matrix)
from hotkit.typeterm import type_catalog

from conftest import permutations, types


def test_constant_channels_never_signal():
    f = basis_pT(4, (2, 4))
    for i in (2, 4):
        for j in (1, 3):
            assert no_signal(f, i, j)


def test_full_signalling_channels():
    m = signalling_matrix(complement(basis_pT(4, (1, 3))))
    assert all(m.signals.values())


def test_f_ns_and_f_pm_examples():
    assert no_signal(f_ns(), 2, 3) and not no_signal(f_ns(), 2, 1)
    assert not no_signal(f_pm(), 2, 3) and no_signal(f_pm(), 2, 1)
    assert no_signal_by_rank(f_ns(), 2, 3) and not no_signal_by_rank(f_ns(), 2, 1)
    assert not no_signal_by_rank(f_pm(), 2, 3) and no_signal_by_rank(f_pm(), 2, 1)


def test_f_pm_matches_permuted_nonsignalling():
    assert signalling_matrix(f_pm()).signals == signalling_matrix(f_ns_perm()).signals


def test_a1_examples():
    a1 = adapter_pm()
    assert io_split(a1).input_indices == (1, 3, 6, 8)
    assert no_signal_by_rank(a1, 6, 5) and not no_signal_by_rank(a1, 6, 7)
    assert not no_signal_by_rank(a1, 8, 5) and no_signal_by_rank(a1, 8, 7)
    for i, j in ((6, 5), (6, 7), (8, 5), (8, 7)):
        assert no_signal(a1, i, j) == no_signal_by_rank(a1, i, j)


def test_a2_global_past_and_future():
    a2 = adapter_pm_global()
    m = signalling_matrix(a2)
    assert m.inputs == (1, 3, 6, 8, 10, 11)
    assert all(m[(i, 12)] for i in m.inputs)
    assert all(m[(11, j)] for j in m.outputs)


def test_free_output_never_signalled():
    # 3 is a free output of p_{2}^* tensored with 1_1
    f = tensor(gamma2(), BoolFn.one(1))
    assert io_split(f).output_indices == (1, 3)
    assert no_signal_by_rank(f, 2, 3) and no_signal(f, 2, 3)


def test_refusals():
    with pytest.raises(UsageError):
        no_signal(f_ns(), 1, 2)  # 1 is an output
    with pytest.raises(UsageError):
        no_signal(f_ns(), 2, 4)  # 4 is an input
    bad = BoolFn.from_support(2, ["00", "11"])
    with pytest.raises(UsageError):
        no_signal(bad, 1, 2)
    with pytest.raises(UsageError):
        signalling_matrix(bad)
    # regular but not a type: the rank criterion refuses
    from hotkit.subtypes import enumerate_regular
    b = enumerate_regular(3, [1, 3])
    meet = [f for f in b.members if f not in type_catalog(3)][0]
    assert signalling_matrix(meet).pair_ranks is None
    with pytest.raises(UsageError):
        no_signal_by_rank(meet, 2, 1)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_criteria_agree_exhaustive(n):
    for f in type_catalog(n).functions():
        assert criteria_agree(f) == []


@pytest.mark.parametrize("n", [2, 3, 4])
def test_reformulations_agree(n):
    for f in type_catalog(n).functions():
        P = structure_poset(f)
        split = io_split(f)
        for i in split.input_indices:
            for j in split.output_indices:
                expect = no_signal(f, i, j)
                assert rank_bound_holds(P, i, j)
                if not P.holders(j):
                    assert expect
                    continue
                c = no_signal_by_comparison(P, i, j)
                if c is None:
                    assert no_signal_by_lower_chain(P, i, j) == expect
                else:
                    assert c == expect
                assert no_signal_from_reduced(P, i, j) == expect


@given(types(1, 5))
def test_duality_swaps_roles(f):
    g = complement(f)
    split = io_split(f)
    for i in split.input_indices:
        for j in split.output_indices:
            assert no_signal(f, i, j) == (not no_signal(g, j, i))


@given(st.integers(2, 5).flatmap(lambda n: st.tuples(st.sampled_from(type_catalog(n).functions()),
                                                     permutations(n))))
def test_permutation_covariance(data):
    f, sigma = data
    g = permute(f, sigma)
    inv = {sigma[k] : k + 1 for k in range(len(sigma))}
    split = io_split(f)
    for i in split.input_indices:
        for j in split.output_indices:
            assert no_signal(f, i, j) == no_signal(g, inv[i], inv[j])


@given(types(1, 3), types(1, 2))
def test_product_blocks(f, g):
    n1 = f.n
    t, c = tensor(f, g), causal(f, g)
    sf, sg = io_split(f), io_split(g)
    for i in sf.input_indices:
        for j in sg.output_indices:
            assert no_signal(t, i, j + n1)
            # second block is in the past of the first
            assert no_signal(c, i, j + n1)
    for i in sg.input_indices:
        for j in sf.output_indices:
            assert no_signal(t, i + n1, j)
            assert not no_signal(c, i + n1, j)
    for i in sf.input_indices:
        for j in sf.output_indices:
            assert no_signal(t, i, j) == no_signal(f, i, j) == no_signal(c, i, j)


def test_matrix_render_and_json():
    m = signalling_matrix(f_ns())
    text = m.render()
    rows = text.splitlines()
    assert rows[0].split() == ["in\\out", "1", "3"]
    assert rows[1].split() == ["2", "~>[1]", ".[0]"]
    data = m.to_json()
    assert {(p["i"], p["j"]): p["signals"] for p in data["pairs"]} == {(2, 1): True, (2, 3): False,
                                                                        (4, 1): False, (4, 3): True}
    assert all(p["pair_rank"] == pair_rank(f_ns(), p["i"], p["j"]) for p in data["pairs"])
