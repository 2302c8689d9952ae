import json

import pytest
from hypothesis import given, settings

from hotkit.boolfn import BoolFn, basis_pT, causal, causal_rev, io_split, mask_of
from hotkit.catalog import (G_CHAINS, H_CHAINS, K_CHAINS, PM_GLOBAL_CHAINS, adapter_pm, adapter_pm_global,
                            f_ns, f_pm, gamma2, pm_global)
from hotkit.errors import UsageError
from hotkit.normalform import (LabelChain, NormalForm, candidate_chains, chain_from_labels, check_leaves,
                               eval_meet_of_joins, eval_normal_form, labels_of_chain, minimax_status,
                               synthesize, verify_minimax)
from hotkit.poset import maximal_chains, structure_poset
from hotkit.typeterm import all_chain_types, chain_type, is_chain_type, parse, type_catalog

from conftest import types


def nf(n, terms):
    return NormalForm.from_labels(n, terms)


# --- label chains -------------------------------------------------------------------

def test_label_chain_parse_and_text():
    lc = LabelChain.parse("∅-12-8-7-10-9-{1,6}-4-3-{2,5}-11")
    assert lc.starts_empty and len(lc.groups) == 10
    assert str(lc) == "∅-12-8-7-10-9-{1,6}-4-3-{2,5}-11"
    assert LabelChain.parse("0-2-1") == LabelChain.parse("∅-2-1")
    assert not LabelChain.parse("2-1-4").starts_empty


def test_label_chain_json_round_trip():
    lc = LabelChain.parse("∅-{1,6}-4")
    assert lc.to_json() == [[], [1, 6], [4]]
    assert LabelChain.from_json(lc.to_json()) == lc


@pytest.mark.parametrize("text", ["∅-1-1", "∅-{1,2}-2", "∅-x", "", "∅-{}-1"])
def test_label_chain_errors(text):
    with pytest.raises(UsageError):
        LabelChain.parse(text)


def test_chain_from_labels_small():
    c = chain_from_labels("∅-2-1", 4)
    assert c.sets == (0, mask_of([2]), mask_of([1, 2]))
    f = chain_type(c)
    # first label after the empty set is an output: channel 1 -> 2 plus free outputs 3, 4
    assert io_split(f).output_indices == (2, 3, 4)
    assert f(0b0010) == 1 and f(0b0001) == 0


def test_chain_from_labels_h11_and_k2():
    h = chain_type(chain_from_labels(H_CHAINS[(1, 1)], 8))
    assert is_chain_type(h) and len(chain_from_labels(H_CHAINS[(1, 1)], 8).sets) == 9
    k = chain_from_labels(K_CHAINS[2], 12)
    assert len(k.sets) == 11
    assert k.sets[6] & ~k.sets[5] == mask_of([1, 6])
    assert is_chain_type(chain_type(k))


def test_chain_from_labels_errors():
    with pytest.raises(UsageError):
        chain_from_labels("∅-2-1-3", 4)   # odd length
    with pytest.raises(UsageError):
        chain_from_labels("∅-2-5", 4)     # index beyond n


def test_labels_round_trip():
    for n in (2, 3, 4):
        for f in all_chain_types(n):
            from hotkit.typeterm import chain_of
            c = chain_of(f)
            assert chain_from_labels(labels_of_chain(c), n) == c


# --- worked forms ----------------------------------------------------------------------

def test_f_ns_as_meet_of_causal_products():
    g = gamma2()
    expect = causal(g, g) & causal_rev(g, g)
    assert expect == f_ns()
    form = nf(4, [["∅-1-2-3-4", "∅-3-4-1-2"]])
    assert eval_normal_form(form) == f_ns()
    assert {chain_type(c) for c in form.leaves} == {causal(g, g), causal_rev(g, g)}
    assert verify_minimax(form)


def test_f_pm_as_join():
    p2, p4 = basis_pT(2, (2,)), basis_pT(2, (2,))
    assert causal(p2, p4) | causal_rev(p2, p4) == f_pm()
    form = nf(4, [["2-1-4"], ["4-3-2"]])
    assert eval_normal_form(form) == f_pm()
    assert {chain_type(c) for c in form.leaves} == {causal(p2, p4), causal_rev(p2, p4)}


def test_global_past_future():
    form = nf(6, [[c] for c in PM_GLOBAL_CHAINS])
    assert eval_normal_form(form) == pm_global()


def test_a1_both_orders():
    grid = nf(8, [[H_CHAINS[(1, a)], H_CHAINS[(2, a)]] for a in (1, 2, 3)])
    assert eval_normal_form(grid) == adapter_pm()
    assert eval_meet_of_joins(grid) == adapter_pm()
    h = {k: chain_type(chain_from_labels(v, 8)) for k, v in H_CHAINS.items()}
    direct = (h[(1, 1)] | h[(1, 2)] | h[(1, 3)]) & (h[(2, 1)] | h[(2, 2)] | h[(2, 3)])
    assert direct == adapter_pm()


def test_a2_six_chains():
    form = nf(12, [[G_CHAINS[(i, 1)], G_CHAINS[(i, 2)]] for i in (1, 2, 3)])
    assert eval_normal_form(form) == adapter_pm_global()
    assert minimax_status(form) == "holds"


def test_a2_four_chains():
    form = nf(12, [[G_CHAINS[(1, 1)], G_CHAINS[(1, 2)]], [K_CHAINS[2]], [K_CHAINS[3]]])
    assert eval_normal_form(form) == adapter_pm_global()
    assert form.distinct_leaves() == 4 == len(maximal_chains(structure_poset(adapter_pm_global()), True))
    assert minimax_status(form) == "not-a-grid"
    with pytest.raises(UsageError):
        verify_minimax(form)


def test_minimax_can_fail():
    # two leaves on a 2x2 grid where swapping the operations changes the result
    a, b = "∅-1-2-3-4", "∅-3-4-1-2"
    form = nf(4, [[a, a], [b, b]])
    # rows are a∧a and b∧b: join gives a∨b; columns give (a∨b)∧(a∨b) - equal
    assert minimax_status(form) == "holds"
    form = nf(4, [[a, b], [b, a]])
    # join of (a∧b) twice vs meet of (a∨b) twice
    assert minimax_status(form) == "fails"


def test_leaf_checks():
    form = nf(4, [["∅-1-2-3-4"]])
    problems = check_leaves(form, f_ns())
    assert problems == ["form does not evaluate to the target"]
    wrong = nf(4, [["∅-2-1-4-3"]])
    assert any("has outputs" in p for p in check_leaves(wrong, f_ns()))


def test_form_construction_errors():
    form = NormalForm(2, (chain_from_labels("∅-1-2", 2),), ((0,),))
    assert eval_normal_form(form) == gamma2()
    with pytest.raises(UsageError):
        NormalForm(2, (), ((0,),))
    with pytest.raises(UsageError):
        NormalForm(2, (chain_from_labels("∅-1-2", 2),), ((),))


def test_json_round_trip():
    form = nf(12, [[G_CHAINS[(1, 1)], G_CHAINS[(1, 2)]], [K_CHAINS[2]], [K_CHAINS[3]]])
    data = json.loads(json.dumps(form.to_json()))
    back = NormalForm.from_json(data)
    assert eval_normal_form(back) == adapter_pm_global()
    assert back.render() == form.render()
    with pytest.raises(UsageError):
        NormalForm.from_json({"n": 2})


def test_render():
    assert nf(4, [["2-1-4"], ["4-3-2"]]).render() == "2-1-4 ∨ 4-3-2"
    assert nf(4, [["∅-1-2-3-4", "∅-3-4-1-2"]]).render() == "∅-1-2-3-4 ∧ ∅-3-4-1-2"


# --- synthesis ------------------------------------------------------------------------

def test_synthesize_chain_is_single_leaf():
    for f in all_chain_types(4):
        form = synthesize(f)
        assert form.distinct_leaves() == 1 and eval_normal_form(form) == f


def test_synthesize_examples_bounds():
    assert synthesize(f_ns()).distinct_leaves() <= 2
    assert synthesize(f_pm()).distinct_leaves() <= 2
    form = synthesize(adapter_pm_global())
    assert eval_normal_form(form) == adapter_pm_global()
    assert form.distinct_leaves() <= 4


def test_synthesize_from_given_term():
    t = parse("((A1 -> A2) * (A3 -> A4)) -> ((A5 -> A6) * (A7 -> A8))")
    from hotkit.typeterm import eval_term
    f = eval_term(t)
    form = synthesize(f, t)
    assert eval_normal_form(form) == f


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_synthesize_exhaustive(n):
    for f in type_catalog(n).functions():
        form = synthesize(f)
        assert eval_normal_form(form) == f
        assert form.distinct_leaves() <= len(maximal_chains(structure_poset(f), True))
        split = io_split(f)
        assert all(io_split(g) == split for g in form.leaf_functions())


@settings(max_examples=100, deadline=None)
@given(types(5, 5))
def test_synthesize_sampled_n5(f):
    form = synthesize(f)
    assert eval_normal_form(form) == f
    assert form.distinct_leaves() <= len(maximal_chains(structure_poset(f), True))


def test_synthesize_is_deterministic():
    assert synthesize(adapter_pm()).to_json() == synthesize(adapter_pm()).to_json()


# --- candidate chains -------------------------------------------------------------------

def test_candidates_are_chain_types_of_same_split():
    for f in (f_ns(), f_pm(), adapter_pm(), pm_global()):
        split = io_split(f)
        for c in candidate_chains(f):
            g = chain_type(c)
            assert io_split(g) == split


def test_candidates_for_f_ns_give_the_form():
    cands = candidate_chains(f_ns())
    meet = BoolFn.one(4)
    for c in cands:
        meet = meet & chain_type(c)
    assert meet == f_ns()
