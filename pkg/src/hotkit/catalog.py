"""Named example types used throughout the docs, CLI and tests."""

from __future__ import annotations

from functools import lru_cache

from .boolfn import BoolFn, basis_pT, causal, complement, relabel, tensor
from .typeterm import eval_term

TERMS = {
    "gamma2": "A2 -> A1",
    "gamma2_rev": "A1 -> A2",
    "f_ns": "(A2 -> A1) * (A4 -> A3)",
    "f_pm": "~((A1 -> A2) * (A3 -> A4))",
    "f_ns_perm": "(A2 -> A3) * (A4 -> A1)",
    "comb2": "(A3 -> A2) -> (A4 -> A1)",
}


def gamma2() -> BoolFn:
    """Channel 2 -> 1: 1 - p{1} + p{1,2}."""
    return eval_term(TERMS["gamma2"])


def gamma2_rev() -> BoolFn:
    """Channel 1 -> 2: 1 - p{2} + p{1,2}."""
    return eval_term(TERMS["gamma2_rev"])


def f_ns() -> BoolFn:
    """Nonsignalling channels {2,4} -> {1,3}."""
    return tensor(gamma2(), gamma2())


def f_pm() -> BoolFn:
    """Process matrices: the dual of two parallel channels 1 -> 2, 3 -> 4."""
    return complement(tensor(gamma2_rev(), gamma2_rev()))


def f_ns_perm() -> BoolFn:
    """Nonsignalling channels 2 -> 3, 4 -> 1 (same signalling as f_pm)."""
    return eval_term(TERMS["f_ns_perm"])


@lru_cache(maxsize=None)
def pm_global() -> BoolFn:
    """Process matrices with a global future (index 6) and past (index 5).

    Built as 1_1 < f_pm < p_1 and relabelled so the process-matrix systems
    keep indices 1..4.
    """
    h = causal(causal(BoolFn.one(1), f_pm()), basis_pT(1, 1))
    return relabel(h, (6, 1, 2, 3, 4, 5))


@lru_cache(maxsize=None)
def adapter_pm() -> BoolFn:
    """Adapters between process matrices, (g (x) g*)* with g = f_pm."""
    g = f_pm()
    return complement(tensor(g, complement(g)))


@lru_cache(maxsize=None)
def adapter_pm_global() -> BoolFn:
    """Adapters between process matrices with global past and future."""
    k = pm_global()
    return complement(tensor(k, complement(k)))


EXAMPLES = {
    "gamma2": gamma2,
    "gamma2_rev": gamma2_rev,
    "f_ns": f_ns,
    "f_pm": f_pm,
    "f_ns_perm": f_ns_perm,
    "pm_global": pm_global,
    "a1": adapter_pm,
    "a2": adapter_pm_global,
}


# label-chain text of the worked normal forms; "0" stands for the empty set
H_CHAINS = {
    (1, 1): "0-2-6-5-8-7-1-4-3",
    (1, 2): "0-2-8-7-6-5-1-4-3",
    (1, 3): "0-2-1-4-6-5-8-7-3",
    (2, 1): "0-4-6-5-8-7-3-2-1",
    (2, 2): "0-4-8-7-6-5-3-2-1",
    (2, 3): "0-4-3-2-6-5-8-7-1",
}

G_CHAINS = {
    (1, 1): "0-12-6-2-1-4-3-5-8-7-10-9-11",
    (1, 2): "0-12-6-4-3-2-1-5-8-7-10-9-11",
    (2, 1): "0-12-8-7-10-9-6-2-1-4-3-5-11",
    (2, 2): "0-12-8-7-10-9-6-4-3-2-1-5-11",
    (3, 1): "0-12-10-9-8-7-6-2-1-4-3-5-11",
    (3, 2): "0-12-10-9-8-7-6-4-3-2-1-5-11",
}

K_CHAINS = {
    2: "0-12-8-7-10-9-{1,6}-4-3-{2,5}-11",
    3: "0-12-10-9-8-7-{1,6}-4-3-{2,5}-11",
}

PM_GLOBAL_CHAINS = ("0-6-2-1-4-3-5", "0-6-4-3-2-1-5")
