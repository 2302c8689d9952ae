"""Boolean type functions of higher-order quantum maps.

The main entry points are re-exported here; see the submodules for the rest.
"""

from .boolfn import (BitString, BoolFn, IOSplit, basis_pT, causal, causal_rev, complement, io_split, par,
                     permute, relabel, tensor)
from .errors import HotkitError, InvariantError, NotBooleanError, ParseError, UndecidedError, UsageError
from .mobius import MobiusCoeffs, to_boolfn, transform
from .normalform import NormalForm, eval_normal_form, synthesize
from .poset import StructurePoset, index_rank, pair_rank, structure_poset
from .signalling import signalling_matrix
from .subtypes import OutputOrder, enumerate_regular, f_s, is_monotone_subtype
from .typeterm import (ChainSpec, chain_type, enumerate_types, eval_term, is_chain_type, is_type_function, parse,
                       witness_term)

__version__ = "0.1.0"

__all__ = [
    "BitString", "BoolFn", "IOSplit", "basis_pT", "causal", "causal_rev", "complement", "io_split", "par",
    "permute", "relabel", "tensor",
    "HotkitError", "InvariantError", "NotBooleanError", "ParseError", "UndecidedError", "UsageError",
    "MobiusCoeffs", "to_boolfn", "transform",
    "NormalForm", "eval_normal_form", "synthesize",
    "StructurePoset", "index_rank", "pair_rank", "structure_poset",
    "signalling_matrix",
    "OutputOrder", "enumerate_regular", "f_s", "is_monotone_subtype",
    "ChainSpec", "chain_type", "enumerate_types", "eval_term", "is_chain_type", "is_type_function", "parse",
    "witness_term",
]
