"""Exact counting, classification, and gadget verification for acyclic
Boolean constraint satisfaction with complex-rational weights."""

from .rational import ComplexRat, ONE, ZERO, cr
from .core import (Constraint, FuncTable, Instance, SymTable, builtin,
                   expand, link, make_instance, normalize, pin, project,
                   u0, u1)
from .errors import InputError, InternalCheckError, NotAcyclicError
from .hypergraph import (Hypergraph, JoinForest, build_hypergraph,
                         gyo_reduce, is_acyclic, join_forest,
                         relational_graph)
from .engine import (CountResult, count, count_auto, count_brute,
                     count_ed_path, count_join_tree, witness_chain)
from .classify import (Support, Verdict, classify_functions,
                       has_implication_closed_support, is_degenerate,
                       is_eq_xor_product, is_implication_product,
                       is_nowhere_zero, membership, support, unary_factors)
from .gadgets import (CATALOG, GadgetRealization, build_catalog_gadget,
                      pin_search_binary, rewrite_instance,
                      transitive_compose, verify_realization, xor_triangle)
from .frontends import (CNF2, Circuit, Gate, cnf_to_instance, compile_circuit,
                        count_2sat, count_subtrees, circuit_from_json,
                        implies_to_cnf, parse_dimacs, translate_to_implies)

__version__ = "0.1.0"
