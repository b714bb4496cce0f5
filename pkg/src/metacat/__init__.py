"""A proof checker where rules are spans of syntax maps and proofs are string diagrams."""
from .errors import EvalFailure, MetacatError, StaticError
from .proof import CheckReport, Env, ProofGenerator, TheoremStmt, check_theorem, register_theorem
from .surface import dump, load
from .syntax import Leaf, Node, OpSymbol, Signature, SyntaxMap

__version__ = "0.1.0"
