"""Knowledge-base grounded conflict detection for ODRL constraints."""

from .alignment import Alignment, aligned_verdict, align_constraint, restrict_kb, validate_alignment
from .denotation import TOP, Constraint, Denotation, Membership3, Mode, Operator, denote, member3
from .encoder import EncodedProblem, Polarity, ProverStatus, emit_problem, epr_check, interpret_result
from .errors import (
    AlignmentInvalid, ClosureContradiction, ConfigError, DomainViolation, OdrlSemError, OperandMismatch,
    ParseError, UngroundedConstraint, UnknownConcept, UnknownOperator, UnrecognizedToken, ValidationError,
)
from .kb import BOTTOM, Domain, KnowledgeBase, Violation, build_kb, ground, validate_kb
from .runtime import ExecutionContext, satisfies, satisfies_composite
from .verdict import (
    Composite, Verdict, branch_exclusivity, check_composite, check_group, check_pair, compose, subsumes,
)

__version__ = "0.1.0"

__all__ = [
    "BOTTOM", "TOP", "Alignment", "AlignmentInvalid", "ClosureContradiction", "Composite", "ConfigError",
    "Constraint", "Denotation", "Domain", "DomainViolation", "EncodedProblem", "ExecutionContext",
    "KnowledgeBase", "Membership3", "Mode", "OdrlSemError", "OperandMismatch", "Operator", "ParseError",
    "Polarity", "ProverStatus", "UngroundedConstraint", "UnknownConcept", "UnknownOperator",
    "UnrecognizedToken", "ValidationError", "Verdict", "Violation", "align_constraint", "aligned_verdict",
    "branch_exclusivity", "build_kb", "check_composite", "check_group", "check_pair", "compose", "denote",
    "emit_problem", "epr_check", "ground", "interpret_result", "member3", "restrict_kb", "satisfies",
    "satisfies_composite", "subsumes", "validate_alignment", "validate_kb",
]
