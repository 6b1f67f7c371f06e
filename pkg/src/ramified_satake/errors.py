"""Exception hierarchy.

Two families: ``SpecError`` for malformed or unsupported input (CLI exit
code 2) and ``ComputationError`` for failures detected while computing
(CLI exit code 3).
"""

from __future__ import annotations


class SatakeError(Exception):
    """Base class for all library errors."""


class SpecError(SatakeError, ValueError):
    """Input rejected before or during validation."""


class ComputationError(SatakeError, ArithmeticError):
    """An internal consistency check failed during a computation."""


# lattice
class NotFiniteOrder(SpecError):
    pass


# root_datum
class UnknownType(SpecError):
    pass


class RankTooLarge(SpecError):
    pass


class GroupTooLarge(ComputationError):
    pass


class NotDominant(SpecError):
    pass


# galois_fold
class NotDiagramAutomorphism(SpecError):
    pass


class OrderMismatch(SpecError):
    pass


class UnsupportedFolding(SpecError):
    pass


class AmbiguousCorootImage(ComputationError):
    pass


# echelon_rep
class AmbiguousTorsionLift(ComputationError):
    pass


class DecompositionFailure(ComputationError):
    pass


# kato_lusztig
class UnsupportedModel(SpecError):
    pass


# satake_hecke
class SingularChange(ComputationError):
    pass


class TwistedEvaluationUnsupported(SpecError):
    pass


# local_model
class BadDimension(SpecError):
    pass


class BadSignature(SpecError):
    pass


class IdentityFailure(ComputationError):
    pass
