"""
Exceptions levées par les constructions et les vérifications.

Chaque exception porte un témoin optionnel (triplet, élément, paire, échantillon...)
qui localise la violation.
"""

from typing import Any, Optional


class VerificationError(Exception):
    """Erreur de base de la bibliothèque."""

    def __init__(self, message: str, witness: Optional[Any] = None):
        self.witness = witness
        if witness is not None:
            message = f"{message} (témoin : {witness})"
        super().__init__(message)


class GroupTableError(VerificationError):
    """Table de multiplication invalide."""


class NotAssociative(GroupTableError):
    pass


class NoIdentity(GroupTableError):
    pass


class NoInverse(GroupTableError):
    pass


class NotHomomorphism(VerificationError):
    pass


class CrossedModuleAxiomViolation(VerificationError):
    pass


class Internal2GroupAxiomViolation(VerificationError):
    pass


class NotComposable(VerificationError):
    pass


class GroupoidAxiomViolation(VerificationError):
    pass


class FunctorViolation(VerificationError):
    pass


class NatTransfViolation(VerificationError):
    pass


class CapExceeded(VerificationError):
    pass


class ActionAxiomViolation(VerificationError):
    pass


class ExpmOverflow(VerificationError):
    """Norme trop grande pour l'exponentielle matricielle."""


class NumericalInstability(VerificationError):
    """Les estimations au pas h et h/2 ne concordent pas."""


class DimensionMismatch(VerificationError):
    pass


class RelatednessViolation(VerificationError):
    pass


class NotInInvariantSubspace(VerificationError):
    pass


class NotEquivariant(VerificationError):
    pass


class FixtureParseError(VerificationError):
    pass


class FixtureValidationError(VerificationError):
    """Fixture syntaxiquement correcte mais invalide ; `field_path` localise le champ."""

    def __init__(self, message: str, field_path: str, witness: Optional[Any] = None):
        self.field_path = field_path
        super().__init__(f"{field_path}: {message}", witness)


class IncompatibleSuite(VerificationError):
    pass
