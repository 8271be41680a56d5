"""Exception hierarchy shared by every module.

Each error carries an optional ``witness`` (the smallest offending data found)
so callers and the CLI can report exactly what failed.
"""

from __future__ import annotations

from typing import Any


class ExtCohError(Exception):
    code = "error"
    exit_status = 1

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness

    def to_dict(self) -> dict:
        out = {"error": self.code, "message": str(self)}
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        return out


def _jsonable(value):
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return value


class ValidationError(ExtCohError):
    code = "validation"


class NotClosed(ValidationError):
    code = "NotClosed"


class NotAssociative(ValidationError):
    code = "NotAssociative"


class NoIdentity(ValidationError):
    code = "NoIdentity"


class NoInverse(ValidationError):
    code = "NoInverse"


class NotNormal(ValidationError):
    code = "NotNormal"


class NotAHomomorphism(ValidationError):
    code = "NotAHomomorphism"


class NotEquivariant(ValidationError):
    code = "NotEquivariant"


class SizeLimitExceeded(ExtCohError):
    code = "SizeLimitExceeded"
    exit_status = 2


class Violates3(ValidationError):
    code = "Violates3"


class Violates4(ValidationError):
    code = "Violates4"


class Violates5(ValidationError):
    code = "Violates5"


class IncompatibleKernels(ValidationError):
    code = "IncompatibleKernels"


class NotNormalized(ValidationError):
    code = "NotNormalized"


class NotDescendable(ExtCohError):
    code = "NotDescendable"


class BadSection(ValidationError):
    code = "BadSection"


class NotCentral(ValidationError):
    code = "NotCentral"


class NotAbelian(ValidationError):
    code = "NotAbelian"


class NotStable(ValidationError):
    code = "NotStable"


class ImageEscapes(ValidationError):
    code = "ImageEscapes"


class NotCharacteristicSeries(ValidationError):
    code = "NotCharacteristicSeries"


class NotAbelianQuotient(ValidationError):
    code = "NotAbelianQuotient"


class NotReducible(ExtCohError):
    """The class does not come from the requested torsion subgroup."""

    code = "NotReducible"


class InvalidExtension(ValidationError):
    code = "InvalidExtension"
