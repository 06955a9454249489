"""Exception hierarchy.

Every error carries a machine-readable ``kind`` so the command-line front
end can emit ``{kind, message, context}`` objects without a lookup table.
"""
from __future__ import annotations

from typing import Any


class IsoPowerError(Exception):
    kind = "error"
    exit_code = 1

    def __init__(self, message: str = "", **context: Any):
        super().__init__(message)
        self.message = message
        self.context = context

    def to_json(self) -> dict:
        return {"kind": self.kind, "message": self.message,
                "context": {k: _jsonable(v) for k, v in sorted(self.context.items())}}


def _jsonable(v):
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return repr(v)


def _make(name: str, kind: str, base=IsoPowerError, doc: str = ""):
    cls = type(name, (base,), {"kind": kind, "__doc__": doc})
    return cls


NotPrime = _make("NotPrime", "not-prime", doc="A characteristic or torsion prime is not prime.")
DegreeOutOfRange = _make("DegreeOutOfRange", "degree-out-of-range")
SingularCurve = _make("SingularCurve", "singular-curve")
FieldMismatch = _make("FieldMismatch", "field-mismatch")
BadPrime = _make("BadPrime", "bad-prime", doc="The torsion prime equals the characteristic.")
BadDiscriminant = _make("BadDiscriminant", "bad-discriminant")
OwnerMismatch = _make("OwnerMismatch", "owner-mismatch")
NonInvertible = _make("NonInvertible", "non-invertible")
DegenerateLattice = _make("DegenerateLattice", "degenerate-lattice")
OwnerNotAbove = _make("OwnerNotAbove", "owner-not-above")
BaseMismatch = _make("BaseMismatch", "base-mismatch")
DenominatorClash = _make("DenominatorClash", "denominator-clash")
CrossCheckMismatch = _make("CrossCheckMismatch", "cross-check-mismatch",
                           doc="Two independent computations disagree. Always a bug.")
NotSubring = _make("NotSubring", "not-subring")
NotGaloisStable = _make("NotGaloisStable", "not-galois-stable")
SingularMatrix = _make("SingularMatrix", "singular-matrix")
UsageError = _make("UsageError", "usage")
UnsupportedCase = _make("UnsupportedCase", "unsupported-case")


class HasTorsion(IsoPowerError):
    """The cokernel of a presentation has a nontrivial torsion submodule."""
    kind = "has-torsion"

    def __init__(self, message: str = "", exponent: int = 0, **context: Any):
        super().__init__(message, exponent=exponent, **context)
        self.exponent = exponent


class BoundExceeded(IsoPowerError):
    kind = "bound-exceeded"
    exit_code = 2
