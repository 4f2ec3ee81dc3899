"""Exception hierarchy.

Three families, mirroring the CLI exit codes:

* :class:`SchemaError` -- malformed input (exit 2)
* :class:`PreconditionError` -- the mathematics refuses the input, e.g. an
  incompatible Neumann datum or a conformal map that fails validation (exit 3)
* :class:`NumericalError` -- an iterative solver did not converge (exit 4)
"""


class HarmonicDualityError(Exception):
    """Base class for every error raised by this package."""

    def details(self):
        """Extra machine-readable context for diagnostics."""
        return {}


class SchemaError(HarmonicDualityError, ValueError):
    """Input does not follow the documented JSON / argument layout."""


class PreconditionError(HarmonicDualityError, ValueError):
    """A mathematical precondition of an operation is violated."""


class TooFewSamplesError(PreconditionError):
    """Fewer samples than needed to resolve the requested Fourier order."""


class RadiusError(PreconditionError):
    """Radius out of order, off the boundary, or outside the valid range."""


class SingularPointError(PreconditionError):
    """Evaluation requested at a coordinate singularity (the origin)."""


class CompatibilityError(PreconditionError):
    """Boundary data violate a solvability (zero-flux / zero-mean) condition."""

    def __init__(self, message, defect=None):
        super().__init__(message)
        self.defect = defect

    def details(self):
        return {} if self.defect is None else {"defect": float(self.defect)}


class NonZeroMeanError(CompatibilityError):
    """Boundary function that must have zero mean does not."""


class DataMismatchError(CompatibilityError):
    """Two pieces of boundary data that must agree disagree."""

    def __init__(self, message, defect=None, modes=None):
        super().__init__(message, defect)
        self.modes = dict(modes or {})

    def details(self):
        out = super().details()
        if self.modes:
            out["modes"] = {str(k): float(v) for k, v in self.modes.items()}
        return out


class SymmetryError(DataMismatchError):
    """Neumann data are not of the symmetric form r1*phi(r1) = r2*phi(r2)."""


class NonZeroLogError(PreconditionError):
    """A series with a nonzero log r coefficient where none is allowed."""


class MapValidationError(PreconditionError):
    """A supplied conformal map failed its runtime validation."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report

    def details(self):
        return {} if self.report is None else {"report": self.report.to_dict()}


class DegenerateRangeError(PreconditionError):
    """Scale range too narrow for a meaningful regression."""


class NumericalError(HarmonicDualityError, RuntimeError):
    """A numerical procedure failed."""


class ConvergenceError(NumericalError):
    """Iterative solver stopped without reaching its tolerance."""

    def __init__(self, message, iterations=None, residual=None):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual

    def details(self):
        return {"iterations": self.iterations, "residual": self.residual}
