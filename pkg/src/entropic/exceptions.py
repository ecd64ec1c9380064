"""Custom exceptions for entropic inequality computations."""

from dataclasses import dataclass, field
from typing import Any


class EntropicError(Exception):
    """Base class for all library errors."""

    def details(self) -> dict[str, Any]:
        """Structured data for machine-readable error reports."""
        return {}


class DegenerateExpressionError(EntropicError, ValueError):
    """Raised when an identically-zero expression cannot be canonicalized."""


class CoordinateError(EntropicError, KeyError):
    """Raised for coordinates outside the declared universe or missing values."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "coordinate error"


class ScenarioError(EntropicError, ValueError):
    """Raised for invalid marginal scenario data."""


class ParameterError(EntropicError, ValueError):
    """Raised when a box or model parameter lies outside its domain."""


class ScenarioShapeError(EntropicError, ValueError):
    """Raised when a box does not have the scenario shape an expression needs."""


class WiringError(EntropicError, ValueError):
    """Raised for unknown wirings or alphabet mismatches."""


@dataclass
class ProjectionLimitError(EntropicError):
    """
    Raised when Fourier-Motzkin elimination exceeds the inequality cap.

    Carries enough progress information to judge how far the run got.
    """
    cap: int
    inequalities: int
    eliminated: int
    remaining: int
    coordinate: str = ""

    def __str__(self):
        return (
            f"Projection exceeded {self.cap} inequalities ({self.inequalities}) "
            f"while eliminating {self.coordinate or '?'}: "
            f"{self.eliminated} eliminated, {self.remaining} remaining"
        )

    def details(self) -> dict[str, Any]:
        return {
            "cap": self.cap,
            "inequalities": self.inequalities,
            "eliminated": self.eliminated,
            "remaining": self.remaining,
            "coordinate": self.coordinate,
        }


@dataclass
class SizeLimitError(EntropicError):
    """Raised when an LP would exceed its configured size cap."""
    what: str
    size: int
    cap: int

    def __str__(self):
        return f"{self.what} has size {self.size}, above the cap of {self.cap}"

    def details(self) -> dict[str, Any]:
        return {"what": self.what, "size": self.size, "cap": self.cap}


@dataclass
class InvalidBoxError(EntropicError):
    """Raised when a marginal model violates normalization or the sheaf condition."""
    message: str
    violations: list[str] = field(default_factory=list)

    def __str__(self):
        if not self.violations:
            return self.message
        shown = "; ".join(self.violations[:5])
        more = f" (+{len(self.violations) - 5} more)" if len(self.violations) > 5 else ""
        return f"{self.message}: {shown}{more}"

    def details(self) -> dict[str, Any]:
        return {"violations": list(self.violations)}
