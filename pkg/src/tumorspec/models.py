"""Nutrient consumption models.

A model is the scalar function f appearing on the right-hand side of the
nutrient equation. It must vanish at zero and be strictly increasing on the
range the solvers visit; both conditions are checked at construction time on
a sampled grid. Two kinds are supported: the identity and polynomials with
zero constant term, which keeps f and f' representable as coefficient arrays
for the compiled kernels.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

_VALIDATION_SAMPLES = 1024
_VALIDATION_MARGIN = 0.5


@dataclass(frozen=True)
class NutrientModel:
    kind: str
    coefficients: tuple = ()
    # ascending-power coefficient arrays consumed by the kernels
    f_coeffs: np.ndarray = field(init=False, repr=False, compare=False)
    fprime_coeffs: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind == "identity":
            coeffs = np.array([0.0, 1.0])
        elif self.kind == "polynomial":
            if not self.coefficients:
                raise ValidationError("polynomial model needs coefficients")
            coeffs = np.concatenate(([0.0], np.asarray(self.coefficients, dtype=float)))
        else:
            raise ValidationError(f"unknown model kind {self.kind!r}")
        deriv = coeffs[1:] * np.arange(1, len(coeffs))
        object.__setattr__(self, "f_coeffs", coeffs)
        object.__setattr__(self, "fprime_coeffs", deriv)
        self._validate()

    def _validate(self):
        # f' > 0 on [0, 1 + margin]: solver iterates can slightly exceed 1.
        grid = np.linspace(0.0, 1.0 + _VALIDATION_MARGIN, _VALIDATION_SAMPLES)
        if np.any(self.fprime_at(grid) <= 0.0):
            raise ValidationError(
                "nutrient model must have strictly positive derivative on "
                f"[0, {1.0 + _VALIDATION_MARGIN}]"
            )

    def f_at(self, u):
        return np.polynomial.polynomial.polyval(u, self.f_coeffs)

    def fprime_at(self, u):
        return np.polynomial.polynomial.polyval(u, self.fprime_coeffs)

    @property
    def f_of_one(self):
        return float(self.f_at(1.0))


def identity_model():
    return NutrientModel(kind="identity")


def polynomial_model(*coefficients):
    """Model f(u) = c1*u + c2*u**2 + ... (zero constant term is implied)."""
    return NutrientModel(kind="polynomial", coefficients=tuple(float(c) for c in coefficients))


def parse_model_spec(spec):
    """Parse a CLI model spec: 'identity' or 'poly:c1,c2,...'."""
    if spec == "identity":
        return identity_model()
    if spec.startswith("poly:"):
        try:
            coeffs = [float(c) for c in spec[len("poly:"):].split(",")]
        except ValueError as exc:
            raise ValidationError(f"bad polynomial coefficients in {spec!r}") from exc
        return polynomial_model(*coeffs)
    raise ValidationError(f"bad model spec {spec!r}; expected 'identity' or 'poly:c1,c2,...'")
