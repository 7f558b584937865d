"""Run configuration shared by the command-line drivers.

Configuration files are plain "key = value" lines ('#' starts a comment);
command-line flags override file values.
"""

from dataclasses import dataclass, field, fields

import numpy as np

from .geometry import model_from_name

__all__ = ["RunConfig", "ConfigError", "DEFAULT_TOLERANCES"]

DEFAULT_TOLERANCES = {
    "roundtrip": 1e-5,
    "diagram": 1e-6,
    "diagram_identity": 1e-14,
    "weyl": 1e-8,
    "type_relative": 0.10,
    "solve_residual": 1e-4,
    "euclid_roundtrip": 1e-8,
    "constcoeff": 1e-8,
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    model: str = "h2"
    radius: float = 1.0
    radial_count: int = 64
    angular_count: int = 128
    lambda_max: float | None = None  # None: auto-sized per function
    lambda_step: float = 0.05
    strip_halfwidth: float | None = None  # None: 2*rho
    modes: int = 32
    seed: int = 7
    count: int = 10
    sharpness: float = 12.0
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))

    @property
    def params(self):
        return model_from_name(self.model)

    @property
    def strip(self):
        if self.strip_halfwidth is not None:
            return self.strip_halfwidth
        return 2.0 * self.params.rho

    def validate(self):
        try:
            self.params
        except ValueError as e:
            raise ConfigError(str(e)) from None
        if self.radius <= 0:
            raise ConfigError("radius must be positive")
        if self.radial_count < 4 or self.angular_count < 4:
            raise ConfigError("node counts must be at least 4")
        if self.lambda_step <= 0:
            raise ConfigError("lambda_step must be positive")
        if self.lambda_max is not None and self.lambda_max <= 0:
            raise ConfigError("lambda_max must be positive")
        if self.strip <= 0:
            raise ConfigError("strip half-width must be positive")
        if self.count < 0:
            raise ConfigError("count must be nonnegative")
        if self.modes < 0:
            raise ConfigError("modes must be nonnegative")
        if self.params.dimension == 2:
            if self.angular_count < 2 * self.modes + 2:
                raise ConfigError("angular_count below 2*modes+2: boundary modes alias")
        else:
            if self.angular_count // 2 <= self.modes:
                raise ConfigError("angular_count too small for the requested degree")
        if not np.isfinite(self.sharpness) or self.sharpness <= 0:
            raise ConfigError("sharpness must be positive")
        return self

    @classmethod
    def from_file(cls, path):
        raw = {}
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                text = line.split("#", 1)[0].strip()
                if not text:
                    continue
                if "=" not in text:
                    raise ConfigError(f"{path}:{lineno}: expected key = value")
                key, val = (s.strip() for s in text.split("=", 1))
                raw[key] = val
        return cls().apply(raw)

    def apply(self, mapping):
        """Override fields from a string-keyed mapping; unknown keys are errors."""
        typed = {f.name: f for f in fields(self)}
        for key, val in mapping.items():
            name = key.replace("-", "_")
            if name not in typed or name == "tolerances":
                raise ConfigError(f"unknown configuration key: {key}")
            if val is None:
                continue
            setattr(self, name, _coerce(name, val))
        return self


def _coerce(name, val):
    if isinstance(val, (int, float)) and name not in ("model",):
        return val
    text = str(val).strip()
    if name == "model":
        return text.lower()
    if name in ("radial_count", "angular_count", "modes", "seed", "count"):
        try:
            return int(text)
        except ValueError:
            raise ConfigError(f"{name} must be an integer, got {text!r}") from None
    if text.lower() in ("none", "auto"):
        return None
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"{name} must be a number, got {text!r}") from None
