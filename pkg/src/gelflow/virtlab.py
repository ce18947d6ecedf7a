"""Synthetic ground-truth reactor for closed-loop testing without hardware.

Conversion follows first-order Arrhenius kinetics over the residence time;
the collapsed radius shrinks with surfactant concentration (power law) and
grows mildly with temperature. Constants are calibrated so conversion sits
near 0.9 at 70 degrees C for a 10-minute residence time and radii span
roughly 80-130 nm across the surfactant range; they are configuration, not
claims about the real reaction.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .process import (
    Bounds,
    DEFAULT_BOUNDS,
    DesignPoint,
    EXCLUSION_HIGH_PDI,
    EXCLUSION_HIGH_RELATIVE_ERROR,
    EXCLUSION_NONE,
    Measurement,
    ProcessConstants,
    compute_initial_weight_fraction,
)


@dataclass(frozen=True)
class VirtualLabConfig:
    arrhenius_prefactor: float = 3.1e9  # 1/min
    activation_temperature: float = 8000.0  # K
    reactor_volume: float = 50.0  # mL
    radius_base: float = 100.0  # nm at (c_ref, 65 C)
    c_ref: float = 0.28  # mmol/L
    surfactant_exponent: float = 0.4
    temp_slope: float = 0.004  # 1/K
    sigma_w: float = 0.0003  # weight fraction
    sigma_r: float = 1.5  # nm
    exclusion_probability: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.reactor_volume <= 0:
            raise InvalidInputError("reactor volume must be positive")
        if self.sigma_w < 0 or self.sigma_r < 0:
            raise InvalidInputError("noise levels must be >= 0")
        if not 0.0 <= self.exclusion_probability < 1.0:
            raise InvalidInputError("exclusion probability must be in [0, 1)")


def _rng_for(x: DesignPoint, seed: int) -> np.random.Generator:
    digest = hashlib.blake2b(x.as_array().tobytes(), digest_size=8).digest()
    return np.random.default_rng(np.random.SeedSequence([seed, int.from_bytes(digest, "big")]))


def conversion_at(x: DesignPoint, cfg: VirtualLabConfig) -> float:
    """Noise-free conversion at a setting."""
    tau = cfg.reactor_volume / (x.f_i + x.f_m)  # minutes
    rate = cfg.arrhenius_prefactor * math.exp(
        -cfg.activation_temperature / (x.temp + 273.15)
    )
    return 1.0 - math.exp(-rate * tau)


def radius_at(x: DesignPoint, cfg: VirtualLabConfig) -> float:
    """Noise-free collapsed radius at a setting, nm."""
    return (
        cfg.radius_base
        * (cfg.c_ref / x.c_ctab) ** cfg.surfactant_exponent
        * (1.0 + cfg.temp_slope * (x.temp - 65.0))
    )


def simulate(
    x: DesignPoint,
    cfg: VirtualLabConfig,
    constants: ProcessConstants = ProcessConstants(),
    bounds: Bounds = DEFAULT_BOUNDS,
) -> Measurement:
    """Simulated measurement at a setting; deterministic per (x, cfg.seed)."""
    bounds.validate(x)
    rng = _rng_for(x, cfg.seed)

    excluded = EXCLUSION_NONE
    if rng.random() < cfg.exclusion_probability:
        excluded = EXCLUSION_HIGH_PDI if rng.random() < 0.5 else EXCLUSION_HIGH_RELATIVE_ERROR

    w0 = compute_initial_weight_fraction(x, constants)
    wf = w0 * (1.0 - conversion_at(x, cfg))
    if cfg.sigma_w > 0:
        wf = max(wf + cfg.sigma_w * rng.standard_normal(), 0.0)

    r_h = radius_at(x, cfg)
    if cfg.sigma_r > 0:
        r_h = max(r_h + cfg.sigma_r * rng.standard_normal(), 1e-3)

    return Measurement(
        w_nipam_f=wf,
        r_h=r_h,
        excluded=excluded,
        sigma_w=cfg.sigma_w if cfg.sigma_w > 0 else constants.rmsecv,
        sigma_r=cfg.sigma_r,
    )
