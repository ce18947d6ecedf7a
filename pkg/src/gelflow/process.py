"""Microgel flow-synthesis process model.

Maps reactor settings and bench measurements to the three minimization
objectives of the campaign: negated product flow (mL/min), squared deviation
of the hydrodynamic radius from its target (nm^2), and temperature excess
over the minimum allowed setpoint (K).

Units are carried in names and docstrings, never converted implicitly:
flows in mL/min, concentrations in mmol/L, temperatures in degrees C,
radii in nm, weight fractions dimensionless.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import (
    DataWarning,
    ExcludedDataError,
    InvalidInputError,
    ParseError,
)

DIMENSION_NAMES = ("f_i", "f_m", "c_ctab", "temp")

EXCLUSION_NONE = "none"
EXCLUSION_HIGH_PDI = "high polydispersity"
EXCLUSION_HIGH_RELATIVE_ERROR = "high relative error"
EXCLUSION_REASONS = (EXCLUSION_NONE, EXCLUSION_HIGH_PDI, EXCLUSION_HIGH_RELATIVE_ERROR)


@dataclass(frozen=True)
class DesignPoint:
    """One reactor setting.

    Attributes
    ----------
    f_i : float
        Initiator solution flow rate, mL/min.
    f_m : float
        Monomer solution flow rate, mL/min.
    c_ctab : float
        Surfactant concentration in the monomer feed, mmol/L.
    temp : float
        Reactor temperature, degrees C.
    """

    f_i: float
    f_m: float
    c_ctab: float
    temp: float

    def as_array(self) -> np.ndarray:
        return np.array([self.f_i, self.f_m, self.c_ctab, self.temp], dtype=float)

    @classmethod
    def from_array(cls, x) -> "DesignPoint":
        x = np.asarray(x, dtype=float)
        if x.shape != (4,):
            raise InvalidInputError(f"design vector must have 4 entries, got shape {x.shape}")
        return cls(float(x[0]), float(x[1]), float(x[2]), float(x[3]))


@dataclass(frozen=True)
class Bounds:
    """Box bounds over (f_i, f_m, c_ctab, temp), in DesignPoint units."""

    lower: tuple[float, float, float, float]
    upper: tuple[float, float, float, float]

    def __post_init__(self):
        if len(self.lower) != 4 or len(self.upper) != 4:
            raise InvalidInputError("bounds must have 4 components")
        for k, (lo, hi) in enumerate(zip(self.lower, self.upper)):
            if not lo < hi:
                raise InvalidInputError(
                    f"lower bound must be strictly below upper bound for "
                    f"{DIMENSION_NAMES[k]}: {lo} >= {hi}"
                )

    @property
    def lower_array(self) -> np.ndarray:
        return np.array(self.lower, dtype=float)

    @property
    def upper_array(self) -> np.ndarray:
        return np.array(self.upper, dtype=float)

    def contains(self, x: DesignPoint, atol: float = 0.0) -> bool:
        v = x.as_array()
        return bool(
            np.all(v >= self.lower_array - atol) and np.all(v <= self.upper_array + atol)
        )

    def validate(self, x: DesignPoint) -> None:
        v = x.as_array()
        for k, name in enumerate(DIMENSION_NAMES):
            if not self.lower[k] <= v[k] <= self.upper[k]:
                raise InvalidInputError(
                    f"{name} = {v[k]} outside bounds [{self.lower[k]}, {self.upper[k]}]"
                )

    def replace_upper(self, dim: int, value: float) -> "Bounds":
        upper = list(self.upper)
        upper[dim] = value
        return Bounds(self.lower, tuple(upper))


#: Pump, surfactant-stability and solvent-evaporation limits of the reactor.
DEFAULT_BOUNDS = Bounds(lower=(0.1, 2.0, 0.14, 60.0), upper=(0.9, 18.0, 0.41, 80.0))


@dataclass(frozen=True)
class Measurement:
    """Raw outcome of one synthesis experiment.

    ``w_nipam_f`` is the residual monomer weight fraction from the in-line
    Raman evaluation; ``r_h`` the collapsed-state hydrodynamic radius from
    DLS, nm. ``excluded`` carries the reason when the DLS result is not
    usable (high polydispersity or high relative size error); excluded rows
    stay in the log but never enter surrogate training.
    """

    w_nipam_f: float
    r_h: float
    excluded: str = EXCLUSION_NONE
    sigma_w: float | None = None
    sigma_r: float | None = None

    def __post_init__(self):
        if self.excluded not in EXCLUSION_REASONS:
            raise InvalidInputError(
                f"unknown exclusion reason {self.excluded!r}; expected one of {EXCLUSION_REASONS}"
            )
        if self.w_nipam_f < 0:
            raise InvalidInputError(f"w_nipam_f must be >= 0, got {self.w_nipam_f}")
        if not self.is_excluded and self.r_h <= 0:
            raise InvalidInputError(f"r_h must be positive, got {self.r_h}")

    @property
    def is_excluded(self) -> bool:
        return self.excluded != EXCLUSION_NONE


@dataclass(frozen=True)
class ObjectiveVector:
    """The three minimization objectives, plus optional 1-sigma errors."""

    neg_product_flow: float  # -F_product, mL/min
    sq_radius_dev: float  # nm^2
    temp_dev: float  # K
    sigma: tuple[float, float, float] | None = None

    def __post_init__(self):
        if self.sq_radius_dev < 0:
            raise InvalidInputError("sq_radius_dev must be >= 0")
        if self.temp_dev < 0:
            raise InvalidInputError("temp_dev must be >= 0")

    def as_array(self) -> np.ndarray:
        return np.array(
            [self.neg_product_flow, self.sq_radius_dev, self.temp_dev], dtype=float
        )


@dataclass(frozen=True)
class ProcessConstants:
    """Fixed quantities of the synthesis and its instrumentation.

    The stock concentration, target radius and minimum temperature are
    process facts; molar mass and solution density enter only through the
    initial-weight-fraction estimate and are configurable because the feed
    recipe fixes concentrations rather than weight fractions.
    """

    c_nipam_stock: float = 110.6  # mmol/L in the monomer feed
    r_h_target: float = 100.0  # nm, collapsed state
    t_min: float = 60.0  # degrees C
    m_nipam: float = 113.16  # g/mol
    rho_solution: float = 998.0  # g/L, dilute aqueous feed
    rmsecv: float = 0.00037  # weight fraction, Raman evaluation model error

    def __post_init__(self):
        for name in ("c_nipam_stock", "r_h_target", "t_min", "m_nipam", "rho_solution", "rmsecv"):
            if getattr(self, name) <= 0:
                raise InvalidInputError(f"{name} must be strictly positive")


@dataclass(frozen=True)
class DatasetRow:
    iteration: int
    x: DesignPoint
    y: ObjectiveVector
    excluded: bool = False


@dataclass(frozen=True)
class Dataset:
    """Append-ordered experiment log with computed objectives."""

    rows: tuple[DatasetRow, ...] = field(default_factory=tuple)

    def __post_init__(self):
        last_iter = None
        seen: set[tuple] = set()
        for row in self.rows:
            if last_iter is not None and row.iteration < last_iter:
                raise InvalidInputError("iteration indices must be non-decreasing")
            last_iter = row.iteration
            key = (row.iteration, row.x.f_i, row.x.f_m, row.x.c_ctab, row.x.temp)
            if key in seen:
                raise InvalidInputError(f"duplicate (iteration, design point) pair: {key}")
            seen.add(key)

    def __len__(self) -> int:
        return len(self.rows)

    def trainable(self) -> "Dataset":
        return Dataset(tuple(r for r in self.rows if not r.excluded))

    def design_matrix(self) -> np.ndarray:
        if not self.rows:
            return np.empty((0, 4))
        return np.vstack([r.x.as_array() for r in self.rows])

    def objective_matrix(self) -> np.ndarray:
        if not self.rows:
            return np.empty((0, 3))
        return np.vstack([r.y.as_array() for r in self.rows])


def compute_initial_weight_fraction(x: DesignPoint, k: ProcessConstants) -> float:
    """Initial NIPAM weight fraction after the feeds merge.

    Assumes additive volumes: the monomer stock (c_nipam_stock mmol/L) is
    diluted by the initiator stream in the ratio f_m / (f_i + f_m).
    """
    total = x.f_i + x.f_m
    if total <= 0:
        raise InvalidInputError(f"total flow must be positive, got {total}")
    c_mol_per_l = k.c_nipam_stock * 1e-3 * (x.f_m / total)
    return c_mol_per_l * k.m_nipam / k.rho_solution


def compute_product_flow(w0: float, wf: float, f_i: float, f_m: float) -> float:
    """Product flow F = conversion * total flow, mL/min.

    Conversion is (w0 - wf) / w0, clamped to [0, 1]: measurement noise can
    push the final weight fraction slightly above the initial one, which is
    reported as a warning rather than an error.
    """
    if w0 <= 0:
        raise InvalidInputError(f"initial weight fraction must be positive, got {w0}")
    if wf < 0:
        raise InvalidInputError(f"final weight fraction must be >= 0, got {wf}")
    if f_i < 0 or f_m < 0:
        raise InvalidInputError("flow rates must be >= 0")
    conversion = (w0 - wf) / w0
    if conversion < 0:
        warnings.warn(
            f"final weight fraction {wf} above initial {w0}; conversion clamped to 0",
            DataWarning,
            stacklevel=2,
        )
        conversion = 0.0
    return conversion * (f_i + f_m)


def compute_radius_objective(r_h: float, target: float) -> float:
    """Squared deviation of the measured radius from the target, nm^2."""
    if r_h <= 0 or target <= 0:
        raise InvalidInputError("radius and target must be positive")
    return (r_h - target) ** 2


def compute_temp_objective(temp: float, t_min: float) -> float:
    """Temperature excess over the minimum allowed setpoint, K."""
    if temp < t_min:
        raise InvalidInputError(f"temperature {temp} below minimum {t_min}")
    return temp - t_min


def objectives_from_measurement(
    x: DesignPoint, m: Measurement, k: ProcessConstants
) -> ObjectiveVector:
    """Assemble the minimization objectives for one valid measurement."""
    if m.is_excluded:
        raise ExcludedDataError(m.excluded)
    w0 = compute_initial_weight_fraction(x, k)
    f_product = compute_product_flow(w0, m.w_nipam_f, x.f_i, x.f_m)
    return ObjectiveVector(
        neg_product_flow=-f_product,
        sq_radius_dev=compute_radius_objective(m.r_h, k.r_h_target),
        temp_dev=compute_temp_objective(x.temp, k.t_min),
    )


def propagate_uncertainty(
    x: DesignPoint, m: Measurement, k: ProcessConstants
) -> tuple[float, float, float]:
    """First-order measurement-error propagation onto the objectives.

    sigma(F_product) = (f_i + f_m) / w0 * sigma_w
    sigma(dr^2)      = 2 |r_h - target| * sigma_r
    sigma(dT)        = 0   (temperature is a setpoint, not a measurement)
    """
    if m.sigma_w is None or m.sigma_r is None:
        warnings.warn(
            "instrument errors missing; propagated uncertainties set to zero",
            DataWarning,
            stacklevel=2,
        )
        return (0.0, 0.0, 0.0)
    w0 = compute_initial_weight_fraction(x, k)
    sigma_flow = (x.f_i + x.f_m) / w0 * m.sigma_w
    sigma_radius = 2.0 * abs(m.r_h - k.r_h_target) * m.sigma_r
    return (sigma_flow, sigma_radius, 0.0)


def measurement_from_objectives(
    x: DesignPoint, y: ObjectiveVector, k: ProcessConstants
) -> Measurement:
    """Back-solve the raw measurement implied by stored objective values.

    The published campaign tables store (dr^2, -F_product) rather than
    (w_nipam_f, r_h); this inverts the objective computation, taking the
    radius on the upper side of the target.
    """
    w0 = compute_initial_weight_fraction(x, k)
    total = x.f_i + x.f_m
    conversion = -y.neg_product_flow / total
    if not -1e-12 <= conversion <= 1 + 1e-12:
        raise InvalidInputError(f"implied conversion {conversion} outside [0, 1]")
    wf = w0 * (1.0 - conversion)
    r_h = k.r_h_target + math.sqrt(y.sq_radius_dev)
    return Measurement(w_nipam_f=wf, r_h=r_h)


_CSV_COLUMNS = ("iteration", "f_i", "f_m", "temp", "c_ctab", "dr2", "f_product_neg", "excluded")


def load_dataset(
    path: str | Path,
    bounds: Bounds = DEFAULT_BOUNDS,
    constants: ProcessConstants = ProcessConstants(),
) -> Dataset:
    """Read an experiment log in the campaign CSV dialect.

    Schema (comma-separated, header row, UTF-8)::

        iteration:int, f_i, f_m, temp, c_ctab, dr2, f_product_neg, excluded:0|1

    Design values are validated against ``bounds``; any schema or bound
    violation raises :class:`ParseError` naming the row and column.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("file is empty; expected a header row") from None
        if tuple(h.strip() for h in header) != _CSV_COLUMNS:
            raise ParseError(
                f"header {header} does not match expected columns {list(_CSV_COLUMNS)}"
            )
        rows: list[DatasetRow] = []
        for i, record in enumerate(reader, start=1):
            if not record or (len(record) == 1 and not record[0].strip()):
                continue
            if len(record) != len(_CSV_COLUMNS):
                raise ParseError(
                    f"expected {len(_CSV_COLUMNS)} fields, got {len(record)}", row=i
                )
            values = {}
            for col, raw in zip(_CSV_COLUMNS, record):
                try:
                    values[col] = int(raw) if col in ("iteration", "excluded") else float(raw)
                except ValueError:
                    raise ParseError(f"could not parse {raw!r}", row=i, column=col) from None
            x = DesignPoint(values["f_i"], values["f_m"], values["c_ctab"], values["temp"])
            for dim, name in enumerate(DIMENSION_NAMES):
                v = getattr(x, name)
                if not bounds.lower[dim] <= v <= bounds.upper[dim]:
                    raise ParseError(
                        f"value {v} outside bounds [{bounds.lower[dim]}, {bounds.upper[dim]}]",
                        row=i,
                        column=name,
                    )
            if values["excluded"] not in (0, 1):
                raise ParseError("excluded flag must be 0 or 1", row=i, column="excluded")
            if values["dr2"] < 0:
                raise ParseError("dr2 must be >= 0", row=i, column="dr2")
            y = ObjectiveVector(
                neg_product_flow=values["f_product_neg"],
                sq_radius_dev=values["dr2"],
                temp_dev=compute_temp_objective(values["temp"], constants.t_min),
            )
            rows.append(
                DatasetRow(
                    iteration=values["iteration"],
                    x=x,
                    y=y,
                    excluded=bool(values["excluded"]),
                )
            )
    try:
        return Dataset(tuple(rows))
    except InvalidInputError as err:
        raise ParseError(str(err)) from None


def save_dataset(dataset: Dataset, path: str | Path) -> None:
    """Write a dataset back out in the campaign CSV dialect."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(_CSV_COLUMNS)
        for row in dataset.rows:
            writer.writerow(
                [
                    row.iteration,
                    row.x.f_i,
                    row.x.f_m,
                    row.x.temp,
                    row.x.c_ctab,
                    row.y.sq_radius_dev,
                    row.y.neg_product_flow,
                    int(row.excluded),
                ]
            )


def si_fixture_path(name: str = "si_table_s1") -> Path:
    """Path to a bundled campaign data fixture (si_table_s1 ... si_table_s5)."""
    ref = resources.files("gelflow.data").joinpath(f"{name}.csv")
    with resources.as_file(ref) as p:
        return Path(p)


def load_si_fixture() -> Dataset:
    """The bundled hardware-in-the-loop campaign log."""
    return load_dataset(si_fixture_path("si_table_s1"))
