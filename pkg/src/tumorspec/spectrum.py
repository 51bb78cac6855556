"""Stability spectrum of the linearized boundary dynamics.

For each integer mode k the linearized evolution acts diagonally with

    mu_k = (-|k|**3 + |k|) / R**3 - G * d_k,
    d_k  = (A/2) * u_k'(1)/u_k(1) + A - f(1),

where the boundary ratios come from :mod:`tumorspec.radial`. From the table we
derive the per-mode instability thresholds G_k, their minimum G* over modes
with negative denominator, a stability classification, and the smallest
periodicity index l for which every retained mode decays at least as fast as
mode zero.
"""

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import SolverError, ValidationError
from .models import NutrientModel
from .radial import SolverSettings, boundary_ratio, solve_U, steady_radius

DENOM_TOL = 1e-12
DEFAULT_K_MAX = 64


@dataclass(frozen=True)
class ModelParameters:
    A: float
    G: float
    model: NutrientModel
    R: float = None  # steady radius is computed when omitted

    def __post_init__(self):
        f1 = self.model.f_of_one
        if not 0.0 < self.A < f1:
            raise ValidationError(f"A must lie in (0, f(1)) = (0, {f1}); got {self.A}")
        if self.R is not None and self.R <= 0:
            raise ValidationError("R must be positive")


@dataclass(frozen=True)
class SpectrumTable:
    k_max: int
    R: float
    A: float
    G: float
    f_of_one: float
    ratio: np.ndarray       # ratio[k] = u_k'(1)/u_k(1), k = 0..k_max
    lam: np.ndarray         # lam[k] = -k**3 / R**3
    mu: np.ndarray          # mu[k], k = 0..k_max
    denom: np.ndarray       # d_k
    g_threshold: np.ndarray  # G_k, nan where the denominator vanishes
    assumption_holds: bool = field(default=False)

    def mu_at(self, k):
        k = abs(int(k))
        if k > self.k_max:
            raise ValidationError(f"mode {k} beyond table range {self.k_max}")
        return float(self.mu[k])

    def lambda_at(self, k):
        return lambda_k(k, self.R)


def lambda_k(k, R):
    """Principal symbol -|k|**3 / R**3."""
    if R <= 0:
        raise ValidationError("R must be positive")
    return -abs(int(k)) ** 3 / R**3


def _mode_denominator(A, ratio_k, f_of_one):
    return 0.5 * A * ratio_k + A - f_of_one


def build_table(params: ModelParameters, k_max=DEFAULT_K_MAX,
                settings: SolverSettings = SolverSettings()):
    """Compute ratios and the full symbol for modes 0..k_max."""
    if k_max < 2:
        raise ValidationError("k_max must be at least 2")
    if params.R is None:
        steady = steady_radius(params.A, params.model, settings)
        R = steady.R_A
        v0 = steady.v0
    else:
        R = params.R
        v0 = solve_U(R * R, params.model, settings)

    f1 = params.model.f_of_one
    ks = np.arange(k_max + 1)
    ratio = np.array([
        boundary_ratio(k, R, v0, params.model, settings) for k in ks
    ])
    denom = _mode_denominator(params.A, ratio, f1)
    lam = -ks.astype(float) ** 3 / R**3
    mu = (-ks.astype(float) ** 3 + ks) / R**3 - params.G * denom

    with np.errstate(divide="ignore", invalid="ignore"):
        g_thr = np.where(np.abs(denom) > DENOM_TOL,
                         (-ks.astype(float) ** 3 + ks) / R**3 / denom,
                         np.nan)

    return SpectrumTable(k_max=k_max, R=float(R), A=params.A, G=params.G,
                         f_of_one=f1, ratio=ratio, lam=lam, mu=mu,
                         denom=denom, g_threshold=g_thr,
                         assumption_holds=bool(denom[0] > 0.0))


def mu_k(k, table: SpectrumTable):
    """Symbol value at integer mode k (even in k)."""
    return table.mu_at(k)


def g_threshold(k, table: SpectrumTable):
    """Per-mode threshold G_k, or None when the denominator vanishes."""
    if k < 0:
        raise ValidationError("k must be nonnegative")
    val = table.g_threshold[k]
    return None if math.isnan(val) else float(val)


def g_star(table: SpectrumTable):
    """Minimum threshold over modes with negative denominator, with its mode.

    The scan is only trusted if the thresholds grow over the last quarter of
    the scanned range, confirming that the minimum was attained inside it.
    """
    candidates = [(float(table.g_threshold[k]), k)
                  for k in range(table.k_max + 1)
                  if table.denom[k] < -DENOM_TOL]
    if not candidates:
        raise SolverError(
            f"no mode with negative denominator up to k_max={table.k_max}; "
            "increase k_max")
    value, k0 = min(candidates)

    tail_start = max(2, table.k_max - max(1, table.k_max // 4))
    tail = [table.g_threshold[k] for k in range(tail_start, table.k_max + 1)
            if not math.isnan(table.g_threshold[k]) and table.denom[k] < 0]
    if len(tail) >= 2 and np.any(np.diff(tail) <= 0):
        raise SolverError(
            "thresholds are not increasing over the scan tail; "
            "increase k_max to certify attainment of the minimum")
    return float(value), int(k0)


@dataclass(frozen=True)
class StabilityReport:
    unstable_modes: tuple
    spectral_bound: float
    neutral_mode_value: float
    regime: str
    g_star: float = None
    g_star_mode: int = None


def classify_stability(table: SpectrumTable):
    """Sign pattern of the symbol plus the vascularisation regime label.

    Mode +-1 is the neutral direction and reported separately; the spectral
    bound maxes the symbol over k = 0 and 2 <= |k| <= k_max.
    """
    ks = [0] + list(range(2, table.k_max + 1))
    mus = {k: float(table.mu[k]) for k in ks}
    unstable = tuple(sorted(k for k, v in mus.items() if v > 0))
    bound = max(mus.values())

    gs = gk = None
    try:
        gs, gk = g_star(table)
    except SolverError:
        pass

    if table.G < 0:
        regime = "high_vascularisation_unstable"
    elif table.G == 0:
        regime = "hele_shaw_stable"
    elif gs is not None and table.G > gs:
        regime = "above_threshold_unstable"
    else:
        regime = "inconclusive_below_threshold"

    return StabilityReport(unstable_modes=unstable, spectral_bound=float(bound),
                           neutral_mode_value=float(table.mu[1]), regime=regime,
                           g_star=gs, g_star_mode=gk)


def l_G_index(table: SpectrumTable):
    """Smallest l >= 2 with mu_k <= mu_0 for all retained k >= l.

    Modes beyond the table are certified by the cubic decay bound: the ratio
    term is bounded by its k = 0 value, so for k > k_max

        mu_k <= (-k**3 + k)/R**3 - G * min(d_0, A - f(1))

    which must already fall below mu_0 at k = k_max + 1.
    """
    if table.denom[0] <= 0.0:
        raise ValidationError(
            "mode-zero denominator is nonpositive; the assumption that mode "
            "zero decays for all G > 0 fails for this model")
    if table.G <= 0:
        raise ValidationError("the periodicity index is defined for G > 0")
    mu0 = float(table.mu[0])

    k_tail = table.k_max + 1
    d_min = min(float(table.denom[0]), table.A - table.f_of_one)
    tail_bound = (-(k_tail**3) + k_tail) / table.R**3 - table.G * d_min
    if tail_bound > mu0:
        raise SolverError("cannot certify the tail beyond k_max; increase k_max")

    ok_from = table.k_max + 1
    for l in range(table.k_max, 1, -1):
        if table.mu[l] <= mu0:
            ok_from = l
        else:
            break
    if ok_from > table.k_max:
        raise SolverError("no admissible periodicity index up to k_max")
    return max(2, int(ok_from))


def table_rows(table: SpectrumTable):
    rows = []
    for k in range(table.k_max + 1):
        thr = table.g_threshold[k]
        rows.append({
            "k": k,
            "lambda_k": float(table.lam[k]),
            "ratio_k": float(table.ratio[k]),
            "mu_k": float(table.mu[k]),
            "g_threshold_k": None if math.isnan(thr) else float(thr),
        })
    return rows


def write_csv(table: SpectrumTable, path):
    """Emit the per-mode table; undefined thresholds become empty cells."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "lambda_k", "ratio_k", "mu_k", "g_threshold_k"])
        for row in table_rows(table):
            writer.writerow([
                row["k"],
                f"{row['lambda_k']:.17g}",
                f"{row['ratio_k']:.17g}",
                f"{row['mu_k']:.17g}",
                "" if row["g_threshold_k"] is None else f"{row['g_threshold_k']:.17g}",
            ])


def report_dict(table: SpectrumTable):
    report = classify_stability(table)
    out = {
        "R": table.R,
        "A": table.A,
        "G": table.G,
        "k_max": table.k_max,
        "mode_zero_damping_holds": table.assumption_holds,
        "mu": {str(k): float(table.mu[k]) for k in range(table.k_max + 1)},
        "g_star": report.g_star,
        "g_star_mode": report.g_star_mode,
        "unstable_modes": list(report.unstable_modes),
        "spectral_bound": report.spectral_bound,
        "neutral_mode_value": report.neutral_mode_value,
        "regime": report.regime,
    }
    if table.G > 0 and table.assumption_holds:
        try:
            out["l_G"] = l_G_index(table)
        except SolverError:
            out["l_G"] = None
    else:
        out["l_G"] = None
    return out


def write_report(table: SpectrumTable, path):
    with open(path, "w") as fh:
        json.dump(report_dict(table), fh, indent=2, sort_keys=True)
        fh.write("\n")
