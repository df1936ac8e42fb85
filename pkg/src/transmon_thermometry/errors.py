"""Statistical error propagation for the ratio thermometer.

Each estimator column shares one structure: its three outcome differences
can be written a = (p_e - p_f) d, b = (p_g - p_e) d, c = (p_g - p_f) d,
where d is one signed response difference, and the families are the
quotients A = b/c, B = a/b, C = a/c.  The column-to-difference map, derived
from the outcome equations, is

    column 1:  d = phi_g - phi_e   (a = x2-y2, b = x0-x1, c = y0-y1)
    column 2:  d = phi_g - phi_f   (a = x1-y1, b = y0-x2, c = x0-y2)
    column 3:  d = phi_e - phi_f   (a = x0-y0, b = y1-y2, c = x1-x2)

A single-shot outcome variance is the projection variance of the measurement
operator in the post-sequence state plus the voltage-noise variance.  Summing
the two outcomes of each difference gives the exact single-shot forms

    (da)^2 = 2 p_e p_f d_i^2 + (p_e + p_f) p_g (d_j^2 + d_k^2) + sigma_a^2
    (db)^2 = 2 p_g p_e d_i^2 + (p_g + p_e) p_f (d_j^2 + d_k^2) + sigma_b^2
    (dc)^2 = 2 p_g p_f d_i^2 + (p_g + p_f) p_e (d_j^2 + d_k^2) + sigma_c^2

with (d_i, d_j, d_k) the column's difference and the two complementary
cyclic differences.  Relative errors divide by the squared means, producing
the response-geometry factor F(d_i) = (d_j^2 + d_k^2)/d_i^2 whose minimum
value 0.5 fixes the optimal readout geometry.  Family errors compose in
quadrature ((dC/C)^2 = (dA/A)^2 + (dB/B)^2), and temperature errors follow
from the log-derivatives of the closed forms.  Quantum Fisher information
bounds give the per-measurement floor no estimator can beat.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import HBAR, KB
from .protocol import PureStateResponses
from .state import PopulationVector

#: cyclic response differences, indexed g -> e -> f -> g
#: dphi_g = phi_e - phi_f, dphi_e = phi_f - phi_g, dphi_f = phi_g - phi_e
CYCLIC_ORDER = ("g", "e", "f")

#: which cyclic difference squares into each column's formulas; the signed
#: measured difference may differ by sign (only squares and magnitudes enter)
COLUMN_DIFFERENCE_INDEX = {1: "f", 2: "e", 3: "g"}


@dataclass(frozen=True)
class NoiseModel:
    """Measurement noise: per-shot voltage sigma, averaging count, overrides.

    When the per-difference sigmas are not given explicitly they default to
    sqrt(2) * sigma_voltage (the difference of two independent readings).
    """

    sigma_voltage: float = 0.0
    shots: int = 1
    sigma_a: float | None = None
    sigma_b: float | None = None
    sigma_c: float | None = None

    def __post_init__(self):
        if self.sigma_voltage < 0.0:
            raise ValueError("sigma_voltage must be >= 0")
        if self.shots < 1:
            raise ValueError("shots must be >= 1")
        for name in ("sigma_a", "sigma_b", "sigma_c"):
            v = getattr(self, name)
            if v is not None and v < 0.0:
                raise ValueError(f"{name} must be >= 0")

    def difference_sigmas(self) -> tuple[float, float, float]:
        default = math.sqrt(2.0) * self.sigma_voltage
        return (
            self.sigma_a if self.sigma_a is not None else default,
            self.sigma_b if self.sigma_b is not None else default,
            self.sigma_c if self.sigma_c is not None else default,
        )


@dataclass(frozen=True)
class ErrorReport:
    """Propagated errors of one protocol execution (after shot averaging)."""

    delta_a: float
    delta_b: float
    delta_c: float
    rel_a: float
    rel_b: float
    rel_c: float
    rel_A: float
    rel_B: float
    rel_C: float
    rel_T_A: float
    rel_T_B: float
    rel_T_C: float
    net: float


def cyclic_differences(phi: PureStateResponses) -> dict[str, float]:
    """The three cyclic response differences keyed by their index."""
    return {
        "g": phi.phi_e - phi.phi_f,
        "e": phi.phi_f - phi.phi_g,
        "f": phi.phi_g - phi.phi_e,
    }


def f_function(differences) -> tuple[float, float, float]:
    """F(d_i) = (d_j^2 + d_k^2)/d_i^2 for each of three differences.

    Homogeneous of degree zero; the minimum value 0.5 is attained when the
    chosen difference is twice each of the other two.
    """
    d = tuple(float(v) for v in differences)
    if len(d) != 3:
        raise ValueError(f"expected 3 differences, got {len(d)}")
    if any(v == 0.0 or not math.isfinite(v) for v in d):
        raise ValueError(f"differences must be nonzero and finite, got {d}")
    sq = [v * v for v in d]
    total = sum(sq)
    return tuple((total - s) / s for s in sq)


def _column_quantities(p: PopulationVector, phi: PureStateResponses,
                       column: int) -> tuple[float, float, float]:
    """(d_i^2, d_j^2 + d_k^2, signed measured difference) for a column."""
    if column not in COLUMN_DIFFERENCE_INDEX:
        raise ValueError(f"column must be 1, 2 or 3, got {column}")
    diffs = cyclic_differences(phi)
    index = COLUMN_DIFFERENCE_INDEX[column]
    d_i_sq = diffs[index] ** 2
    d_rest_sq = sum(v * v for k, v in diffs.items() if k != index)
    return d_i_sq, d_rest_sq, diffs[index]


def abc_means(p: PopulationVector, phi: PureStateResponses,
              column: int = 1) -> tuple[float, float, float]:
    """Mean outcome differences (a, b, c) of one column, up to a common sign."""
    d_i_sq, _, d = _column_quantities(p, phi, column)
    return ((p.p_e - p.p_f) * d, (p.p_g - p.p_e) * d, (p.p_g - p.p_f) * d)


def abc_variances(p: PopulationVector, phi: PureStateResponses,
                  noise: NoiseModel, column: int = 1) -> tuple[float, float, float]:
    """Exact single-shot variances of the column's differences a, b, c."""
    d_i_sq, d_rest_sq, _ = _column_quantities(p, phi, column)
    sa, sb, sc = noise.difference_sigmas()
    pg, pe, pf = p.p_g, p.p_e, p.p_f
    var_a = 2.0 * pe * pf * d_i_sq + (pe + pf) * pg * d_rest_sq + sa * sa
    var_b = 2.0 * pg * pe * d_i_sq + (pg + pe) * pf * d_rest_sq + sb * sb
    var_c = 2.0 * pg * pf * d_i_sq + (pg + pf) * pe * d_rest_sq + sc * sc
    return var_a, var_b, var_c


def abc_relative_errors(p: PopulationVector, phi: PureStateResponses,
                        noise: NoiseModel, column: int = 1
                        ) -> tuple[float, float, float]:
    """Single-shot relative errors |da/a|, |db/b|, |dc/c| of one column."""
    means = abc_means(p, phi, column)
    pairs = {"a": ("p_e", "p_f"), "b": ("p_g", "p_e"), "c": ("p_g", "p_f")}
    for name, mean in zip("abc", means):
        if mean == 0.0:
            lhs, rhs = pairs[name]
            raise ValueError(
                f"populations {lhs} and {rhs} coincide (or responses degenerate);"
                f" relative error of {name} undefined"
            )
    variances = abc_variances(p, phi, noise, column)
    return tuple(math.sqrt(v) / abs(m) for v, m in zip(variances, means))


def abc_error_composition(rel_err_a: float, rel_err_b: float) -> float:
    """Quadrature composition of two relative errors, e.g. A and B into C."""
    if rel_err_a < 0.0 or rel_err_b < 0.0:
        raise ValueError("relative errors must be >= 0")
    return math.hypot(rel_err_a, rel_err_b)


def absolute_error_composition(c_over_a: float, delta_a: float,
                               c_over_b: float, delta_b: float) -> float:
    """(dC)^2 = (C/A)^2 (dA)^2 + (C/B)^2 (dB)^2, returned as dC."""
    return math.hypot(c_over_a * delta_a, c_over_b * delta_b)


def family_relative_errors(p: PopulationVector, phi: PureStateResponses,
                           noise: NoiseModel, column: int = 1
                           ) -> tuple[float, float, float]:
    """Relative errors of A = b/c, B = a/b, C = a/c for one column, per shot."""
    rel_a, rel_b, rel_c = abc_relative_errors(p, phi, noise, column)
    return (
        abc_error_composition(rel_b, rel_c),
        abc_error_composition(rel_a, rel_b),
        abc_error_composition(rel_a, rel_c),
    )


def temp_error_from_ratio(family: str, x: float, ratio_rel_error: float) -> float:
    """Relative temperature error from a ratio's relative error.

    Log-derivative coefficients in the low-temperature limit, with
    x = hbar*omega_ge/kB*T:

        |dT/T|_A = [(e^x - 1)/x]       |dA/A|
        |dT/T|_B = [(e^x - 1)/(x e^x)] |dB/B|
        |dT/T|_C = (1/x)               |dC/C|

    For large x the B and C coefficients converge to 1/x.
    """
    if x <= 0.0:
        raise ValueError("x must be positive")
    if ratio_rel_error < 0.0:
        raise ValueError("ratio relative error must be >= 0")
    if family == "A":
        return -math.expm1(-x) * math.exp(x) / x * ratio_rel_error
    if family == "B":
        return -math.expm1(-x) / x * ratio_rel_error
    if family == "C":
        return ratio_rel_error / x
    raise ValueError(f"unknown family {family!r}")


def qfi_bound_two_level(x: float, degeneracy: int = 2) -> float:
    """Cramer-Rao floor (dT/<T>)^2 per measurement for a two-level thermometer.

    ``degeneracy`` counts the levels with an (N-1)-fold degenerate excited
    manifold: (N - 1 + e^x)^2 / [(N - 1) x^2 e^x].  Written in an
    overflow-safe form valid for x up to the atanh limit of float64.
    """
    if x <= 0.0:
        raise ValueError("x must be positive")
    if degeneracy < 2:
        raise ValueError("degeneracy must be >= 2")
    n1 = degeneracy - 1
    half = math.exp(0.5 * x) if x < 1400.0 else math.inf
    return (half + n1 / half) ** 2 / (n1 * x * x)


def qfi_bound_three_level(x_ge: float, x_gf: float) -> float:
    """Cramer-Rao floor per measurement for the anharmonic three-level case.

    (e^{x_ge+x_gf} + e^{x_ge} + e^{x_gf})^2 divided by
    [x_ge^2 e^{x_gf} + x_gf^2 e^{x_ge} + (x_ge + x_gf)^2] e^{x_ge+x_gf},
    evaluated with the common exponential factored out so large x stay
    finite.  Reduces to the two-level bound as x_gf -> infinity.
    """
    if not 0.0 < x_ge < x_gf:
        raise ValueError("need 0 < x_ge < x_gf")
    s = x_ge + x_gf
    numerator = (1.0 + math.exp(-x_ge) + math.exp(-x_gf)) ** 2
    denominator = (x_ge * x_ge * math.exp(-x_ge)
                   + x_gf * x_gf * math.exp(-x_gf)
                   + s * s * math.exp(-s))
    return numerator / denominator


def net(delta_t: float, t_meas: float) -> float:
    """Noise-equivalent temperature sqrt(dT^2 * t_meas) in K/sqrt(Hz)."""
    if delta_t < 0.0 or t_meas <= 0.0:
        raise ValueError("delta_t must be >= 0 and t_meas positive")
    return delta_t * math.sqrt(t_meas)


def error_report(p: PopulationVector, phi: PureStateResponses, noise: NoiseModel,
                 omega_ge: float, temperature: float, column: int = 1,
                 t_meas: float = 29.0) -> ErrorReport:
    """Full error budget of one protocol execution after shot averaging.

    The NET figure uses the best (smallest) of the three family temperature
    errors at the stated measurement time per point.
    """
    if temperature <= 0.0 or omega_ge <= 0.0:
        raise ValueError("temperature and omega_ge must be positive")
    shots = float(noise.shots)
    means = abc_means(p, phi, column)
    variances = abc_variances(p, phi, noise, column)
    deltas = tuple(math.sqrt(v / shots) for v in variances)
    rels = tuple(d / abs(m) for d, m in zip(deltas, means))
    rel_big = (
        abc_error_composition(rels[1], rels[2]),
        abc_error_composition(rels[0], rels[1]),
        abc_error_composition(rels[0], rels[2]),
    )
    x = HBAR * omega_ge / (KB * temperature)
    rel_t = tuple(temp_error_from_ratio(fam, x, r)
                  for fam, r in zip(("A", "B", "C"), rel_big))
    best = min(rel_t)
    return ErrorReport(
        delta_a=deltas[0], delta_b=deltas[1], delta_c=deltas[2],
        rel_a=rels[0], rel_b=rels[1], rel_c=rels[2],
        rel_A=rel_big[0], rel_B=rel_big[1], rel_C=rel_big[2],
        rel_T_A=rel_t[0], rel_T_B=rel_t[1], rel_T_C=rel_t[2],
        net=net(best * temperature, t_meas),
    )
