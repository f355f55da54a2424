"""Impulse response, transfer function and the shared quadrature engine.

The impulse response of a half-plane measure is ``h(t) = int exp(t*p) dmu(p)``
and the transfer function is the resolvent integral ``G(s) = int dmu(p)/(s-p)``
on the right half-plane.  Full-ray power-law densities are evaluated in closed
form through the Gamma function; every other density component is reduced to a
finite exponential mixture (quadrature nodes on its support) so that matrix
assembly elsewhere can exploit separability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .measures import (
    Measure,
    PowerLawDensity,
    SampledDensity,
    require_valid,
)

# default grid: resolves kernels t^alpha with alpha > -1/2 at the origin and
# slow power-law tails, while keeping dense decompositions cheap (384 nodes)
DEFAULT_T_MIN = 1e-6
DEFAULT_T_MAX = 1e6
DEFAULT_PANELS = 24
DEFAULT_ORDER = 16

_BATCH = 4096


@dataclass(frozen=True)
class PowerWeight:
    """The weight family w(t) = scale * t**alpha with alpha > -1/2."""

    scale: float = 1.0
    alpha: float = 0.0

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError("weight scale must be positive")
        if not self.alpha > -0.5:
            raise ValueError("weight exponent must exceed -1/2")

    def __call__(self, t):
        return self.scale * np.asarray(t, dtype=float) ** self.alpha

    @classmethod
    def glover(cls) -> "PowerWeight":
        """Weight pi**(-1/4) * t**(-1/4) used for L2 model reduction."""
        return cls(scale=math.pi ** -0.25, alpha=-0.25)


@dataclass(frozen=True)
class QuadratureRule:
    """Composite Gauss-Legendre rule on geometrically spaced panels."""

    boundaries: np.ndarray
    nodes: np.ndarray
    weights: np.ndarray
    panels: int
    order: int

    @property
    def t_min(self) -> float:
        return float(self.boundaries[0])

    @property
    def t_max(self) -> float:
        return float(self.boundaries[-1])

    def integrate(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, values))


@lru_cache(maxsize=64)
def _leggauss(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def _panelize(boundaries: np.ndarray, order: int):
    """Gauss-Legendre nodes/weights of the given order on each panel."""
    x, w = _leggauss(order)
    lo = boundaries[:-1]
    hi = boundaries[1:]
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def build_rule(t_min: float, t_max: float, panels: int, order: int) -> QuadratureRule:
    """Geometric panels from t_min to t_max with Gauss-Legendre nodes per panel."""
    if not (0 < t_min < t_max):
        raise ValueError(f"need 0 < t_min < t_max, got ({t_min}, {t_max})")
    if panels < 1:
        raise ValueError("panels must be >= 1")
    if order < 2:
        raise ValueError("order must be >= 2")
    boundaries = np.geomspace(t_min, t_max, panels + 1)
    nodes, weights = _panelize(boundaries, order)
    if not (np.all(np.diff(nodes) > 0) and np.all(weights > 0)):
        raise ValueError("degenerate rule")
    lengths = np.diff(boundaries)
    sums = weights.reshape(panels, order).sum(axis=1)
    if np.max(np.abs(sums - lengths) / lengths) > 1e-12:
        raise AssertionError("panel weights do not sum to panel lengths")
    return QuadratureRule(boundaries, nodes, weights, panels, order)


@lru_cache(maxsize=1)
def default_rule() -> QuadratureRule:
    return build_rule(DEFAULT_T_MIN, DEFAULT_T_MAX, DEFAULT_PANELS, DEFAULT_ORDER)


# ---------------------------------------------------------------------------
# exponential-mixture representation of h
# ---------------------------------------------------------------------------

class HRepresentation(NamedTuple):
    """h(t) ~= sum a_k exp(p_k t) + sum c_m exp(x_m t) + sum g_j t**(-e_j)."""

    atom_rates: np.ndarray    # complex, Re < 0
    atom_coeffs: np.ndarray   # complex
    exp_rates: np.ndarray     # float, < 0 (density quadrature nodes)
    exp_coeffs: np.ndarray    # float
    power_coeffs: np.ndarray  # float, closed-form full-ray terms
    power_decays: np.ndarray  # float, > 0


def _geometric_offset_panels(scale_min: float, span: float, per_decade: float = 3.0,
                             order: int = 12, max_panels: int = 400):
    """Panels on [0, span] resolving every scale down to scale_min."""
    scale_min = min(scale_min, span / 4.0)
    n = int(min(max_panels, max(8, math.ceil(per_decade * math.log10(span / scale_min)))))
    boundaries = np.concatenate([[0.0], np.geomspace(scale_min, span, n)])
    return _panelize(boundaries, order)


def _semiray_mixture(coeff, beta, r0, t_floor, t_ceil):
    """Nodes for coeff * r^beta dr on [r0, inf): integral cut where exp underflows."""
    span = (800.0 + 10.0 * max(beta, 0.0)) / t_floor
    scale_min = min(1.0 / t_ceil, r0) * 1e-2
    v, qv = _geometric_offset_panels(scale_min, span)
    r = r0 + v
    return r, coeff * qv * r ** beta


def _bounded_mixture(coeff, beta, r_lo, r_hi, t_floor, t_ceil):
    span = min(r_hi - r_lo, (800.0 + 10.0 * max(beta, 0.0)) / t_floor)
    scale_min = min(1.0 / t_ceil, span) * 1e-2
    v, qv = _geometric_offset_panels(scale_min, span)
    r = r_lo + v
    return r, coeff * qv * r ** beta


_SAMPLED_SEG_ORDER = 6


def _sampled_mixture(d: SampledDensity):
    """Per-segment Gauss-Legendre nodes against the piecewise-linear density."""
    xs, ws = [], []
    gx, gw = _leggauss(_SAMPLED_SEG_ORDER)
    for i in range(len(d.nodes) - 1):
        a, b = d.nodes[i], d.nodes[i + 1]
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        x = mid + half * gx
        xs.append(x)
        ws.append(half * gw * np.interp(x, d.nodes, d.values))
    return np.concatenate(xs), np.concatenate(ws)


def build_h_representation(measure: Measure, t_floor: float, t_ceil: float) -> HRepresentation:
    """Exponential-mixture form of h accurate on [t_floor, t_ceil]."""
    if not (0 < t_floor <= t_ceil):
        raise ValueError("need 0 < t_floor <= t_ceil")
    atom_rates = np.array([complex(a.location) for a in measure.atoms])
    atom_coeffs = np.array([complex(a.weight) for a in measure.atoms])
    exp_r: list[np.ndarray] = []
    exp_c: list[np.ndarray] = []
    pow_c: list[float] = []
    pow_e: list[float] = []
    for d in measure.densities:
        if isinstance(d, SampledDensity):
            x, c = _sampled_mixture(d)
            exp_r.append(x)
            exp_c.append(c)
            continue
        beta, c = d.exponent, d.coeff
        r_lo, r_hi = d.r_lo, d.r_hi
        if r_lo == 0.0:
            pow_c.append(c * math.gamma(beta + 1.0))
            pow_e.append(beta + 1.0)
            if math.isfinite(r_hi):
                # subtract the ray beyond the support
                r, q = _semiray_mixture(-c, beta, r_hi, t_floor, t_ceil)
                exp_r.append(-r)
                exp_c.append(q)
        elif not math.isfinite(r_hi):
            r, q = _semiray_mixture(c, beta, r_lo, t_floor, t_ceil)
            exp_r.append(-r)
            exp_c.append(q)
        else:
            r, q = _bounded_mixture(c, beta, r_lo, r_hi, t_floor, t_ceil)
            exp_r.append(-r)
            exp_c.append(q)
    cat = lambda parts: np.concatenate(parts) if parts else np.empty(0)
    return HRepresentation(
        atom_rates, atom_coeffs, cat(exp_r), cat(exp_c),
        np.asarray(pow_c), np.asarray(pow_e),
    )


def eval_h_representation(rep: HRepresentation, ts: np.ndarray) -> np.ndarray:
    """h at the given positive times; complex output."""
    ts = np.asarray(ts, dtype=float)
    out = np.zeros(ts.shape, dtype=complex)
    for k in range(len(rep.power_coeffs)):
        out += rep.power_coeffs[k] * ts ** (-rep.power_decays[k])
    if len(rep.atom_rates):
        for i in range(0, len(ts), _BATCH):
            blk = ts[i:i + _BATCH]
            out[i:i + _BATCH] += np.exp(blk[:, None] * rep.atom_rates[None, :]) @ rep.atom_coeffs
    if len(rep.exp_rates):
        for i in range(0, len(ts), _BATCH):
            blk = ts[i:i + _BATCH]
            args = blk[:, None] * rep.exp_rates[None, :]
            np.clip(args, -745.0, 0.0, out=args)
            out[i:i + _BATCH] += np.exp(args) @ rep.exp_coeffs
    return out


def impulse_response_batch(measure: Measure, ts: np.ndarray) -> np.ndarray:
    ts = np.asarray(ts, dtype=float)
    if ts.size == 0:
        return np.empty(0, dtype=complex)
    if not np.all(ts > 0):
        raise ValueError("impulse response is defined for t > 0 only")
    rep = build_h_representation(measure, float(ts.min()), float(ts.max()))
    return eval_h_representation(rep, ts)


def impulse_response(measure: Measure, t: float) -> complex:
    """Fourier-Borel transform of the measure at time t > 0."""
    require_valid(measure)
    return complex(impulse_response_batch(measure, np.array([float(t)]))[0])


# ---------------------------------------------------------------------------
# transfer function (Stieltjes transform)
# ---------------------------------------------------------------------------

class TransferValue(NamedTuple):
    """Stieltjes transform value; ``divergent`` marks a non-integrable measure."""

    value: complex
    divergent: bool = False
    note: str = ""


def _stieltjes_divergence(measure: Measure) -> str | None:
    for d in measure.densities:
        if isinstance(d, PowerLawDensity) and not math.isfinite(d.r_hi):
            if d.exponent == 0.0:
                return "integrand ~ 1/|p| at -infinity: logarithmically divergent"
            if d.exponent > 0.0:
                return (
                    f"integrand ~ |p|^{d.exponent - 1:g} at -infinity: not absolutely integrable"
                )
    return None


def _stieltjes_powerlaw(c: float, beta: float, r_lo: float, r_hi: float, s: complex) -> complex:
    """c * int r^beta / (s + r) dr over [r_lo, r_hi]; caller has excluded divergence."""
    if r_lo == 0.0 and not math.isfinite(r_hi) and -1.0 < beta < 0.0:
        return c * math.pi * s ** beta / math.sin(math.pi * (beta + 1.0))
    total = 0.0 + 0.0j
    lo = r_lo
    if lo == 0.0:
        # analytic stub for the integrable endpoint singularity
        eps = min(r_hi, max(1.0, abs(s))) * 1e-8
        total += c * (eps ** (beta + 1.0) / ((beta + 1.0) * s)
                      - eps ** (beta + 2.0) / ((beta + 2.0) * s * s))
        lo = eps
    if math.isfinite(r_hi):
        hi = r_hi
        tail = 0.0 + 0.0j
    else:
        hi = max(1.0, 10.0 * abs(s), 2.0 * lo) * 1e6
        tail = sum((-s) ** k * hi ** (beta - k) / (k - beta) for k in range(3))
    n = max(16, math.ceil(3 * math.log10(hi / lo)))
    r, q = _panelize(np.geomspace(lo, hi, n + 1), 12)
    total += c * np.sum(q * r ** beta / (s + r))
    return total + c * tail


def transfer_function(measure: Measure, s: complex) -> TransferValue:
    """Transfer function G(s) = int dmu(p)/(s - p) for Re s > 0.

    Returns a divergence flag (never a silently regularized value) when the
    Stieltjes integral fails to converge absolutely.
    """
    require_valid(measure)
    s = complex(s)
    if not s.real > 0:
        raise ValueError("transfer function is defined on the open right half-plane")
    note = _stieltjes_divergence(measure)
    if note is not None:
        return TransferValue(complex(math.nan, math.nan), True, note)
    total = 0.0 + 0.0j
    for a in measure.atoms:
        total += complex(a.weight) / (s - complex(a.location))
    gx, gw = _leggauss(8)
    for d in measure.densities:
        if isinstance(d, PowerLawDensity):
            total += _stieltjes_powerlaw(d.coeff, d.exponent, d.r_lo, d.r_hi, s)
        else:
            for i in range(len(d.nodes) - 1):
                a, b = d.nodes[i], d.nodes[i + 1]
                mid, half = 0.5 * (a + b), 0.5 * (b - a)
                x = mid + half * gx
                total += np.sum(half * gw * np.interp(x, d.nodes, d.values) / (s - x))
    return TransferValue(total, False, "")


# ---------------------------------------------------------------------------
# weighted exponentials
# ---------------------------------------------------------------------------

def psi_norm_sq(p: complex, weight: PowerWeight) -> float:
    """Squared L2 norm of t -> w(t) exp(p t), in closed form via Gamma."""
    p = complex(p)
    if not p.real < 0:
        raise ValueError("psi_p is square-integrable only for Re p < 0")
    x = -p.real
    a = weight.alpha
    return weight.scale ** 2 * math.gamma(2.0 * a + 1.0) / (2.0 * x) ** (2.0 * a + 1.0)


# ---------------------------------------------------------------------------
# endpoint behaviour of h (exponent bookkeeping for the criteria)
# ---------------------------------------------------------------------------

class HAsymptotics(NamedTuple):
    """Algebraic behaviour of h at the endpoints of (0, inf).

    ``t ** (-sing_at_zero)`` blow-up as t -> 0+ (0.0 when h stays bounded) and
    ``t ** (-algebraic_tail)`` decay as t -> inf (None when the decay is
    exponential).
    """

    sing_at_zero: float
    algebraic_tail: float | None
    slowest_rate: float  # exponential decay rate when algebraic_tail is None


def _net_groups(terms: list[tuple[float, float]]) -> dict[float, float]:
    groups: dict[float, float] = {}
    for e, c in terms:
        groups[e] = groups.get(e, 0.0) + c
    scale = sum(abs(c) for _, c in terms) or 1.0
    return {e: c for e, c in groups.items() if abs(c) > 1e-13 * scale}


def h_asymptotics(measure: Measure) -> HAsymptotics:
    at_zero: list[tuple[float, float]] = []
    at_inf: list[tuple[float, float]] = []
    rates = [abs(complex(a.location).real) for a in measure.atoms]
    for d in measure.densities:
        if isinstance(d, PowerLawDensity):
            if not math.isfinite(d.r_hi):
                at_zero.append((d.exponent + 1.0, d.coeff * math.gamma(d.exponent + 1.0)))
            if d.r_lo == 0.0:
                at_inf.append((d.exponent + 1.0, d.coeff * math.gamma(d.exponent + 1.0)))
            else:
                rates.append(d.r_lo)
        else:
            if d.nodes[-1] == 0.0:
                # density ~ slope*|x| near the origin, so the tail is ~ slope/t^2
                slope = d.values[-2] / (d.nodes[-1] - d.nodes[-2])
                if slope != 0.0:
                    at_inf.append((2.0, slope))
                else:
                    rates.append(abs(d.nodes[-2]))
            else:
                rates.append(abs(d.nodes[-1]))
    zero_groups = _net_groups(at_zero)
    inf_groups = _net_groups(at_inf)
    sing = max(zero_groups, default=0.0)
    tail = min(inf_groups) if inf_groups else None
    return HAsymptotics(max(sing, 0.0), tail, min(rates, default=math.inf))
