"""Measures on the open left half-plane.

A measure is a finite list of point masses (atoms) in {Re p < 0} together
with density components supported on the negative real axis.  Two density
families are supported: power laws c*|x|^beta on an interval (a, b) with
-inf <= a < b <= 0, and piecewise-linear sampled densities on a bounded
interval.  Every component decays (or is bounded) in a way that makes
exp(t*Re p) integrable against it for all t > 0, so admissibility is a
structural property checked by :func:`validate` rather than by quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Union

import numpy as np

NEG_INF = float("-inf")

_IMAG_TOL = 1e-13


class Moment(NamedTuple):
    """Result of an absolute-moment integral; ``value`` is ``inf`` when not finite."""

    finite: bool
    value: float


@dataclass(frozen=True)
class Atom:
    """Point mass ``weight`` at ``location`` with Re(location) < 0."""

    location: complex
    weight: complex

    def violations(self) -> list[str]:
        out = []
        if not complex(self.location).real < 0:
            out.append(f"atom at {self.location}: location not in open left half-plane")
        if complex(self.weight) == 0:
            out.append(f"atom at {self.location}: weight is zero")
        return out


@dataclass(frozen=True)
class PowerLawDensity:
    """Density c*|x|^beta dx on (a, b) with -inf <= a < b <= 0.

    ``support[0] is None`` (or -inf) means the component extends to -infinity.
    """

    coeff: float
    exponent: float
    support: tuple[float | None, float]

    def __post_init__(self):
        a, b = self.support
        a = NEG_INF if a is None else float(a)
        object.__setattr__(self, "support", (a, float(b)))

    # radial coordinates r = |x|: support becomes [r_lo, r_hi)
    @property
    def r_lo(self) -> float:
        return -self.support[1]

    @property
    def r_hi(self) -> float:
        return -self.support[0] if self.support[0] != NEG_INF else math.inf

    def violations(self) -> list[str]:
        a, b = self.support
        out = []
        if self.coeff == 0:
            out.append("power-law density: coeff is zero")
        if not a < b:
            out.append(f"power-law density: support ({a}, {b}) is empty")
        if b > 0:
            out.append(f"power-law density: support upper bound {b} is positive")
        if b == 0 and self.exponent <= -1:
            out.append(
                f"power-law density: exponent {self.exponent} <= -1 with support "
                "touching the origin is non-integrable at origin"
            )
        return out


@dataclass(frozen=True)
class SampledDensity:
    """Piecewise-linear density given by ``values`` at increasing ``nodes`` <= 0."""

    nodes: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(float(x) for x in self.nodes))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    @property
    def support(self) -> tuple[float, float]:
        return (self.nodes[0], self.nodes[-1])

    def violations(self) -> list[str]:
        out = []
        if len(self.nodes) < 2:
            out.append("sampled density: fewer than two nodes")
            return out
        if len(self.values) != len(self.nodes):
            out.append("sampled density: values/nodes length mismatch")
            return out
        arr = np.asarray(self.nodes)
        if not np.all(np.diff(arr) > 0):
            out.append("sampled density: nodes not strictly increasing")
        if self.nodes[-1] > 0:
            out.append(f"sampled density: support upper bound {self.nodes[-1]} is positive")
        if self.nodes[-1] == 0 and self.values[-1] != 0:
            out.append(
                "sampled density: value at the origin must be 0 to keep "
                "moment integrands integrable"
            )
        if not all(math.isfinite(x) for x in self.nodes):
            out.append("sampled density: non-finite node")
        if not all(math.isfinite(v) for v in self.values):
            out.append("sampled density: non-finite value")
        return out

    def __call__(self, x: float) -> float:
        """Interpolated density at x (0 outside the support)."""
        if x < self.nodes[0] or x > self.nodes[-1]:
            return 0.0
        return float(np.interp(x, self.nodes, self.values))


Density = Union[PowerLawDensity, SampledDensity]


@dataclass(frozen=True)
class Measure:
    """Atoms plus density components; flags are derived, never user-set."""

    atoms: tuple[Atom, ...] = ()
    densities: tuple[Density, ...] = ()
    is_positive: bool = field(init=False)
    on_negative_axis: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "densities", tuple(self.densities))
        positive = all(
            complex(a.weight).imag == 0 and complex(a.weight).real > 0 for a in self.atoms
        )
        for d in self.densities:
            if isinstance(d, PowerLawDensity):
                positive = positive and d.coeff > 0
            else:
                positive = positive and all(v >= 0 for v in d.values)
        object.__setattr__(self, "is_positive", positive)
        object.__setattr__(
            self,
            "on_negative_axis",
            all(complex(a.location).imag == 0 for a in self.atoms),
        )

    @property
    def is_conjugate_symmetric(self) -> bool:
        """True when the impulse response is guaranteed real-valued.

        Densities are real; atoms must pair up under conjugation (on-axis
        atoms with real weights pair with themselves).
        """
        pending = [(complex(a.location), complex(a.weight)) for a in self.atoms]
        while pending:
            p, w = pending.pop()
            if p.imag == 0 and w.imag == 0:
                continue
            match = None
            for i, (q, v) in enumerate(pending):
                if q == p.conjugate() and v == w.conjugate():
                    match = i
                    break
            if match is None:
                return False
            pending.pop(match)
        return True

    def scaled(self, factor: float) -> "Measure":
        """The measure with every weight/coefficient multiplied by ``factor``."""
        atoms = tuple(Atom(a.location, a.weight * factor) for a in self.atoms)
        dens: list[Density] = []
        for d in self.densities:
            if isinstance(d, PowerLawDensity):
                dens.append(PowerLawDensity(d.coeff * factor, d.exponent, d.support))
            else:
                dens.append(SampledDensity(d.nodes, tuple(v * factor for v in d.values)))
        return Measure(atoms, tuple(dens))


def validate(measure: Measure) -> list[str]:
    """All invariant violations of the measure; an empty list means admissible."""
    out: list[str] = []
    for a in measure.atoms:
        out.extend(a.violations())
    for d in measure.densities:
        out.extend(d.violations())
    return out


def require_valid(measure: Measure) -> None:
    bad = validate(measure)
    if bad:
        raise ValueError("invalid measure: " + "; ".join(bad))


def describe(measure: Measure) -> dict:
    """Compact summary used in reports."""
    parts = []
    for d in measure.densities:
        if isinstance(d, PowerLawDensity):
            a, b = d.support
            lo = "-inf" if a == NEG_INF else f"{a:g}"
            parts.append(f"power_law(coeff={d.coeff:g}, exponent={d.exponent:g}, support=({lo}, {b:g}))")
        else:
            parts.append(f"sampled({len(d.nodes)} nodes on [{d.nodes[0]:g}, {d.nodes[-1]:g}])")
    return {
        "n_atoms": len(measure.atoms),
        "atoms": [
            {"location": [complex(a.location).real, complex(a.location).imag],
             "weight": [complex(a.weight).real, complex(a.weight).imag]}
            for a in measure.atoms
        ],
        "densities": parts,
        "is_positive": measure.is_positive,
        "on_negative_axis": measure.on_negative_axis,
    }


# ---------------------------------------------------------------------------
# interval masses
# ---------------------------------------------------------------------------

def _powerlaw_primitive(r: float, e: float) -> float:
    # antiderivative of r^e, with the r -> 0 / r -> inf limits folded in
    if e == -1.0:
        if r == 0.0 or r == math.inf:
            raise ValueError("log primitive evaluated at an improper endpoint")
        return math.log(r)
    p = e + 1.0
    if r == 0.0:
        if p > 0:
            return 0.0
        raise ValueError("divergent power-law primitive at 0")
    if r == math.inf:
        if p < 0:
            return 0.0
        raise ValueError("divergent power-law primitive at inf")
    return r ** p / p


def _powerlaw_interval_integral(beta: float, r0: float, r1: float) -> float:
    """Integral of r^beta over [r0, r1] with 0 <= r0 <= r1 <= inf (must converge)."""
    if r1 <= r0:
        return 0.0
    return _powerlaw_primitive(r1, beta) - _powerlaw_primitive(r0, beta)


def box_mass(
    measure: Measure,
    interval: tuple[float, float],
    *,
    include_lo: bool = False,
    include_hi: bool = False,
) -> float:
    """mu((x_lo, x_hi)) for an interval of the negative real axis.

    Atoms and power-law parts are evaluated in closed form; sampled parts by
    the exact integral of the piecewise-linear interpolant.  Endpoint
    inclusion only matters for atoms sitting exactly on an endpoint.
    """
    require_valid(measure)
    if not measure.on_negative_axis:
        raise ValueError("box_mass requires a measure supported on the negative real axis")
    x_lo, x_hi = float(interval[0]), float(interval[1])
    if not x_lo < x_hi:
        raise ValueError(f"empty interval ({x_lo}, {x_hi})")
    if x_hi > 0:
        raise ValueError(f"interval ({x_lo}, {x_hi}) extends past the origin")

    total = 0.0 + 0.0j
    for a in measure.atoms:
        x = complex(a.location).real
        inside = (x > x_lo or (include_lo and x == x_lo)) and (
            x < x_hi or (include_hi and x == x_hi)
        )
        if inside:
            total += complex(a.weight)

    for d in measure.densities:
        if isinstance(d, PowerLawDensity):
            lo = max(x_lo, d.support[0])
            hi = min(x_hi, d.support[1])
            if lo < hi:
                # r = |x| decreases with x: x in (lo, hi) <-> r in (|hi|, |lo|)
                total += d.coeff * _powerlaw_interval_integral(d.exponent, -hi, -lo)
        else:
            total += _sampled_signed_integral(d, x_lo, x_hi)

    if abs(total.imag) > _IMAG_TOL * max(1.0, abs(total.real)):
        raise ValueError("box_mass is only defined for real atom weights")
    return float(total.real)


def _sampled_signed_integral(d: SampledDensity, x_lo: float, x_hi: float) -> float:
    total = 0.0
    for i in range(len(d.nodes) - 1):
        a, b = d.nodes[i], d.nodes[i + 1]
        lo, hi = max(a, x_lo), min(b, x_hi)
        if lo >= hi:
            continue
        total += 0.5 * (d(lo) + d(hi)) * (hi - lo)
    return total


# ---------------------------------------------------------------------------
# absolute moments  int |Re p|^(-q) d|mu|(p)
# ---------------------------------------------------------------------------

def abs_moment(measure: Measure, q: float) -> Moment:
    """Integral of |Re p|^(-q) against the total variation |mu|.

    Divergence of power-law components is decided by exponent arithmetic at
    the improper endpoints, never numerically.
    """
    require_valid(measure)
    if not q > 0:
        raise ValueError("q must be positive")

    total = 0.0
    for a in measure.atoms:
        x = -complex(a.location).real
        total += abs(complex(a.weight)) * x ** (-q)

    for d in measure.densities:
        if isinstance(d, PowerLawDensity):
            e = d.exponent - q
            if d.r_lo == 0.0 and e <= -1:
                return Moment(False, math.inf)
            if d.r_hi == math.inf and e >= -1:
                return Moment(False, math.inf)
            total += abs(d.coeff) * _powerlaw_interval_integral(e, d.r_lo, d.r_hi)
        else:
            m = _sampled_abs_moment(d, q)
            if not m.finite:
                return m
            total += m.value
    return Moment(True, total)


def _sampled_abs_moment(d: SampledDensity, q: float) -> Moment:
    """Exact segment-wise integral of |rho(x)| / |x|^q for piecewise-linear rho."""
    total = 0.0
    for i in range(len(d.nodes) - 1):
        x0, x1 = d.nodes[i], d.nodes[i + 1]
        v0, v1 = d.values[i], d.values[i + 1]
        if v0 == 0.0 and v1 == 0.0:
            continue
        # radial coordinates: r in [r1, r0], rho = A + B r
        r0, r1 = -x0, -x1
        B = (v0 - v1) / (r0 - r1)
        A = v1 - B * r1
        if r1 == 0.0:
            # validity forces v1 = 0 here, so A = 0 and the integrand is |B| r^(1-q)
            if q >= 2.0:
                return Moment(False, math.inf)
        total += _abs_linear_moment(A, B, r1, r0, q)
    return Moment(True, total)


def _abs_linear_moment(A: float, B: float, r_lo: float, r_hi: float, q: float) -> float:
    """Integral of |A + B r| r^(-q) over [r_lo, r_hi] (convergent by caller)."""

    def signed(lo: float, hi: float) -> float:
        if hi <= lo:
            return 0.0
        out = 0.0
        if A != 0.0:
            out += A * _powerlaw_interval_integral(-q, lo, hi)
        if B != 0.0:
            out += B * _powerlaw_interval_integral(1.0 - q, lo, hi)
        return out

    if B != 0.0:
        root = -A / B
        if r_lo < root < r_hi:
            return abs(signed(r_lo, root)) + abs(signed(root, r_hi))
    return abs(signed(r_lo, r_hi))
