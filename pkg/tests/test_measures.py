import math

import numpy as np
import pytest
from scipy.integrate import quad

from diffhankel.measures import (
    Atom,
    Measure,
    PowerLawDensity,
    SampledDensity,
    abs_moment,
    box_mass,
    validate,
)

LEBESGUE = Measure(densities=(PowerLawDensity(1.0, 0.0, (None, 0.0)),))
SQRT_DENSITY = Measure(densities=(PowerLawDensity(1.0, 0.5, (None, 0.0)),))


def test_validate_single_atom_ok():
    assert validate(Measure(atoms=(Atom(-1.0, 1.0),))) == []


def test_validate_right_half_plane_atom():
    bad = validate(Measure(atoms=(Atom(1.0, 1.0),)))
    assert len(bad) == 1
    assert "left half-plane" in bad[0]


def test_validate_non_integrable_power_law():
    bad = validate(Measure(densities=(PowerLawDensity(1.0, -1.5, (None, 0.0)),)))
    assert len(bad) == 1
    assert "non-integrable at origin" in bad[0]


def test_validate_sampled_origin_value():
    d = SampledDensity(nodes=(-1.0, 0.0), values=(0.0, 1.0))
    bad = validate(Measure(densities=(d,)))
    assert any("origin" in v for v in bad)


def test_validate_zero_weight_atom():
    assert validate(Measure(atoms=(Atom(-1.0, 0.0),)))


def test_flags_recomputed():
    m = Measure(atoms=(Atom(-1.0, 1.0), Atom(-2.0 + 1.0j, 0.5)))
    assert not m.on_negative_axis
    assert m.is_positive
    signed = Measure(densities=(PowerLawDensity(-1.0, 0.0, (-2.0, -1.0)),))
    assert not signed.is_positive


def test_box_mass_lebesgue():
    # d mu = dx on (-inf, 0): mu((-x, 0)) = x
    assert box_mass(LEBESGUE, (-3.0, 0.0)) == pytest.approx(3.0, rel=1e-15)


def test_box_mass_sqrt_density():
    oracle, _ = quad(lambda x: abs(x) ** 0.5, -2.0, -1.0)
    got = box_mass(SQRT_DENSITY, (-2.0, -1.0))
    assert got == pytest.approx(oracle, rel=1e-12)
    assert got == pytest.approx(1.2189514164974602, rel=1e-14)


def test_box_mass_atom_containment():
    m = Measure(atoms=(Atom(-1.0, 5.0),))
    assert box_mass(m, (-2.0, -0.5)) == 5.0
    assert box_mass(m, (-0.5, -0.1)) == 0.0
    # endpoint conventions
    assert box_mass(m, (-1.0, -0.5)) == 0.0
    assert box_mass(m, (-1.0, -0.5), include_lo=True) == 5.0
    assert box_mass(m, (-2.0, -1.0)) == 0.0
    assert box_mass(m, (-2.0, -1.0), include_hi=True) == 5.0


def test_box_mass_rejects_off_axis():
    m = Measure(atoms=(Atom(-1.0 + 2.0j, 1.0),))
    with pytest.raises(ValueError):
        box_mass(m, (-2.0, -0.5))


def test_box_mass_sampled_matches_trapezoid():
    d = SampledDensity(nodes=(-2.0, -1.0, 0.0), values=(1.0, 3.0, 0.0))
    m = Measure(densities=(d,))
    oracle, _ = quad(lambda x: np.interp(x, d.nodes, d.values), -1.5, -0.25)
    assert box_mass(m, (-1.5, -0.25)) == pytest.approx(oracle, rel=1e-12)


@pytest.mark.parametrize("split", [-2.0, -1.1, -0.3])
def test_box_mass_additive(split):
    m = Measure(
        atoms=(Atom(-1.0, 2.0), Atom(-3.0, 0.5)),
        densities=(
            PowerLawDensity(1.5, 0.5, (None, 0.0)),
            SampledDensity(nodes=(-4.0, -2.5, -1.0), values=(0.2, 1.0, 0.4)),
        ),
    )
    left = box_mass(m, (-5.0, split), include_hi=True)
    right = box_mass(m, (split, -0.01))
    whole = box_mass(m, (-5.0, -0.01))
    assert left + right == pytest.approx(whole, rel=1e-12)


def test_box_mass_monotone_for_positive():
    masses = [box_mass(SQRT_DENSITY, (-x, 0.0)) for x in (0.5, 1.0, 2.0, 4.0)]
    assert all(b > a for a, b in zip(masses, masses[1:]))


def test_abs_moment_atom():
    m = Measure(atoms=(Atom(-2.0, 1.0),))
    res = abs_moment(m, 1.0)
    assert res.finite and res.value == pytest.approx(0.5, rel=1e-15)


def test_abs_moment_lebesgue_divergent():
    res = abs_moment(LEBESGUE, 1.0)
    assert not res.finite and res.value == math.inf


def test_abs_moment_sqrt_density_divergent_at_infinity():
    res = abs_moment(SQRT_DENSITY, 0.5)
    assert not res.finite


def test_abs_moment_off_axis_uses_real_part():
    m = Measure(atoms=(Atom(-2.0 + 5.0j, 3.0),))
    assert abs_moment(m, 1.0).value == pytest.approx(1.5)


def test_abs_moment_homogeneous():
    m = Measure(
        atoms=(Atom(-1.5, 0.7),),
        densities=(PowerLawDensity(2.0, 1.0, (-3.0, -1.0)),),
    )
    base = abs_moment(m, 1.25).value
    assert abs_moment(m.scaled(3.5), 1.25).value == pytest.approx(3.5 * base, rel=1e-12)


@pytest.mark.parametrize("beta", [-0.6, -0.2, 0.0, 0.4, 1.0])
@pytest.mark.parametrize("q", [0.25, 0.5, 1.0, 1.6])
def test_abs_moment_exponent_thresholds(beta, q):
    # support touching 0: finite iff beta - q > -1
    if beta > -1:
        m0 = Measure(densities=(PowerLawDensity(1.0, beta, (-1.0, 0.0)),))
        assert abs_moment(m0, q).finite == (beta - q > -1)
    # support reaching -inf: finite iff beta - q < -1
    mi = Measure(densities=(PowerLawDensity(1.0, beta, (None, -1.0)),))
    assert abs_moment(mi, q).finite == (beta - q < -1)


def test_abs_moment_power_law_value_against_quadrature():
    m = Measure(densities=(PowerLawDensity(2.0, 0.5, (-4.0, -1.0)),))
    oracle, _ = quad(lambda x: 2.0 * abs(x) ** 0.5 * abs(x) ** -1.25, -4.0, -1.0)
    assert abs_moment(m, 1.25).value == pytest.approx(oracle, rel=1e-12)


def test_abs_moment_signed_sampled_uses_total_variation():
    d = SampledDensity(nodes=(-2.0, -1.0, 0.0), values=(-1.0, 1.0, 0.0))
    m = Measure(densities=(d,))
    oracle, _ = quad(
        lambda x: abs(np.interp(x, d.nodes, d.values)) / abs(x), -2.0, -1e-12, limit=200
    )
    assert abs_moment(m, 1.0).value == pytest.approx(oracle, rel=1e-7)


def test_abs_moment_sampled_divergent_for_large_q():
    d = SampledDensity(nodes=(-1.0, 0.0), values=(1.0, 0.0))
    m = Measure(densities=(d,))
    assert abs_moment(m, 1.5).finite
    assert not abs_moment(m, 2.0).finite
    assert not abs_moment(m, 2.5).finite


def test_abs_moment_requires_positive_q():
    with pytest.raises(ValueError):
        abs_moment(LEBESGUE, 0.0)
