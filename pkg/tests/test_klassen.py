import csv
import io
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial import cKDTree

from obcalc.klassen import (
    RESIDUAL_TOL,
    PunctureError,
    component_count,
    cross_section,
    fibration_value,
    grid_step,
    grid_tolerance,
    level_function,
    report_to_csv,
    report_to_json,
    translation_check,
)


def hausdorff(a, b):
    return max(cKDTree(b).query(a)[0].max(), cKDTree(a).query(b)[0].max())


def test_fibration_value_examples():
    assert fibration_value(0.75, 0, 0) == pytest.approx(1)
    assert fibration_value(0, 0.5, 0.5) == pytest.approx(1)
    assert fibration_value(0.75, 0, 0.25) == pytest.approx(1j)
    with pytest.raises(PunctureError):
        fibration_value(0.5, 0, 0.3)
    with pytest.raises(PunctureError):
        fibration_value(-0.5, 0.0, 0.0)


disk = st.tuples(st.floats(-1, 1), st.floats(-1, 1)).filter(
    lambda p: p[0] ** 2 + p[1] ** 2 <= 1 and min(math.hypot(p[0] - 0.5, p[1]), math.hypot(p[0] + 0.5, p[1])) > 1e-3
)


@given(disk, st.floats(0, 1), st.floats(0, 1))
def test_unit_modulus_and_multiplicativity(p, t, s):
    x, y = p
    v = fibration_value(x, y, t)
    assert abs(abs(v) - 1) < 1e-12
    assert abs(fibration_value(x, y, t + s) - v * np.exp(2j * np.pi * s)) < 1e-12


@given(disk, st.floats(0, 1))
def test_level_function_is_imaginary_part(p, t):
    x, y = p
    z2 = complex(x, y) ** 2 - 0.25
    assert level_function(x, y, t) == pytest.approx((z2 * np.exp(2j * np.pi * t)).imag, abs=1e-12)


def test_slice_t0_on_real_line():
    r = cross_section(0.0, 128)
    x, y = r.xy.T
    assert np.all(y == 0)
    assert np.all((np.abs(x) > 0.5) & (np.abs(x) < 1))
    assert r.max_residual < RESIDUAL_TOL


def test_slice_half_on_axes():
    r = cross_section(0.5, 128)
    x, y = r.xy.T
    on_imag = x == 0
    on_real = (y == 0) & (np.abs(x) < 0.5)
    assert np.all(on_imag | on_real)
    assert on_imag.any() and on_real.any()
    assert r.max_residual < RESIDUAL_TOL


def test_slice_quarter_is_hyperbola_arc():
    r = cross_section(0.25, 256)
    x, y = r.xy.T
    assert np.all(x * y < 0)
    assert np.abs(level_function(x, y, 0.25)).max() < 1e-9
    assert r.max_residual < RESIDUAL_TOL
    # branches run out to the boundary circle, where the antipodal gluing acts
    assert np.hypot(x, y).max() > 1 - grid_step(256) / 4


@pytest.mark.parametrize("t", [0.05, 0.25, 0.4, 0.6, 0.75, 0.95])
def test_generic_slices_are_dense(t):
    n = 256
    r = cross_section(t, n)
    assert r.max_residual < RESIDUAL_TOL
    d, _ = cKDTree(r.xy).query(r.xy, k=2)
    assert d[:, 1].max() <= grid_step(n) + 1e-12
    assert np.all(np.hypot(*r.xy.T) <= 1)


@pytest.mark.parametrize("t, expected", [(0.0, 1), (0.25, 1), (0.5, 2), (0.75, 1), (1.0, 1), (0.1, 1), (0.9, 1)])
def test_component_counts(t, expected):
    assert component_count(t, 256) == expected


@pytest.mark.parametrize("res", [64, 100, 512])
def test_counts_stable_in_resolution(res):
    assert [component_count(t, res) for t in (0.25, 0.5, 0.75)] == [1, 2, 1]


def test_argument_checks():
    with pytest.raises(ValueError):
        component_count(0.25, 32)
    with pytest.raises(ValueError):
        cross_section(0.25, 8)
    with pytest.raises(ValueError):
        cross_section(1.5, 64)
    assert cross_section(0.25, 32).component_count is None


@pytest.mark.parametrize("t", [0.1, 0.25, 0.3, 0.5, 0.8])
def test_conjugation_symmetry(t):
    # (x, y, t) -> (x, -y, 1 - t) maps the slice at t onto the slice at 1 - t
    a = cross_section(t, 256).xy
    b = cross_section(1 - t, 256).xy
    assert hausdorff(a * [1, -1], b) < grid_tolerance(256)


def test_swap_is_not_a_symmetry():
    a = cross_section(0.25, 256).xy
    b = cross_section(0.75, 256).xy
    assert hausdorff(a[:, ::-1], b) > 0.1


@pytest.mark.parametrize("t", [0.001, 0.01, 0.99, 0.999])
def test_levels_near_real_axis(t):
    # the branches hug the real axis closer than one angular grid cell
    r = cross_section(t, 256)
    assert len(r) > 100 and r.component_count == 1
    assert r.max_residual < RESIDUAL_TOL
    d, _ = cKDTree(r.xy).query(r.xy, k=2)
    assert d[:, 1].max() <= grid_step(256) + 1e-12


def test_translation_near_full_turn():
    assert translation_check(0.0951, 0.0853) < grid_tolerance(256)


def test_translation_examples():
    assert translation_check(0.0, 0.3) < 1e-12
    assert translation_check(0.25, 0.5) < grid_tolerance(256)
    assert translation_check(0.5, 0.5) < 1e-12


@settings(max_examples=20, deadline=None)
@given(st.floats(0, 1), st.floats(0, 1))
def test_translation_property(s, t):
    assert translation_check(s, t, 128) < grid_tolerance(128)


def test_csv_and_json():
    r = cross_section(0.25, 64)
    rows = list(csv.DictReader(io.StringIO(report_to_csv(r))))
    assert list(rows[0]) == ["x", "y", "t", "residual"]
    assert len(rows) == len(r)
    assert float(rows[0]["t"]) == 0.25
    data = json.loads(report_to_json(r))
    assert data["component_count"] == 1 and len(data["points"]) == len(r)
    assert r.points[0].t == 0.25
