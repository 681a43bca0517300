import json

import numpy as np
import pytest

from inclusion_forge.conformal import (
    BOUNDARY_BAND,
    EXTERIOR,
    INTERIOR,
    ConformalMap,
    boundary_point,
    boundary_polyline,
    classify_point,
    eval_psi,
    eval_psi_prime,
    load_shape,
    save_shape,
    scale_factor,
)
from inclusion_forge.exceptions import ConfigurationError, DegenerateMapError


def test_disk_is_identity():
    m = ConformalMap.disk(2.0)
    w = np.array([2.0, 3j, -4 + 1j])
    assert np.allclose(eval_psi(m, w), w)
    assert np.allclose(eval_psi_prime(m, w), 1.0)
    assert m.is_disk and m.order == 0
    assert np.isclose(m.rho0, np.log(2.0))


def test_psi_matches_direct_sum(example1):
    w = 1.3 * np.exp(1j * np.linspace(0, 6, 7))
    direct = w + 0.25 / w + 0.125 / w ** 2 + 0.1 / w ** 3
    assert np.allclose(eval_psi(example1, w), direct, atol=1e-15)


def test_derivative_against_central_difference(kite):
    w = 1.2 * np.exp(1j * np.linspace(0.1, 6, 9))
    h = 1e-6
    fd = (eval_psi(kite, w + h) - eval_psi(kite, w - h)) / (2 * h)
    assert np.allclose(eval_psi_prime(kite, w), fd, atol=1e-8)


def test_scale_factor_ellipse_closed_form(ellipse):
    # h = |e^{i theta} - 0.5 e^{-i theta}| on the unit circle
    theta = np.linspace(0, 2 * np.pi, 13)
    expected = np.abs(np.exp(1j * theta) - 0.5 * np.exp(-1j * theta))
    assert np.allclose(scale_factor(ellipse, 0.0, theta), expected)


def test_boundary_point_fields(ellipse):
    bp = boundary_point(ellipse, np.pi / 2)
    assert np.isclose(bp.z, 0.5j)
    assert np.isclose(bp.h, 1.5)
    assert bp.rho == 0.0


def test_rejects_origin_and_deep_interior(example1):
    with pytest.raises(ValueError):
        eval_psi(example1, 0.0)
    with pytest.raises(ValueError):
        eval_psi(example1, 0.5)
    # inside the allowed band is fine
    eval_psi(example1, 0.97)


@pytest.mark.parametrize(
    "gamma, coeffs",
    [(0.0, [0]), (-1.0, [0]), (1.0, [np.nan]), (1.0, [])],
)
def test_invalid_parameters(gamma, coeffs):
    with pytest.raises(ConfigurationError):
        ConformalMap(gamma, coeffs)


def test_non_injective_map_rejected():
    # a_1 = 1 collapses the circle onto a segment
    with pytest.raises(ConfigurationError):
        ConformalMap(1.0, [0, 1.0])
    # a large a_2 makes the boundary self-intersect
    with pytest.raises(ConfigurationError):
        ConformalMap(1.0, [0, 0, 0.9])


def test_degenerate_scale_factor():
    m = ConformalMap(1.0, [0, 1.0], check=False)
    with pytest.raises(DegenerateMapError):
        scale_factor(m, 0.0, np.array([0.0]))


def test_classify_points(example1):
    z = np.array([0.0, 3.0, 2j, complex(eval_psi(example1, 1.0))])
    labels = classify_point(example1, z)
    assert list(labels) == [INTERIOR, EXTERIOR, EXTERIOR, BOUNDARY_BAND]
    assert classify_point(example1, 0.1) == INTERIOR


def test_polyline_closed_and_ordered(kite):
    p = boundary_polyline(kite, 256)
    assert p.shape == (256,)
    # counter-clockwise: positive signed area
    area = 0.5 * np.sum(p.real * np.roll(p.imag, -1) - np.roll(p.real, -1) * p.imag)
    assert area > 0


def test_shape_round_trip(tmp_path, kite):
    path = tmp_path / "shape.json"
    save_shape(kite, path)
    again = load_shape(path)
    assert again == kite
    data = json.loads(path.read_text())
    assert data["gamma"] == 1.0 and len(data["coeffs"]) == 7


def test_load_shape_errors(tmp_path):
    with pytest.raises(ConfigurationError):
        load_shape(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigurationError):
        load_shape(bad)
    bad.write_text('{"gamma": 1}')
    with pytest.raises(ConfigurationError):
        load_shape(bad)
