import json
import math
import os
from pathlib import Path

import numpy as np
import pytest

import christoffel_geom as cg

EXAMPLES = Path(os.environ.get("CHRISTOFFEL_EXAMPLES_DIR", Path(__file__).resolve().parents[2] / "docs" / "examples"))


def test_parse_and_derivatives():
    e = cg.parse("r*sin(th)", ["r", "th"])
    assert e([2.0, 0.0]) == 0.0
    assert e.derivative2([2.0, 0.0], 0, 1) == (0.0, 0.0, 2.0, 1.0)
    assert str(e) == "(r * sin(th))"
    assert cg.parse(str(e), ["r", "th"]) == e


def test_parse_error_is_raised():
    with pytest.raises(cg.ParseError):
        cg.parse("r +", ["r"])
    with pytest.raises(cg.UnknownIdentifierError):
        cg.parse("phi", ["r"])
    with pytest.raises(cg.DomainError):
        cg.parse("log(r)", ["r"])([0.0])


def test_polar_christoffel():
    metric = cg.parse_metric([["1", "0"], ["0", "r^2"]], ["r", "th"])
    s = cg.sample_metric(metric, np.array([2.0, 0.0]))
    np.testing.assert_array_equal(s.g_inv, [[1.0, 0.0], [0.0, 0.25]])
    gamma = cg.christoffel(s)
    assert gamma.shape == (2, 2, 2)
    assert gamma[0, 1, 1] == -2.0
    assert gamma[1, 0, 1] == 0.5
    assert np.abs(cg.metricity_residual(s)).max() <= 1e-15


def test_singular_metric():
    metric = cg.parse_metric([["r", "0"], ["0", "r"]], ["r", "th"])
    with pytest.raises(cg.SingularMetricError):
        cg.sample_metric(metric, np.array([0.0, 1.0]))


def test_cartesian_to_polar_transform():
    cmap = cg.CoordinateMap(
        ["X", "Y"],
        ["r", "th"],
        ["sqrt(X^2 + Y^2)", "2*atan(Y/(sqrt(X^2 + Y^2) + X))"],
        ["r*cos(th)", "r*sin(th)"],
    )
    ctx = cg.TransformContext(cmap, np.array([1.0, math.sqrt(3.0)]))
    np.testing.assert_allclose(ctx.y, [2.0, math.pi / 3], rtol=1e-15)
    np.testing.assert_allclose(ctx.push_metric(np.eye(2)), [[1.0, 0.0], [0.0, 4.0]], atol=1e-14)
    euclid = cg.parse_metric([["1", "0"], ["0", "1"]], ["X", "Y"])
    report = ctx.tensoriality(euclid)
    assert report["residual_connection_commute"] <= 1e-8
    assert report["pulled_christoffel"][0, 1, 1] == pytest.approx(-2.0, abs=1e-12)


def test_uniqueness_matches_cli():
    report = cg.uniqueness_report(2, seed=7)
    assert report["verdict"] == "PASS"
    assert report["primary"]["unknown_count"] == 36
    assert report["primary"]["nullspace_dim"] == 0
    assert report["unrestricted"]["nullspace_dim"] == 16

    code, out, _ = cg.run_cli(["uniqueness", "--dim", "2", "--seed", "7"])
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "PASS"
    assert doc["residuals"]["particular_vs_christoffel_inf"] == report["primary"]["particular_vs_christoffel"]


def test_cli_error_contract():
    code, out, _ = cg.run_cli(["christoffel", "-"], stdin="{")
    assert code == 2
    assert json.loads(out)["error"]["kind"] == "schema"
    code, out, _ = cg.run_cli(["metricity", str(EXAMPLES / "euclidean.json")])
    assert code == 0
    assert json.loads(out)["verdict"] == "PASS"
