import math

import numpy as np
import pytest

from nwidth import (
    Eigenpair,
    Interval,
    Kernel,
    NumericalError,
    ValidationError,
    assemble,
    build_grid,
    eigenfunction_dump,
    extract_knots,
    top_eigenpairs,
)

UNIT = Interval(0.0, 1.0)


def pairs_for(r, m, count, interval=UNIT):
    system = assemble(Kernel(r, interval), build_grid(interval, m))
    return system.grid, top_eigenpairs(system, count)


def synthetic_pair(index, samples):
    return Eigenpair(index=index, value=1.0, vector=np.asarray(samples, dtype=float))


def test_rank_one_has_no_zeros():
    for r in (1, 2, 3):
        grid, pairs = pairs_for(r, 120, 1)
        report = extract_knots(pairs[0], grid, r=r)
        assert report.zeros.size == 0
        assert report.eigen_rank == 1


def test_r1_rank2_zero_at_midpoint_between_nodes():
    # m even: 0.5 falls between grid nodes
    grid, pairs = pairs_for(1, 200, 2)
    report = extract_knots(pairs[1], grid, r=1)
    np.testing.assert_allclose(report.zeros, [0.5], atol=1e-9)


def test_r1_rank2_zero_exactly_on_a_node():
    # m odd: 0.5 is a grid node, exercising the vanishing-sample bracket
    grid, pairs = pairs_for(1, 201, 2)
    report = extract_knots(pairs[1], grid, r=1)
    np.testing.assert_allclose(report.zeros, [0.5], atol=1e-9)


def test_r1_zeros_match_uniform_partition():
    grid, pairs = pairs_for(1, 256, 5)
    for k in (2, 3, 4, 5):
        report = extract_knots(pairs[k - 1], grid, r=1)
        expected = np.array([j / k for j in range(1, k)])
        np.testing.assert_allclose(report.zeros, expected, atol=1e-8)


def test_zero_count_is_rank_minus_one():
    for r in (1, 2, 3):
        grid, pairs = pairs_for(r, 300, 6)
        for k in range(1, 7):
            report = extract_knots(pairs[k - 1], grid, r=r)
            assert report.zeros.size == k - 1
            assert np.all(report.zeros > grid.nodes[0])
            assert np.all(report.zeros < grid.nodes[-1])
            assert np.all(np.diff(report.zeros) > 0)


def test_zeros_symmetric_about_midpoint():
    iv = Interval(-1.0, 1.0)
    grid, pairs = pairs_for(2, 300, 4, interval=iv)
    report = extract_knots(pairs[3], grid, r=2)
    assert report.zeros.size == 3
    np.testing.assert_allclose(report.zeros, -report.zeros[::-1], atol=1e-8)


def test_mesh_halving_stability():
    zs = []
    for m in (200, 401):
        grid, pairs = pairs_for(3, m, 3)
        zs.append(extract_knots(pairs[2], grid, r=3).zeros)
    np.testing.assert_allclose(zs[0], zs[1], atol=1e-6)


def test_default_tolerance_scales_with_span():
    iv = Interval(-1.0, 1.0)
    grid, pairs = pairs_for(1, 64, 2, interval=iv)
    report = extract_knots(pairs[1], grid, r=1)
    assert report.refinement_tol == pytest.approx(2e-10, rel=1e-12)


def test_consecutive_vanishing_samples_rejected():
    grid = build_grid(UNIT, 5)
    pair = synthetic_pair(2, [0.5, 1e-13, 1e-13, -0.5, -1.0])
    with pytest.raises(NumericalError):
        extract_knots(pair, grid, r=1)


def test_vanishing_sample_without_sign_change_rejected():
    grid = build_grid(UNIT, 5)
    pair = synthetic_pair(2, [0.5, 1.0, 1e-13, 0.5, 1.0])
    with pytest.raises(NumericalError):
        extract_knots(pair, grid, r=1)


def test_sign_change_count_mismatch_rejected():
    grid, pairs = pairs_for(1, 100, 3)
    wrong_rank = Eigenpair(index=5, value=pairs[2].value, vector=pairs[2].vector)
    with pytest.raises(NumericalError):
        extract_knots(wrong_rank, grid, r=1)


def test_colliding_zeros_rejected_for_huge_tolerance():
    grid, pairs = pairs_for(1, 100, 3)
    with pytest.raises(NumericalError):
        extract_knots(pairs[2], grid, tol=0.4, r=1)


def test_tolerance_must_be_positive():
    grid, pairs = pairs_for(1, 50, 1)
    with pytest.raises(ValidationError):
        extract_knots(pairs[0], grid, tol=0.0, r=1)


def test_eigenfunction_dump_single_node(tmp_path):
    grid, pairs = pairs_for(1, 1, 1)
    path = tmp_path / "curve.csv"
    eigenfunction_dump(pairs[0], grid, path)
    lines = path.read_text().strip().split("\n")
    assert lines[0] == "x,phi"
    data = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    np.testing.assert_allclose(data, [[0.0, 0.0], [0.5, 1.0], [1.0, 0.0]])


def test_eigenfunction_dump_r1_is_sine(tmp_path):
    grid, pairs = pairs_for(1, 255, 1)
    path = tmp_path / "curve.csv"
    eigenfunction_dump(pairs[0], grid, path)
    rows = np.loadtxt(path, delimiter=",", skiprows=1)
    assert rows.shape == (257, 2)
    np.testing.assert_allclose(rows[:, 1], np.sin(math.pi * rows[:, 0]), atol=1e-4)
