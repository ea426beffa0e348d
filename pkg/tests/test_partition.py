import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cxact.partition import (
    GeneralExpr,
    Linear,
    PartitionedActivation,
    PartitionError,
    ScaledShiftedExp,
    elu,
    heaviside,
    lrelu,
    selu,
)
from oracles import selu_neg


def three_piece():
    return PartitionedActivation([-1.0, 1.0], [Linear(0.0), Linear(1.0), Linear(0.0, 1.0)], name="clip3")


def test_lrelu_values():
    f = lrelu(0.2)
    assert f.eval_real(-2.0) == pytest.approx(-0.4, abs=1e-15)
    assert f.eval_real(0.0) == 0.0
    assert f.eval_real(3.0) == 3.0


def test_selu_values():
    f = selu()
    assert f.eval_real(1.0) == pytest.approx(1.0507, abs=1e-15)
    assert f.eval_real(-1.0) == pytest.approx(selu_neg(-1.0), rel=1e-14)
    assert f.eval_real(-1.0) == pytest.approx(-1.1113275400111318, rel=1e-14)


def test_elu_is_selu_with_unit_scale():
    x = np.linspace(-3, 3, 61)
    np.testing.assert_allclose(elu(1.3).eval_real(x), np.where(x < 0, 1.3 * np.expm1(x), x))


def test_boundary_owned_by_right_piece():
    f = PartitionedActivation([0.0], [Linear(0.0, -1.0), Linear(0.0, 1.0)])
    assert f.eval_real(0.0) == 1.0
    assert f.eval_real(-1e-300) == -1.0
    g = three_piece()
    assert g.eval_real(-1.0) == -1.0
    assert g.eval_real(1.0) == 1.0
    assert g.cell(1.0) == 2 and g.cell(0.999) == 1


def test_heaviside_convention():
    assert heaviside(0.0) == 1.0
    assert heaviside(-1e-300) == 0.0


def test_indicators_single_boundary():
    ind = lrelu().heaviside_coefficients()
    assert [i.piece for i in ind] == [0, 1]
    assert ind[0].expanded() == (1, [(-1, 0)])
    assert ind[1].expanded() == (0, [(1, 0)])


def test_indicators_unpartitioned():
    f = PartitionedActivation([], [Linear(2.0)])
    ind = f.heaviside_coefficients()
    assert len(ind) == 1 and ind[0].expanded() == (1, [])
    assert f.eval_real(-3.0) == -6.0


def test_indicators_middle_piece():
    f = three_piece()
    ind = f.heaviside_coefficients()
    assert ind[1].expanded() == (0, [(1, 0), (-1, 1)])
    assert ind[2].expanded() == (0, [(1, 1)])
    mid = ind[1]
    assert mid(0.0, f.boundaries) == 1
    assert mid(2.0, f.boundaries) == 0
    assert mid(-2.0, f.boundaries) == 0


def test_indicators_match_cell_membership_on_grid():
    f = PartitionedActivation([-2.0, -0.5, 0.0, 1.5], [Linear(k) for k in range(5)])
    x = np.linspace(-4, 4, 8001)
    cells = np.array([f.cell(v) for v in x])
    for ind in f.heaviside_coefficients():
        np.testing.assert_array_equal(ind(x, f.boundaries), (cells == ind.piece).astype(float))


@pytest.mark.parametrize("pa", [lrelu(0.2), selu(), three_piece()], ids=["lrelu", "selu", "clip3"])
def test_partition_of_unity_and_reconstruction(pa):
    rng = np.random.default_rng(3)
    x = rng.uniform(-5, 5, 1000)
    x = x[~np.isin(x, pa.boundaries)]
    inds = np.array([ind(x, pa.boundaries) for ind in pa.heaviside_coefficients()])
    assert np.all(inds.sum(axis=0) == 1)
    assert np.all((inds == 1).sum(axis=0) == 1)
    assert np.array_equal(pa.reconstruct(x), pa.eval_real(x))


@given(st.lists(st.floats(-10, 10, allow_nan=False), min_size=1, max_size=6, unique=True), st.floats(-20, 20))
def test_reconstruction_any_partition(bounds, x):
    bounds = sorted(bounds)
    pa = PartitionedActivation(bounds, [Linear(float(k), -float(k)) for k in range(len(bounds) + 1)])
    assert pa.reconstruct(x) == pa.eval_real(x)


def test_local_functions_real_on_real_axis():
    x = np.linspace(-3, 3, 13)
    for piece in (Linear(0.3, -1.0), ScaledShiftedExp(1.7)):
        assert piece.holomorphic
        assert np.all(piece(x).imag == 0)


def test_general_expr_declared_holomorphy():
    g = GeneralExpr(np.sin, holomorphic=True, name="sin", deriv=np.cos)
    assert g.holomorphic
    assert g.derivative(0.0) == 1
    h = GeneralExpr(np.conj, holomorphic=False)
    with pytest.raises(NotImplementedError):
        h.derivative(1.0)


@pytest.mark.parametrize(
    "bounds, pieces",
    [([1.0, 0.0], 3), ([0.0, 0.0], 3), ([0.0], 1), ([], 2), ([float("nan")], 2)],
)
def test_validation(bounds, pieces):
    with pytest.raises(PartitionError):
        PartitionedActivation(bounds, [Linear(1.0)] * pieces)


def test_immutable():
    f = lrelu()
    with pytest.raises(AttributeError):
        f.name = "x"


def test_json_round_trip(tmp_path):
    src = {
        "boundaries": [-1.0, 1.0],
        "pieces": [
            {"kind": "linear", "slope": 0.0, "intercept": 0.0},
            {"kind": "linear", "slope": 1.0},
            {"kind": "scaled_exp", "lambda": 1.0507, "alpha": 1.67326},
        ],
    }
    path = tmp_path / "p.json"
    path.write_text(json.dumps(src))
    pa = PartitionedActivation.load(path)
    assert pa.boundaries == (-1.0, 1.0)
    assert pa.pieces[2] == ScaledShiftedExp(1.0507 * 1.67326)
    again = PartitionedActivation.from_json(json.dumps(pa.to_json()))
    assert again == pa


@pytest.mark.parametrize(
    "text",
    [
        "{not json",
        "[]",
        '{"boundaries": [0]}',
        '{"boundaries": [1, 0], "pieces": [{"kind": "linear", "slope": 1}, {"kind": "linear", "slope": 1}, {"kind": "linear", "slope": 1}]}',
        '{"boundaries": [0], "pieces": [{"kind": "linear", "slope": 1}]}',
        '{"boundaries": [0], "pieces": [{"kind": "tanh"}, {"kind": "linear", "slope": 1}]}',
        '{"boundaries": [0], "pieces": [{"kind": "linear"}, {"kind": "linear", "slope": 1}]}',
    ],
)
def test_json_errors(text):
    with pytest.raises(PartitionError):
        PartitionedActivation.from_json(text)
