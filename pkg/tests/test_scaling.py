import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from infodens.errors import CapacityError, FitError, InputError
from infodens.measures import MeasureSet
from infodens.scaling import (REFERENCE_SLOPES, ScanResult, boson_discrimination, default_setup,
                              figure_series, fit, fit_column, scan)

N = np.array([2.0, 8, 20, 40, 58, 92])


def test_exact_linear():
    res = fit("linear", zip(N, 2 * N))
    assert res.coefficients["c"] == pytest.approx(2, rel=1e-14)
    assert res.r_squared == 1.0


def test_exact_power():
    res = fit("power", zip(N, 3 * N**2))
    assert res.coefficients["a"] == pytest.approx(3, rel=1e-10)
    assert res.coefficients["b"] == pytest.approx(2, rel=1e-10)
    assert res.r_squared == pytest.approx(1, abs=1e-10)


def test_exact_log():
    res = fit("log", zip(N, 1.5 + 0.7 * np.log(N)))
    assert res.coefficients["a"] == pytest.approx(1.5, rel=1e-12)
    assert res.coefficients["b"] == pytest.approx(0.7, rel=1e-12)


def test_r_squared_clipped_for_bad_through_origin_fit():
    res = fit("linear", [(1, 10.0), (2, 10.0), (3, 10.5), (100, 0.1)])
    assert 0.0 <= res.r_squared <= 1.0


@settings(max_examples=50, deadline=None)
@given(c=st.floats(1e-3, 1e4), noise=st.lists(st.floats(-0.2, 0.2), min_size=6, max_size=6))
def test_linear_fit_idempotent(c, noise):
    y = c * N * (1 + np.asarray(noise))
    first = fit("linear", zip(N, y))
    again = fit("linear", zip(N, first.predict(N)))
    assert again.coefficients["c"] == pytest.approx(first.coefficients["c"], rel=1e-12)


@pytest.mark.parametrize("model,points", [
    ("linear", [(1, 1), (2, 2)]),
    ("linear", [(3, 1), (3, 2), (3, 3)]),
    ("power", [(1, 1), (2, -2), (3, 3)]),
    ("log", [(1, 0), (2, 2), (3, 3)]),
    ("cubic", [(1, 1), (2, 2), (3, 3)]),
])
def test_fit_errors(model, points):
    with pytest.raises(FitError):
        fit(model, points)


def test_harmonic_single_row():
    res = scan(default_setup("harmonic"), [2])
    assert len(res.rows) == 1
    assert res.rows[0][1].S_E == pytest.approx(8 * np.pi**3, rel=1e-3)


def test_cluster_rows_ascending_and_order_independent():
    setup = default_setup("cluster")
    a = scan(setup, [40, 8, 20])
    assert [n for n, _ in a.rows] == [8, 20, 40]
    b = scan(setup, [8, 20, 40])
    assert [m for _, m in a.rows] == [m for _, m in b.rows]


@pytest.mark.parametrize("values", [[8, 8, 20], [], [0.5, 2]])
def test_scan_rejects_bad_lists(values):
    with pytest.raises(InputError):
        scan(default_setup("cluster"), values)


def test_capacity_error_names_n():
    with pytest.raises(CapacityError, match="N=5000"):
        scan(default_setup("nucleus"), [5000])


def test_cluster_closed_shells_linear():
    res = scan(default_setup("cluster"), [2, 8, 20, 40, 58, 92])
    lin = fit_column(res, "S_E", "linear")
    assert lin.r_squared >= 0.98
    assert 0.3 <= lin.coefficients["c"] / REFERENCE_SLOPES["cluster"] <= 3


def _synthetic(system, y):
    fields = dict.fromkeys(MeasureSet.FIELDS, 1.0)
    return ScanResult(system, [(n, MeasureSet(**{**fields, "S_E": v})) for n, v in zip(N, y)])


def test_discrimination_on_synthetic_scans():
    fermion = _synthetic("cluster", 140 * N)
    assert boson_discrimination(_synthetic("bosons", 300 * N**0.1), fermion)["distinct"]
    assert not boson_discrimination(_synthetic("bosons", 100 * N), fermion)["distinct"]


def test_figure_series_names():
    assert set(figure_series(_synthetic("cluster", N))) == {"fig1", "fig2"}
    assert set(figure_series(_synthetic("bosons", N))) == {"fig3", "fig4"}
