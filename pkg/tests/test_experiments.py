import math

import numpy as np
import pytest

from walkmod import ConnectingFamily, SolverConfig, solve_modulus
from walkmod import experiments as ex
from walkmod.errors import Disconnected, InvalidProbability, NTooSmall
from walkmod.generators import gen_choked, gen_gnp, gnp_probability_range, house, sample_connected_gnp


def test_choked_sizes():
    assert gen_choked(10).m == 37
    g = gen_choked(4)
    assert g.m == 4 and g.degree(g.index("4")) == 1 and g.has_edge(g.index("1"), g.index("4"))
    with pytest.raises(NTooSmall):
        gen_choked(3)


def test_gnp_complete():
    g = gen_gnp(6, 1.0, seed=1)
    assert g.m == 15


def test_gnp_sparse_is_disconnected():
    with pytest.raises(Disconnected):
        gen_gnp(30, 1e-6, seed=0)


@pytest.mark.parametrize("p", [0.0, -0.5, 1.5])
def test_gnp_bad_probability(p):
    with pytest.raises(InvalidProbability):
        gen_gnp(5, p, seed=0)


def test_gnp_seeded():
    assert gen_gnp(12, 0.5, seed=4).edges == gen_gnp(12, 0.5, seed=4).edges


def test_gnp_connected_at_half():
    connected = 0
    for seed in range(100):
        try:
            gen_gnp(23, 0.5, seed)
            connected += 1
        except Disconnected:
            pass
    assert connected >= 95


def test_sample_connected_counts_draws():
    g, draws = sample_connected_gnp(10, 0.3, np.random.default_rng(0))
    assert g.is_connected and draws >= 1


def test_probability_range():
    lo, hi = gnp_probability_range(23)
    assert lo == pytest.approx(2 * math.log(23) / 23) and hi == 1.0
    assert all(0 < gnp_probability_range(n)[0] < 1 for n in range(2, 200))


def test_choked_table_small():
    rows = ex.run_choked_table([4, 10], 1e-2)
    assert [r["N"] for r in rows] == [4, 10]
    assert rows[0]["mod_gamma"] == pytest.approx(0.6, abs=1e-12)
    assert rows[1]["mod_gamma"] == pytest.approx(9 / 11, abs=1e-12)
    for r in rows:
        assert r["num_walks"] <= 2 * r["N"]
        assert abs(r["mod_gamma_prime"] - r["mod_gamma"]) / r["mod_gamma"] <= 1e-2
        assert r["value_error_bound"] == 1e-2 and r["status"] == "Converged"


def test_gnp_sweep_triangle_scale():
    rows = ex.run_gnp_sweep(3, 10, 1e-2, seed=3)
    assert all(r["num_walks"] <= 2 and r["status"] == "Converged" for r in rows)
    assert [r["sample"] for r in rows] == list(range(10))


def test_gnp_sweep_independent_of_jobs():
    a = ex.rows_to_csv(ex.run_gnp_sweep(9, 6, 1e-2, seed=2), ex.GNP_COLUMNS)
    b = ex.rows_to_csv(ex.run_gnp_sweep(9, 6, 1e-2, seed=2, jobs=2), ex.GNP_COLUMNS)
    assert a == b
    assert a.splitlines()[0] == ",".join(ex.GNP_COLUMNS)


def test_gnp_sweep_rows_reproduce():
    row = ex.run_gnp_sweep(10, 3, 1e-2, seed=5)[2]
    rng = np.random.default_rng([5, 2])
    lo, hi = gnp_probability_range(10)
    assert row["p_edge"] == float(rng.uniform(lo, hi))
    g, _ = sample_connected_gnp(10, row["p_edge"], rng)
    res = solve_modulus(g, ConnectingFamily(g, {0}, {1}), SolverConfig(eps_tol=1e-2))
    assert row["num_edges"] == g.m and row["modulus"] == res.modulus


def test_gnp_sweep_arguments():
    with pytest.raises(NTooSmall):
        ex.run_gnp_sweep(2, 1)
    with pytest.raises(ValueError):
        ex.run_gnp_sweep(5, 0)


def test_path_count_triangle():
    est = ex.expected_simple_paths_lower_bound(3, 1.0)
    assert math.exp(est.log_exact) == pytest.approx(2.0)
    assert est.log_exact >= est.log_bound


def test_path_count_direct_sum():
    n, p = 9, 0.4
    total = sum(math.factorial(n - 2) / math.factorial(n - k - 1) * p**k for k in range(1, n))
    assert ex.expected_simple_paths_lower_bound(n, p).log_exact == pytest.approx(math.log(total), rel=1e-12)


def test_path_count_arguments():
    with pytest.raises(InvalidProbability):
        ex.expected_simple_paths_lower_bound(5, 0.0)
    with pytest.raises(NTooSmall):
        ex.expected_simple_paths_lower_bound(2, 0.5)


def test_via_demo_house():
    g = house()
    summary, rows = ex.run_via_demo(g, g.indices(["4"]), g.index("5"), g.indices(["3"]), 1e-3)
    assert summary["status"] == "Converged"
    assert len(rows) == g.m
    assert max(r["relative_weight"] for r in rows) == 1.0
    assert {r["band"] for r in rows} <= {"high", "mid", "low"}
    for r in rows:
        rel = r["relative_weight"]
        assert r["band"] == ("high" if rel >= 0.75 else "mid" if rel >= 0.25 else "low")


def test_house_demo():
    out = ex.run_house_demo()
    assert out["modulus"] == pytest.approx(11 / 6, rel=1e-6)
    assert len(out["beurling_subfamily"]) == 3


def test_csv_format():
    text = ex.rows_to_csv([{"a": 1, "b": 0.1}], ["a", "b"])
    assert text == "a,b\n1,0.1\n"


def test_run_experiment_dispatch():
    text = ex.run_experiment(ex.ExperimentSpec("choked-table", {"N": [4]}))
    assert text.splitlines()[0] == ",".join(ex.CHOKED_COLUMNS)
    with pytest.raises(ValueError):
        ex.run_experiment(ex.ExperimentSpec("fig7"))
