import json
import os
import subprocess

import pytest

import bigjumps as bj


def test_krho_uniform():
    r = bj.krho(rho=1.5, k=2, tol=1e-8)
    assert r.method == "grid"
    assert abs(r.value - 0.5) < 1e-8
    assert not r.diverged


def test_krho_scheme_k1_is_h():
    spec = bj.SchemeSpec.truncated_pareto(1.5, 1.5)
    r = bj.krho(rho=0.5, k=1, spec=spec)
    assert r.value == pytest.approx(bj.h_eval(spec, 0.5), rel=0, abs=0)
    assert r.value == pytest.approx(1.5 * 0.5 ** -2.5)


def test_exact_dp_small_case():
    spec = bj.SchemeSpec.discrete_grid([0.5, 0.25, 0.25])
    assert bj.exact_dp(spec, 2, 2.0, 2.0) == pytest.approx(5 / 16, abs=1e-15)


def test_naive_matches_exact():
    spec = bj.SchemeSpec.discrete_grid([0.3, 0.4, 0.2, 0.1])
    exact = bj.exact_dp(spec, 8, 4.0, 8.0)
    est = bj.estimate_naive(spec, 8, 4.0, 8.0, samples=200_000, seed=3)
    assert abs(est["prob"] - exact) < 4 * est["std_error"]


def test_sums_reproducible_and_in_range():
    spec = bj.SchemeSpec.truncated_pareto(1.5, 1.5)
    a = bj.sample_sums(spec, 32, 1000, seed=9)
    b = bj.sample_sums(spec, 32, 1000, seed=9, workers=3)
    assert a == b
    assert all(0 <= s <= 32 * 32 for s in a)


def test_graph_conservation():
    g = bj.generate_graph(2, 6, 3.0, 4)
    assert sum(g["out_degrees"]) == sum(g["in_degrees"]) == g["edge_count"]
    assert min(g["out_degrees"]) >= 4


def test_rhs_example():
    assert bj.theorem1_rhs(100, 2, 1.5, 0.1, 0.5) == pytest.approx(2.475e-4, rel=1e-12)


@pytest.mark.skipif("BIGJUMPS_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_krho(tmp_path):
    out = subprocess.run(
        [os.environ["BIGJUMPS_CLI"], "krho", "--h", "uniform", "--rho", "1.5", "--k", "2", "--tol", "1e-6"],
        capture_output=True, text=True, check=True,
    )
    assert abs(json.loads(out.stdout)["value"] - 0.5) < 1e-6
