# Copyright 2026 The queuegrad Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
import pathlib

import numpy as np
import pytest

import queuegrad as qg

DATA = pathlib.Path(__file__).resolve().parents[2] / "data"


def test_reference_lp_gamma_and_solve():
    problem = qg.Problem(qg.paper_lp_instance())
    assert problem.select_gamma() == pytest.approx(1 / 257, rel=1e-15)
    trace = problem.solve(iterations=20000)
    assert len(trace) == 20001
    assert trace.algorithm == "new"
    assert trace.g_xbar.shape == (20001, 3)
    assert trace.x.shape == (20001, 4)
    assert np.all(trace.g_xbar[10:] <= 0)
    assert abs(trace.f_xbar[-1] + 86 / 15) < 0.03


def test_reference_qp_with_published_step():
    problem = qg.Problem(qg.paper_qp_instance(), multiplier_bound=50.0)
    trace = problem.solve(step=0.1395, x_init=np.zeros(2), iterations=20000)
    assert abs(trace.f_xbar[-1] + 3.75) < 0.01
    assert np.all(trace.g_xbar[1:, [0, 2]] <= 0)


def test_multiplier_bound_is_fifty():
    problem = qg.Problem(qg.paper_qp_instance())
    assert problem.multiplier_bound(np.zeros(2), -50.0) == 50.0


def test_checks_pass_and_report_names():
    problem = qg.Problem(qg.paper_lp_instance())
    trace = problem.solve(iterations=5000)
    report = problem.check(trace, f_star=-86 / 15)
    assert {r["status"] for r in report} == {"pass"}
    assert "objective_gap_bound" in [r["name"] for r in report]


def test_reference_oracles():
    lp = qg.lp_vertex_solve(qg.paper_lp_instance())
    np.testing.assert_allclose(lp["x_star"], [0.4, 4 / 3, 0, 0], atol=1e-9)
    qp = qg.qp_grid_polish(qg.paper_qp_instance(), 200)
    assert qp["f_star"] == pytest.approx(-3.75, abs=1e-6)


def test_fit_rate_on_power_law():
    t = np.arange(1, 100001, dtype=float)
    fit = qg.fit_rate(t, 2.0 / t, 1e3, 1e5)
    assert fit["slope"] == pytest.approx(-1.0, abs=1e-9)


def test_dual_type_matches_new_on_lp():
    problem = qg.Problem(qg.paper_lp_instance())
    gamma = problem.select_gamma()
    a = problem.solve("new", iterations=2000, step=gamma)
    b = problem.solve("dual-type", iterations=2000, step=1 / (2 * gamma))
    assert np.max(np.abs(a.x - b.x)) <= 1e-12


def test_errors_map_to_python_exceptions():
    with pytest.raises(qg.ParseError):
        qg.parse_problem('{"family": "lp", "c": [1, 2], "A": [[1]], "b": [1],'
                         ' "lower": [0, 0], "upper": [1, 1]}')
    with pytest.raises(qg.ConfigurationError):
        qg.Problem(qg.paper_lp_instance()).solve(iterations=0)
    with pytest.raises(qg.InvalidInput):
        qg.LpSpec(np.ones(2), np.ones((1, 3)), np.ones(1), np.zeros(2), np.ones(2))


def test_random_instances_are_reproducible():
    a = qg.problem_to_json(qg.random_instance("qp", 3, 2, 11))
    b = qg.problem_to_json(qg.random_instance("qp", 3, 2, 11))
    assert a == b
    spec = qg.parse_problem(a)
    assert isinstance(spec, qg.QpSpec)


def test_csv_and_cli(tmp_path, capsys):
    trace = qg.Problem(qg.paper_lp_instance()).solve(iterations=10)
    header = [line for line in trace.to_csv().splitlines() if not line.startswith("#")][0]
    assert header == "t,f_x,f_xbar,g_xbar_1,g_xbar_2,g_xbar_3,q_norm,drift,x_1,x_2,x_3,x_4"
    out = tmp_path / "lp.csv"
    assert qg.main(["solve", str(DATA / "lp_paper.json"), "-T", "100", "-o", str(out)]) == 0
    assert "gamma" in capsys.readouterr().out
    assert out.read_text() == qg.Problem(qg.paper_lp_instance()).solve(iterations=100).to_csv()
