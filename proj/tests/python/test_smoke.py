import math

import pytest

mnms = pytest.importorskip("mnms")

SQRT2 = math.sqrt(2.0)


def test_state_factory_and_entropy():
    bell = mnms.make_state("bell")
    assert bell.qubits == 2
    assert mnms.linear_entropy(bell) == 0.0

    mnms3 = mnms.make_state("mnms3", 1.0 / 16.0)
    assert mnms.linear_entropy(mnms3) == pytest.approx(9.0 / 14.0, abs=1e-15)
    assert mnms.validate(mnms3)["passed"]

    with pytest.raises(Exception):
        mnms.make_state("mnms3", 0.2)


def test_matrix_round_trip():
    rho = mnms.make_state("mems", 0.8)
    again = mnms.state_from_matrix(rho.matrix)
    assert mnms.purity(again) == pytest.approx(mnms.purity(rho), abs=0.0)
    from_json = mnms.state_from_json(rho.to_json())
    assert (from_json.matrix == rho.matrix).all()


def test_chsh_maxima():
    assert mnms.chsh_max_horodecki(mnms.make_state("bell"))["s_value"] == pytest.approx(
        SQRT2, abs=1e-12
    )
    gamma = 0.8
    r = mnms.chsh_max_horodecki(mnms.make_state("mnms2", gamma))
    assert r["s_value"] == pytest.approx(math.sqrt(1 + gamma * gamma), abs=1e-12)


def test_optimizer_matches_exact_maximum():
    rho = mnms.sample_state(2, seed=7, index=3)
    exact = mnms.chsh_max_horodecki(rho)["s_value"]
    optimized = mnms.maximize(rho, "bloch", seed=5)
    assert optimized["s_value"] == pytest.approx(exact, abs=1e-6)


def test_svetlichny_game_values():
    ghz = mnms.make_state("ghz")
    r = mnms.maximize(ghz, "planar", seed=2)
    assert r["converged"]
    assert r["s_value"] == pytest.approx(SQRT2, abs=1e-6)

    settings = mnms.mnms3_optimal_settings(0.0)
    assert mnms.expectation(ghz, settings) == pytest.approx(SQRT2, abs=1e-12)
    win = mnms.quantum_win_exact(ghz, settings)["win_probability"]
    assert win == pytest.approx((2 + SQRT2) / 4, abs=1e-12)


def test_classical_bounds():
    assert mnms.classical_bound(2)["win_probability"] == 0.75
    svet = mnms.classical_bound(3)
    assert svet["win_probability"] == 0.75
    assert svet["bipartitions"] == 3
    assert mnms.enumerate_classical(3, group1=[2])["wins"] == 6
    assert mnms.win_predicate([1, 1], [1, 0])
    assert not mnms.win_predicate([1, 1], [0, 0])


def test_simulation_reproducible():
    bell = mnms.make_state("bell")
    settings = mnms.Settings.planar(
        [[0.0, math.pi / 2], [7 * math.pi / 4, math.pi / 4]]
    )
    a = mnms.simulate_rounds(bell, settings, rounds=20000, seed=11)
    b = mnms.simulate_rounds(bell, settings, rounds=20000, seed=11)
    assert a["wins"] == b["wins"]
    assert a["win_probability"] == pytest.approx((2 + SQRT2) / 4, abs=0.02)


def test_frontier_and_visibility():
    assert mnms.curve_value("mnms2", 0.0) == pytest.approx(SQRT2, abs=1e-15)
    point = mnms.family_point("mnms3", 1.0 / 16.0)
    assert point["e_l"] == pytest.approx(9.0 / 14.0, abs=1e-15)
    assert point["s"] == pytest.approx(1.0, abs=1e-12)

    points = mnms.scan(qubits=2, samples=50, seed=3)
    for p in points:
        bound = (
            mnms.curve_value("mnms2", p["e_l"])
            if p["e_l"] <= 2 / 3
            else mnms.curve_value("planar2", p["e_l"])
        )
        assert p["s"] <= bound + 1e-9

    assert mnms.critical_visibility(mnms.make_state("bell")) == pytest.approx(
        1 / SQRT2, abs=1e-8
    )
