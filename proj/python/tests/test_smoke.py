import math

import pytest

import tomorisk as tr


def hand_risk_z(h):
    # Truth (0, 1), N = 4: n_z = 4 always, n_x ~ Binomial(4, 1/2).
    total = 0.0
    for nx in range(5):
        p = math.comb(4, nx) / 16
        fx, fz = (2 * nx - 4) / 4, 1.0
        norm = math.hypot(fx, fz)
        scale = math.sqrt(1 - h) / norm if norm >= 1 else 1.0
        ex, ez = fx * scale, fz * scale
        total += p * 0.5 * (ex**2 + (ez - 1) ** 2)
    return total


def test_default_h():
    assert tr.default_h(4) == pytest.approx(0.1875, abs=1e-15)


def test_estimates():
    assert tr.estimate([2, 4], "cls") == pytest.approx([0.0, 1.0])
    x, z = tr.estimate([4, 4], "hedged")
    assert math.hypot(x, z) == pytest.approx(math.sqrt(1 - 0.1875))
    assert tr.estimate([3, 2], "mle") == pytest.approx([0.5, 0.0])


def test_risk_matches_hand_enumeration():
    assert tr.risk([0, 1], "cls") == pytest.approx(hand_risk_z(0.0), abs=1e-12)
    assert tr.risk([0, 1], "hedged") == pytest.approx(hand_risk_z(0.1875), abs=1e-12)
    diff = tr.scaled_difference([0, 1], "cls", "hedged")
    assert diff == pytest.approx(4 * (hand_risk_z(0.0) - hand_risk_z(0.1875)), abs=1e-12)


def test_relative_entropy_divergence():
    assert math.isinf(tr.risk([0, 0.5], "cls", loss="relent"))
    assert math.isfinite(tr.risk([0, 0.5], "hedged", loss="relent"))
    with pytest.raises(tr.UndefinedDifference):
        tr.scaled_difference([0, 0.5], "cls", "hedged", loss="relent")


def test_sweep_and_scan():
    rows = tr.sweep([0, 0, 1], [0.0, 0.5, 1.0], n=10)
    assert [r["r"] for r in rows] == [0.0, 0.5, 1.0]
    assert all(r["scaled_diff"] > 0 for r in rows)
    scan = tr.hedge_scan([0, 1], [0.1, 0.1875, 0.3])
    assert [h for h, _ in scan] == [0.1, 0.1875, 0.3]
    assert scan[1][1] == pytest.approx(hand_risk_z(0.1875), abs=1e-12)


def test_losses():
    assert tr.loss("hs", [0, 1], [0, 1]) == 0.0
    assert tr.loss("hs", [0, 1], [0, -1]) == pytest.approx(2.0)
    assert tr.loss("infid", [0, 0], [0, 1]) == pytest.approx(1 - math.sqrt(0.5))


def test_bayes():
    out = tr.bayes_estimate([[0, 1]], [1.0], loss="infid")
    assert out["certificate"] == "pure"
    assert out["estimate"] == pytest.approx([0.0, 1.0])
    out = tr.bayes_estimate([[0, 0], [0, 1]], [0.5, 0.5], counts=[2, 4], loss="hs")
    assert out["posterior_mean"][1] > 0.5


def test_errors():
    with pytest.raises(tr.InvalidState):
        tr.risk([1, 1])
    with pytest.raises(tr.InvalidParameter):
        tr.estimate([2, 2], "nope")
    with pytest.raises(tr.InvalidDataset):
        tr.estimate([5, 2], "cls")
    assert issubclass(tr.InvalidState, ValueError)
