import json
import math

import pytest

ampdist = pytest.importorskip("ampdist")


def test_selftest_passes():
    assert ampdist.selftest()["pass"]


def test_choose_k_and_tail():
    assert ampdist.choose_k(0.9, 0.1) == 27
    k = 5
    brute = sum(math.comb(k, j) * 0.7**j * 0.3 ** (k - j) for j in range(3, k + 1))
    assert ampdist.binomial_tail(k, 0.7, 3) == pytest.approx(brute, abs=1e-12)


def test_walsh_of_weight_four_fixture():
    spectrum = ampdist.walsh_spectrum("1001000000010010")
    assert spectrum[0] == pytest.approx(0.5)
    assert sum(c * c for c in spectrum) == pytest.approx(1.0)
    bent = "".join(str(((x & 1) & (x >> 1) ^ ((x >> 2) & (x >> 3))) & 1) for x in range(16))
    assert ampdist.nonlinearity_value(bent) == pytest.approx(0.375)


def test_filters():
    heavy = ampdist.profil([5, 1, 1, 1], 0.5, 0.25, 0.1, seed=3)
    assert heavy["truth"] == "yes"
    assert heavy["exact_success_prob"] >= 0.9
    neg = ampdist.ampfil([-0.9, 0.25, 0.25, 0.25], 0.8, 0.2, 0.1, mode="signed")
    assert neg["truth"] == "yes"
    assert neg["exact_success_prob"] >= 0.9


def test_kdistinctness():
    r = ampdist.kdistinctness([1, 1, 2, 3], 2)
    assert r["truth"] is True
    assert r["exact_success_prob"] >= 0.9


def test_run_matches_cli_report_shape(tmp_path):
    path = tmp_path / "w.json"
    path.write_text(json.dumps([5, 1, 1, 1]))
    a = ampdist.run("mode", input=str(path), gap=0.5, delta=0.1, seed=4, trials=3, parallel=2)
    b = ampdist.run("mode", input=str(path), gap=0.5, delta=0.1, seed=4, trials=3)
    assert a["trials"] == b["trials"]
    assert a["trials"][0]["true_mode"] == 0
    assert a["summary"]["trials"] == 3


def test_errors_map_to_exceptions(tmp_path):
    with pytest.raises(ampdist.ConfigError):
        ampdist.run("profil", input="w.json", tau=0.4, eps=0.5, delta=0.1)
    with pytest.raises(ampdist.ConfigError):
        ampdist.run("qae", m=3, bogus=1)
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2")
    with pytest.raises(ampdist.ParseError):
        ampdist.run("kdist", input=str(bad), k=2)
    with pytest.raises(ampdist.BudgetExceeded):
        ampdist.run("biased-aa", n=3, p=0.9, good=[5], **{"lambda": 0.125}, delta=0.1, engine="full")
    with pytest.raises(ValueError):
        ampdist.walsh_spectrum("012")
