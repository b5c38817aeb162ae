import csv
import random

import pytest

from cubicpd.ideals import monomials_of_degree
from cubicpd.polyring import PolyRing
from cubicpd.stress import (
    CSV_COLUMNS,
    FAMILIES,
    TrialConfig,
    make_ring,
    random_cubic,
    run_trial,
    run_trials,
    write_csv,
    write_generators,
)


def test_dense_cubic_uses_every_monomial():
    R = make_ring(4)
    S = PolyRing("x y")
    f = random_cubic(random.Random(1), S, 1.0)
    assert len(f) == 4 and f.is_homogeneous() and f.total_degree() == 3
    assert random_cubic(random.Random(5), R, 0.3) == random_cubic(random.Random(5), R, 0.3)


def test_sparse_density_expectation():
    R = make_ring(6)
    assert len(monomials_of_degree(R, 3)) == 56
    rng = random.Random(0)
    sizes = [len(random_cubic(rng, R, 0.25)) for _ in range(400)]
    assert 13 <= sum(sizes) / len(sizes) <= 15


def test_config_validation():
    with pytest.raises(ValueError):
        TrialConfig(nvars=3)
    with pytest.raises(ValueError):
        TrialConfig(density=0)
    with pytest.raises(ValueError):
        TrialConfig(char=32001)
    with pytest.raises(ValueError):
        TrialConfig(family="nope")


def test_zero_trials():
    records, violations = run_trials(TrialConfig(trials=0))
    assert records == [] and violations == []


def test_intro_example_injected():
    R = PolyRing("x y a b c")
    rec = run_trial([R("x^3"), R("y^3"), R("x^2*a+x*y*b+y^2*c")])
    assert rec.verdict == "ok" and rec.pd == 5 and rec.ht == 2 and rec.e == 5 and rec.depth == 0


def test_height_one_is_skipped():
    R = make_ring(4)
    x1, x2, x3, x4 = R.gens()
    rec = run_trial([x1 * x2 * x2, x1 * x3 * x3, x1 * x4 * x4])
    assert rec.verdict == "skipped_height" and rec.ht == 1


def test_timeout_is_reported_not_raised():
    R = make_ring(8)
    rng = random.Random(2)
    gens = [random_cubic(rng, R, 1.0) for _ in range(3)]
    rec = run_trial(gens, budget=1e-6)
    assert rec.verdict == "timeout"


def test_csv_and_determinism(tmp_path):
    cfg = TrialConfig(trials=2, seed=7, family="structured")
    a, _ = run_trials(cfg)
    b, _ = run_trials(cfg)
    pa, pb = tmp_path / "a.csv", tmp_path / "b.csv"
    write_csv(a, pa)
    write_csv(b, pb)
    lines = pa.read_text().splitlines()
    assert len(lines) == 3 and lines[0] == ",".join(CSV_COLUMNS)
    strip = lambda p: [row[:-1] for row in csv.reader(p.open())]
    assert strip(pa) == strip(pb)
    assert [r.generators for r in a] == [r.generators for r in b]


def test_seed_column_reproduces_trial():
    cfg = TrialConfig(trials=3, seed=11)
    records, _ = run_trials(cfg)
    R = make_ring(cfg.nvars)
    for r in records:
        gens = FAMILIES["uniform"](random.Random(r.seed), R, cfg.density)
        again = run_trial(gens, seed=r.seed)
        assert (again.ht, again.e, again.pd) == (r.ht, r.e, r.pd)


def test_sidecar_empty_on_clean_run(tmp_path):
    records, violations = run_trials(TrialConfig(trials=2, seed=3))
    assert not violations
    side = tmp_path / "gens.txt"
    assert write_generators(records, side) == 0 and side.read_text() == ""
    assert write_generators(records, side, only_violations=False) == 2
    assert side.read_text().splitlines()[0].startswith("0\tuniform\t")


def test_write_csv_reports_path(tmp_path):
    with pytest.raises(OSError, match="missing"):
        write_csv([], tmp_path / "missing" / "out.csv")


def test_parallel_keeps_order():
    cfg = TrialConfig(trials=4, seed=5, family="structured")
    seq, _ = run_trials(cfg)
    par, _ = run_trials(cfg, jobs=2)
    assert [(r.trial, r.ht, r.e, r.pd) for r in seq] == [(r.trial, r.ht, r.e, r.pd) for r in par]


@pytest.mark.parametrize("family", sorted(f for f in FAMILIES if f != "uniform"))
def test_structured_families_reach_height_two(family):
    records, violations = run_trials(TrialConfig(trials=3, seed=1, family=family))
    assert not violations
    assert all(r.ht == 2 for r in records if r.verdict != "timeout")
