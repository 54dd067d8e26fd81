import dataclasses
import json
import math

import numpy as np
import pytest

from pgfmetrics import (
    check_part1,
    check_part2,
    check_part3,
    check_w1w2_interpolation,
    dirac,
    make_dist,
    random_equal_mean_pair,
    report_to_json,
    sweep,
)
from pgfmetrics.errors import DomainError, UnequalMeans

MIX = make_dist([0.5, 0.0, 0.5])


class TestCheckPart1:
    def test_point_masses(self):
        r = check_part1(dirac(0), dirac(1))
        assert r.lhs == pytest.approx(1.0, abs=1e-12)
        assert r.rhs == pytest.approx(1.0, abs=1e-12)
        assert abs(r.slack) < 1e-12
        assert r.satisfied

    def test_identical(self):
        d = make_dist([0.3, 0.7])
        r = check_part1(d, d)
        assert r.lhs == 0.0 and r.rhs == 0.0 and r.satisfied


class TestCheckPart2:
    def test_hand_values(self):
        r = check_part2(dirac(1), MIX)
        assert r.lhs == pytest.approx(0.5, abs=1e-12)
        assert r.rhs == pytest.approx(1.5, abs=1e-12)
        assert r.satisfied

    def test_identical(self):
        d = make_dist([0.3, 0.4, 0.3])
        r = check_part2(d, d)
        assert r.lhs == 0.0 and r.rhs == 0.0

    def test_unequal_means_rejected(self):
        with pytest.raises(UnequalMeans):
            check_part2(dirac(0), dirac(1))

    def test_random_equal_mean_pairs_accepted(self):
        rng = np.random.default_rng(0)
        for _ in range(300):
            f, g = random_equal_mean_pair(20, rng)
            assert check_part2(f, g).satisfied


class TestCheckPart3:
    def test_hand_ratio(self):
        w = check_part3(dirac(1), MIX, alpha=1.0)
        assert w.w2_squared == pytest.approx(1.0, abs=1e-12)
        assert w.d2_power == pytest.approx(math.sqrt(0.5), abs=1e-12)
        assert w.ratio == pytest.approx(math.sqrt(2.0), abs=1e-9)

    def test_skip_marker_for_identical(self):
        d = make_dist([0.5, 0.5])
        assert check_part3(d, d, alpha=1.0) is None

    def test_unequal_means_rejected(self):
        with pytest.raises(UnequalMeans):
            check_part3(dirac(0), dirac(1), alpha=1.0)

    def test_alpha_validation(self):
        with pytest.raises(DomainError):
            check_part3(dirac(1), MIX, alpha=0.0)


class TestW1W2Interpolation:
    def test_identical(self):
        d = make_dist([0.5, 0.5])
        r = check_w1w2_interpolation(d, d, alpha=1.0)
        assert r.lhs == 0.0 and r.rhs == 0.0 and r.satisfied

    def test_point_masses_alpha_one(self):
        # m_3 = 1, so rhs = 2^(3/2) * (1 + 1) * 1 * 1 = 4 sqrt(2)
        r = check_w1w2_interpolation(dirac(0), dirac(1), alpha=1.0)
        assert r.lhs == pytest.approx(1.0, abs=1e-12)
        assert r.rhs == pytest.approx(4.0 * math.sqrt(2.0), abs=1e-12)
        assert r.satisfied


class TestSweep:
    def test_deterministic_given_seed(self):
        a = sweep("part1", 100, 10, seed=42)
        b = sweep("part1", 100, 10, seed=42)
        fields = [f.name for f in dataclasses.fields(a) if f.name != "elapsed"]
        for name in fields:
            assert getattr(a, name) == getattr(b, name)

    def test_part1_no_violations(self):
        r = sweep("part1", 400, 10, seed=0)
        assert r.violations == 0
        assert r.min_slack >= -1e-9
        assert r.worst_seed is not None

    def test_part2_no_violations(self):
        r = sweep("part2", 300, 12, seed=0)
        assert r.violations == 0

    def test_w1w2_no_violations(self):
        for alpha in (0.5, 1.0, 2.0):
            r = sweep("w1w2", 200, 12, alpha=alpha, seed=0)
            assert r.violations == 0

    def test_part3_reports_ratio_study(self):
        r = sweep("part3", 200, 10, alpha=1.0, seed=0)
        assert r.violations == 0
        assert r.min_slack is None
        assert r.max_ratio is not None and math.isfinite(r.max_ratio)
        assert r.skipped >= 0

    def test_workers_do_not_change_the_report(self):
        seq = sweep("part1", 60, 8, seed=7, workers=1)
        par = sweep("part1", 60, 8, seed=7, workers=2)
        fields = [f.name for f in dataclasses.fields(seq) if f.name != "elapsed"]
        for name in fields:
            assert getattr(seq, name) == getattr(par, name)

    def test_validation(self):
        with pytest.raises(DomainError):
            sweep("nope", 10, 5)
        with pytest.raises(DomainError):
            sweep("part1", 0, 5)
        with pytest.raises(DomainError):
            sweep("w1w2", 10, 5, alpha=None)

    def test_json_round_trip(self):
        r = sweep("part1", 20, 6, seed=1)
        payload = report_to_json(r, include_elapsed=False)
        blob = json.loads(json.dumps(payload))
        assert blob["name"] == "part1"
        assert blob["trials"] == 20
        assert blob["violations"] == 0
        assert blob["elapsed_sec"] is None
        assert "worst_case_seed" in blob and "min_slack" in blob
