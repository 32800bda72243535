"""Experiment driver: plan parsing, seed derivation, runs, outputs."""

import json

import pytest

from linkclust.experiment import (
    ExperimentPlan,
    derive_seed,
    method_token,
    parse_method_token,
    parse_plan,
    run_experiment,
    write_outputs,
)
from linkclust.predict import PredictorSpec


class TestDeriveSeed:
    def test_deterministic(self):
        assert derive_seed(7, 1, 2, 3) == derive_seed(7, 1, 2, 3)

    def test_slots_independent(self):
        base = derive_seed(7, 1, 2, 3)
        assert derive_seed(7, 0, 2, 3) != base
        assert derive_seed(7, 1, 0, 3) != base
        assert derive_seed(7, 1, 2, 0) != base
        assert derive_seed(8, 1, 2, 3) != base

    def test_uint64_range(self):
        for args in [(0, 0, 0, 0), (2**31, 3, 9, 99)]:
            s = derive_seed(*args)
            assert 0 <= s < 2**64


class TestMethodTokens:
    def test_plain_kinds(self):
        assert parse_method_token("cn") == PredictorSpec(kind="cn")
        assert parse_method_token("aa") == PredictorSpec(kind="aa")
        assert parse_method_token("ra") == PredictorSpec(kind="ra")

    def test_srw_default_and_explicit_steps(self):
        assert parse_method_token("srw") == PredictorSpec(kind="srw")
        assert parse_method_token("srw:4") == PredictorSpec(kind="srw", steps=4)

    def test_parameterised_kinds(self):
        assert parse_method_token("katz:0.005") == PredictorSpec(kind="katz", beta=0.005)
        assert parse_method_token("pr:0.1") == PredictorSpec(kind="pr", beta=0.1)

    def test_round_trip(self):
        for token in ["cn", "aa", "ra", "srw:3", "srw:5", "katz:0.005", "pr:0.5"]:
            assert method_token(parse_method_token(token)) == token

    def test_plain_kind_rejects_parameter(self):
        with pytest.raises(ValueError, match="takes no parameter"):
            parse_method_token("cn:2")

    def test_katz_requires_beta(self):
        with pytest.raises(ValueError, match="needs a beta"):
            parse_method_token("katz")

    def test_bad_beta(self):
        with pytest.raises(ValueError, match="must be a number"):
            parse_method_token("pr:high")

    def test_bad_srw_steps(self):
        with pytest.raises(ValueError, match="integer"):
            parse_method_token("srw:fast")

    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="unknown method"):
            parse_method_token("jaccard")


class TestPlanValidation:
    def test_defaults_valid(self):
        plan = ExperimentPlan()
        assert plan.source == "ba"
        assert plan.trials == 10

    def test_edgelist_requires_path(self):
        with pytest.raises(ValueError, match="path"):
            ExperimentPlan(source="edgelist")

    def test_unknown_source(self):
        with pytest.raises(ValueError, match="source"):
            ExperimentPlan(source="er")

    def test_target_bounds(self):
        with pytest.raises(ValueError, match="outside"):
            ExperimentPlan(targets=(0.5, 1.5))

    def test_targets_strictly_increasing(self):
        with pytest.raises(ValueError, match="strictly increasing"):
            ExperimentPlan(targets=(0.3, 0.3))

    def test_chains_bounded_by_trials(self):
        with pytest.raises(ValueError, match="chains"):
            ExperimentPlan(trials=2, chains=3)

    def test_test_fraction_bounds(self):
        with pytest.raises(ValueError, match="test_fraction"):
            ExperimentPlan(test_fraction=1.0)


class TestParsePlan:
    PLAN = """\
# precision ladder on a small generated graph
source = ba
n = 200
m = 3
targets = 0.15 0.25
methods = cn ra katz:0.01
trials = 4
chains = 2
master_seed = 11
rewire_tolerance = 0.005
"""

    def test_full_plan(self):
        plan = parse_plan(self.PLAN, source="demo.plan")
        assert plan.n == 200
        assert plan.m == 3
        assert plan.targets == (0.15, 0.25)
        assert plan.methods == (
            PredictorSpec(kind="cn"),
            PredictorSpec(kind="ra"),
            PredictorSpec(kind="katz", beta=0.01),
        )
        assert plan.trials == 4
        assert plan.chains == 2
        assert plan.master_seed == 11
        assert plan.rewire_tolerance == 0.005

    def test_missing_equals_sign(self):
        with pytest.raises(ValueError, match=r"p:2: expected 'key = value'"):
            parse_plan("n = 5\ntrials\n", source="p")

    def test_duplicate_key(self):
        with pytest.raises(ValueError, match=r"p:3: duplicate key 'n'"):
            parse_plan("n = 5\nm = 2\nn = 6\n", source="p")

    def test_unknown_key(self):
        with pytest.raises(ValueError, match=r"p:1: unknown key 'foo'"):
            parse_plan("foo = 1\n", source="p")

    def test_bad_integer(self):
        with pytest.raises(ValueError, match="p:1"):
            parse_plan("n = five\n", source="p")

    def test_bad_method_token_line_numbered(self):
        with pytest.raises(ValueError, match=r"p:2: unknown method 'bogus'"):
            parse_plan("n = 50\nmethods = cn bogus\n", source="p")

    def test_construction_error_carries_source(self):
        with pytest.raises(ValueError, match=r"p: trials must be >= 1"):
            parse_plan("trials = 0\n", source="p")

    def test_comments_and_blanks_ignored(self):
        plan = parse_plan("\n# all defaults\n\nn = 300  # inline\n")
        assert plan.n == 300


def small_plan(**overrides):
    kwargs = dict(
        source="ba",
        n=200,
        m=3,
        targets=(0.15,),
        methods=(PredictorSpec(kind="cn"), PredictorSpec(kind="ra")),
        trials=3,
        chains=1,
        master_seed=5,
    )
    kwargs.update(overrides)
    return ExperimentPlan(**kwargs)


class TestRunExperiment:
    def test_record_counts_and_invariants(self):
        result = run_experiment(small_plan())
        # 2 levels x 3 trials x 2 methods
        assert len(result.trials) == 12
        assert len(result.report) == 4
        for rec in result.trials:
            assert rec.flag == ""
            assert rec.n_test > 0
            assert rec.precision == pytest.approx(rec.hits / rec.n_test)
            assert 0.0 <= rec.precision <= 1.0
        levels = {rec.level for rec in result.trials}
        assert levels == {"base", "0.15"}
        for rec in result.trials:
            if rec.level == "0.15":
                assert abs(rec.achieved_c - 0.15) <= 0.002

    def test_distributions_per_level(self):
        result = run_experiment(small_plan())
        keys = {(d.level, d.method) for d in result.distributions}
        assert keys == {
            ("base", "cn"),
            ("base", "ra"),
            ("0.15", "cn"),
            ("0.15", "ra"),
        }
        for d in result.distributions:
            assert d.dist.positive_total > 0
            assert d.dist.negative_total > d.dist.positive_total

    def test_chains_round_robin(self):
        result = run_experiment(small_plan(trials=4, chains=2))
        rewired = [r for r in result.trials if r.level == "0.15"]
        for rec in rewired:
            assert rec.chain == rec.trial % 2
        by_chain = {}
        for rec in rewired:
            by_chain.setdefault(rec.chain, set()).add(rec.achieved_c)
        # each chain is one fixed graph, so one achieved value per chain
        assert all(len(vals) == 1 for vals in by_chain.values())
        assert set(by_chain) == {0, 1}

    def test_aggregates_match_trials(self):
        import numpy as np

        result = run_experiment(small_plan())
        for row in result.report:
            group = [
                r
                for r in result.trials
                if (r.level, r.method) == (row.level, row.method)
            ]
            precisions = [r.precision for r in group if not r.flag]
            assert row.trials_ok == len(precisions)
            assert row.precision_mean == pytest.approx(np.mean(precisions))
            if len(precisions) > 1:
                assert row.precision_sd == pytest.approx(np.std(precisions, ddof=1))

    def test_unreachable_target_flags_rows(self):
        plan = small_plan(
            targets=(0.9,),
            trials=2,
            rewire_stall_limit=2_000,
        )
        result = run_experiment(plan)
        flagged = [r for r in result.trials if r.level == "0.9"]
        assert flagged
        for rec in flagged:
            assert rec.flag.startswith("rewire: stopped at C=")
            assert rec.precision is None
            assert rec.hits is None
        row = next(r for r in result.report if r.level == "0.9")
        assert row.trials_ok == 0
        assert row.flagged == plan.trials
        assert row.precision_mean is None

    def test_divergent_series_flags_only_that_method(self):
        plan = small_plan(
            methods=(PredictorSpec(kind="cn"), PredictorSpec(kind="katz", beta=0.9)),
            trials=2,
            targets=(),
        )
        result = run_experiment(plan)
        katz = [r for r in result.trials if r.method == "katz:0.9"]
        cn = [r for r in result.trials if r.method == "cn"]
        assert all("diverge" in r.flag for r in katz)
        assert all(r.precision is None for r in katz)
        assert all(r.flag == "" and r.precision is not None for r in cn)

    def test_progress_callback_invoked(self):
        messages = []
        run_experiment(small_plan(trials=1, targets=()), progress=messages.append)
        assert any("base graph" in m for m in messages)
        assert any("trial 0: done" in m for m in messages)


class TestWriteOutputs:
    def test_files_and_headers(self, tmp_path):
        result = run_experiment(small_plan())
        paths = write_outputs(result, tmp_path)
        trials_lines = paths["trials"].read_text().splitlines()
        assert trials_lines[0] == (
            "level,target_c,achieved_c,chain,trial,split_seed,"
            "method,params,n_test,hits,precision,separation,flag"
        )
        assert len(trials_lines) == 1 + len(result.trials)
        report_lines = paths["report"].read_text().splitlines()
        assert report_lines[0] == (
            "level,target_c,achieved_c,method,params,trials_ok,"
            "flagged,precision_mean,precision_sd,separation_mean"
        )
        dist_names = sorted(p.name for p in paths["distributions"])
        assert dist_names == [
            "dist_0.15_cn.csv",
            "dist_0.15_ra.csv",
            "dist_base_cn.csv",
            "dist_base_ra.csv",
        ]
        for p in paths["distributions"]:
            lines = p.read_text().splitlines()
            assert lines[0] == "class,bin_lo,bin_hi,count"
            classes = {line.split(",")[0] for line in lines[1:]}
            assert classes == {"positive", "negative"}

    def test_provenance_content(self, tmp_path):
        result = run_experiment(small_plan(trials=1))
        paths = write_outputs(result, tmp_path)
        doc = json.loads(paths["provenance"].read_text())
        assert set(doc) == {"plan", "versions"}
        assert doc["plan"]["n"] == 200
        assert doc["plan"]["master_seed"] == 5
        assert "numpy" in doc["versions"]
        # no wall-clock state: reruns must be byte-identical
        assert "time" not in json.dumps(doc).lower()

    def test_byte_reproducible(self, tmp_path):
        plan = small_plan(trials=2)
        a = write_outputs(run_experiment(plan), tmp_path / "a")
        b = write_outputs(run_experiment(plan), tmp_path / "b")
        for key in ("trials", "report", "provenance"):
            assert a[key].read_bytes() == b[key].read_bytes()
        for pa, pb in zip(a["distributions"], b["distributions"]):
            assert pa.name == pb.name
            assert pa.read_bytes() == pb.read_bytes()
