"""Precision-versus-clustering experiment driver.

An experiment starts from a base graph (generated scale-free or loaded
from an edge list), rewires copies of it to a ladder of clustering
levels, and measures link-prediction precision and score-class separation
for a set of similarity indices over repeated train/test splits.  Results
are returned as records and optionally written as delimited files plus a
provenance sidecar.

Every random draw is seeded from the single ``master_seed`` through a
fixed derivation (purpose code, level index, repetition index), so a plan
always produces byte-identical outputs, regardless of which levels or
methods it contains.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .ba import BaParams, generate_ba
from .edgelist import LoadOptions, load_edge_list
from .evaluate import (
    ScoreDistribution,
    class_separation,
    distribution_rows,
    precision_at_n,
    score_distributions,
    split_edges,
    training_graph,
)
from .graph import Graph, average_clustering
from .predict import PredictorSpec, ScoreTable, score_all
from .rewire import RewireConfig, rewire_to_target

# Seed-derivation purpose codes (spawn_key = (purpose, level index, repeat)).
_SEED_GENERATE = 0
_SEED_REWIRE = 1
_SEED_SPLIT = 2
_SEED_NEGSAMPLE = 3

TRIALS_FILE = "trials.csv"
REPORT_FILE = "report.csv"
PROVENANCE_FILE = "provenance.json"

# Score-class distributions are exported for these indices at every level
# (first trial's split), with bin widths suited to each score scale.
_DIST_BINS = {"cn": 1.0, "ra": 0.05}

_DEFAULT_METHODS = (
    PredictorSpec(kind="cn"),
    PredictorSpec(kind="aa"),
    PredictorSpec(kind="ra"),
    PredictorSpec(kind="srw"),
)


def derive_seed(master_seed: int, purpose: int, level: int, repeat: int) -> int:
    """Derived seed for one (purpose, level, repeat) slot.

    Uses a seed sequence spawned off the master seed, so slots are
    statistically independent and adding levels, trials, or methods never
    shifts the seeds of existing slots.
    """
    ss = np.random.SeedSequence(master_seed, spawn_key=(purpose, level, repeat))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def parse_method_token(token: str) -> PredictorSpec:
    """Parse a method token like ``cn``, ``srw:4``, ``katz:0.005``, ``pr:0.1``."""
    parts = token.split(":")
    kind = parts[0]
    if kind in ("cn", "aa", "ra"):
        if len(parts) > 1:
            raise ValueError(f"method {kind} takes no parameter: {token!r}")
        return PredictorSpec(kind=kind)
    if kind == "srw":
        if len(parts) == 1:
            return PredictorSpec(kind="srw")
        if len(parts) == 2:
            try:
                steps = int(parts[1])
            except ValueError:
                raise ValueError(f"srw step count must be an integer: {token!r}") from None
            return PredictorSpec(kind="srw", steps=steps)
        raise ValueError(f"malformed method token {token!r}")
    if kind in ("katz", "pr"):
        if len(parts) == 2:
            try:
                beta = float(parts[1])
            except ValueError:
                raise ValueError(f"{kind} beta must be a number: {token!r}") from None
            return PredictorSpec(kind=kind, beta=beta)
        raise ValueError(f"method {kind} needs a beta, e.g. {kind}:0.01")
    raise ValueError(f"unknown method {kind!r}")


def method_token(spec: PredictorSpec) -> str:
    if spec.kind in ("katz", "pr"):
        return f"{spec.kind}:{spec.beta:g}"
    if spec.kind == "srw":
        return f"srw:{spec.steps}"
    return spec.kind


@dataclass(frozen=True)
class ExperimentPlan:
    """Everything needed to run one experiment, suitable for a flat file.

    ``targets`` are the clustering levels to rewire to; the unrewired base
    graph is always measured as level "base" in addition.  ``trials``
    train/test splits are evaluated per level, spread round-robin over
    ``chains`` independently seeded rewiring runs, which separates split
    noise from rewiring-path noise.
    """

    source: str = "ba"
    n: int = 1000
    m: int = 5
    path: str | None = None
    targets: tuple[float, ...] = ()
    methods: tuple[PredictorSpec, ...] = _DEFAULT_METHODS
    trials: int = 10
    chains: int = 1
    test_fraction: float = 0.1
    master_seed: int = 0
    rule: str = "clustering"
    rewire_tolerance: float = 0.002
    rewire_max_steps: int | None = None
    rewire_stall_limit: int | None = None
    output_dir: str | None = None

    def __post_init__(self) -> None:
        if self.source not in ("ba", "edgelist"):
            raise ValueError("source must be 'ba' or 'edgelist'")
        if self.source == "edgelist" and not self.path:
            raise ValueError("edgelist source requires a path")
        if self.source == "ba" and (self.n < 3 or self.m < 1):
            raise ValueError("ba source requires n >= 3 and m >= 1")
        for t in self.targets:
            if not 0.0 < t < 1.0:
                raise ValueError(f"target clustering {t} outside (0, 1)")
        if any(b <= a for a, b in zip(self.targets, self.targets[1:])):
            raise ValueError("targets must be strictly increasing")
        if not self.methods:
            raise ValueError("at least one method is required")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 1 <= self.chains <= self.trials:
            raise ValueError("chains must be in [1, trials]")
        if not 0.0 < self.test_fraction < 1.0:
            raise ValueError("test_fraction must be in (0, 1)")
        if not 0.0 < self.rewire_tolerance < 1.0:
            raise ValueError("rewire_tolerance must be in (0, 1)")


_INT_KEYS = {"n", "m", "trials", "chains", "master_seed", "rewire_max_steps",
             "rewire_stall_limit"}
_FLOAT_KEYS = {"test_fraction", "rewire_tolerance"}
_STR_KEYS = {"source", "path", "rule", "output_dir"}


def parse_plan(text: str, source: str = "<plan>") -> ExperimentPlan:
    """Parse ``key = value`` plan lines into an :class:`ExperimentPlan`.

    Blank lines and ``#`` comments are ignored.  ``targets`` takes
    whitespace-separated floats, ``methods`` whitespace-separated method
    tokens; the remaining keys are scalars matching the plan fields.
    """
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if not sep or not key or not val:
            raise ValueError(f"{source}:{lineno}: expected 'key = value' ({raw.strip()!r})")
        if key in values:
            raise ValueError(f"{source}:{lineno}: duplicate key {key!r}")
        try:
            if key in _INT_KEYS:
                values[key] = int(val)
            elif key in _FLOAT_KEYS:
                values[key] = float(val)
            elif key in _STR_KEYS:
                values[key] = val
            elif key == "targets":
                values[key] = tuple(float(tok) for tok in val.split())
            elif key == "methods":
                values[key] = tuple(parse_method_token(tok) for tok in val.split())
            else:
                raise ValueError(f"unknown key {key!r}")
        except ValueError as exc:
            raise ValueError(f"{source}:{lineno}: {exc}") from None
    try:
        return ExperimentPlan(**values)  # type: ignore[arg-type]
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{source}: {exc}") from None


@dataclass(frozen=True)
class TrialRecord:
    """One (level, trial, method) measurement, or a flagged failure."""

    level: str
    target_c: float | None
    achieved_c: float
    chain: int
    trial: int
    split_seed: int
    method: str
    params: str
    n_test: int
    hits: float | None
    precision: float | None
    separation: float | None
    flag: str


@dataclass(frozen=True)
class ReportRow:
    """Per (level, method) aggregate over the unflagged trials."""

    level: str
    target_c: float | None
    achieved_c: float
    method: str
    params: str
    trials_ok: int
    flagged: int
    precision_mean: float | None
    precision_sd: float | None
    separation_mean: float | None


@dataclass(frozen=True)
class LevelDistribution:
    """Score-class distribution for one (level, method) on the first split."""

    level: str
    method: str
    dist: ScoreDistribution


@dataclass(frozen=True)
class ExperimentResult:
    plan: ExperimentPlan
    trials: tuple[TrialRecord, ...]
    report: tuple[ReportRow, ...]
    distributions: tuple[LevelDistribution, ...]


def _base_graph(plan: ExperimentPlan) -> Graph:
    if plan.source == "ba":
        seed = derive_seed(plan.master_seed, _SEED_GENERATE, 0, 0)
        return generate_ba(BaParams(n=plan.n, m=plan.m, seed=seed))
    return load_edge_list(plan.path, LoadOptions(drop_isolates=True))


def _aggregate(trials: list[TrialRecord]) -> list[ReportRow]:
    rows: list[ReportRow] = []
    seen: list[tuple[str, str]] = []
    for rec in trials:
        key = (rec.level, rec.method)
        if key not in seen:
            seen.append(key)
    for level, method in seen:
        group = [r for r in trials if (r.level, r.method) == (level, method)]
        ok = [r for r in group if not r.flag]
        precisions = [r.precision for r in ok]
        separations = [r.separation for r in ok if r.separation is not None]
        rows.append(
            ReportRow(
                level=level,
                target_c=group[0].target_c,
                achieved_c=float(np.mean([r.achieved_c for r in group])),
                method=method,
                params=group[0].params,
                trials_ok=len(ok),
                flagged=len(group) - len(ok),
                precision_mean=float(np.mean(precisions)) if precisions else None,
                precision_sd=(
                    float(np.std(precisions, ddof=1)) if len(precisions) > 1 else None
                ),
                separation_mean=(
                    float(np.mean(separations)) if separations else None
                ),
            )
        )
    return rows


def run_experiment(
    plan: ExperimentPlan,
    progress: Callable[[str], None] | None = None,
) -> ExperimentResult:
    """Execute a plan and return per-trial records plus aggregates.

    Rewiring failures (target unreachable or not reached within budget)
    and scoring failures (for example a divergent series) never abort the
    run; the affected rows carry the reason in ``flag`` and are excluded
    from aggregates.
    """
    say = progress if progress is not None else lambda _msg: None
    base = _base_graph(plan)
    base_c = average_clustering(base)
    say(f"base graph: {base.num_nodes} nodes, {base.num_edges} edges, C={base_c:.4f}")

    # Level 0 is the unrewired base; targets follow in plan order.
    levels: list[tuple[str, float | None]] = [("base", None)]
    levels += [(f"{t:g}", t) for t in plan.targets]

    trials: list[TrialRecord] = []
    distributions: list[LevelDistribution] = []
    for level_idx, (label, target) in enumerate(levels):
        graphs: list[tuple[Graph | None, float, str]] = []
        if target is None:
            graphs.append((base, base_c, ""))
        else:
            for chain in range(plan.chains):
                seed = derive_seed(plan.master_seed, _SEED_REWIRE, level_idx, chain)
                cfg = RewireConfig(
                    target_c=target,
                    seed=seed,
                    tolerance=plan.rewire_tolerance,
                    max_steps=plan.rewire_max_steps,
                    stall_limit=plan.rewire_stall_limit,
                    rule=plan.rule,
                )
                try:
                    outcome = rewire_to_target(base, cfg)
                except ValueError as exc:
                    graphs.append((None, base_c, f"rewire: {exc}"))
                    say(f"level {label} chain {chain}: rewire failed ({exc})")
                    continue
                if outcome.reached_target:
                    graphs.append((outcome.graph, outcome.achieved_c, ""))
                else:
                    graphs.append(
                        (
                            None,
                            outcome.achieved_c,
                            f"rewire: stopped at C={outcome.achieved_c:.4f} "
                            f"after {outcome.steps_taken} steps",
                        )
                    )
                say(
                    f"level {label} chain {chain}: C={outcome.achieved_c:.4f} "
                    f"steps={outcome.steps_taken}"
                )
        for trial in range(plan.trials):
            chain = trial % len(graphs)
            graph, achieved, flag = graphs[chain]
            split_seed = derive_seed(plan.master_seed, _SEED_SPLIT, level_idx, trial)
            if graph is None:
                for spec in plan.methods:
                    trials.append(
                        TrialRecord(
                            level=label,
                            target_c=target,
                            achieved_c=achieved,
                            chain=chain,
                            trial=trial,
                            split_seed=split_seed,
                            method=method_token(spec),
                            params=spec.params_label(),
                            n_test=0,
                            hits=None,
                            precision=None,
                            separation=None,
                            flag=flag,
                        )
                    )
                continue
            split = split_edges(graph, seed=split_seed, test_fraction=plan.test_fraction)
            train = training_graph(graph, split)
            dist_tables: dict[str, ScoreTable] = {}
            for spec in plan.methods:
                hits = precision = separation = None
                flag_m = ""
                try:
                    table = score_all(train, spec)
                    if trial == 0 and spec.kind in _DIST_BINS:
                        dist_tables[spec.kind] = table
                    res = precision_at_n(table, split.test_edges)
                    hits, precision = res.hits, res.precision
                    separation = class_separation(table, split.test_edges)
                except ValueError as exc:
                    flag_m = str(exc)
                trials.append(
                    TrialRecord(
                        level=label,
                        target_c=target,
                        achieved_c=achieved,
                        chain=chain,
                        trial=trial,
                        split_seed=split_seed,
                        method=method_token(spec),
                        params=spec.params_label(),
                        n_test=len(split.test_edges),
                        hits=hits,
                        precision=precision,
                        separation=separation,
                        flag=flag_m,
                    )
                )
            if trial == 0:
                # Score-class histograms on the first split of every level.
                sample_seed = derive_seed(
                    plan.master_seed, _SEED_NEGSAMPLE, level_idx, 0
                )
                for kind, bin_width in _DIST_BINS.items():
                    table = dist_tables.get(kind)
                    if table is None:
                        table = score_all(train, PredictorSpec(kind=kind))
                    distributions.append(
                        LevelDistribution(
                            level=label,
                            method=kind,
                            dist=score_distributions(
                                table,
                                split.test_edges,
                                bin_width=bin_width,
                                sample_seed=sample_seed,
                            ),
                        )
                    )
            say(f"level {label} trial {trial}: done")
    return ExperimentResult(
        plan=plan,
        trials=tuple(trials),
        report=tuple(_aggregate(trials)),
        distributions=tuple(distributions),
    )


def _cell(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_outputs(
    result: ExperimentResult, out_dir: str | Path
) -> dict[str, Path | list[Path]]:
    """Write trials.csv, report.csv, distribution CSVs, and provenance.json.

    Outputs are byte-identical for identical plans: floats are written in
    shortest round-trip form and no timestamps or host details are
    recorded.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths: dict[str, Path | list[Path]] = {
        "trials": out / TRIALS_FILE,
        "report": out / REPORT_FILE,
        "provenance": out / PROVENANCE_FILE,
    }
    with open(paths["trials"], "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(
            [
                "level", "target_c", "achieved_c", "chain", "trial", "split_seed",
                "method", "params", "n_test", "hits", "precision", "separation",
                "flag",
            ]
        )
        for r in result.trials:
            w.writerow(
                [
                    r.level, _cell(r.target_c), _cell(r.achieved_c), r.chain,
                    r.trial, r.split_seed, r.method, r.params, r.n_test,
                    _cell(r.hits), _cell(r.precision), _cell(r.separation), r.flag,
                ]
            )
    with open(paths["report"], "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(
            [
                "level", "target_c", "achieved_c", "method", "params", "trials_ok",
                "flagged", "precision_mean", "precision_sd", "separation_mean",
            ]
        )
        for r in result.report:
            w.writerow(
                [
                    r.level, _cell(r.target_c), _cell(r.achieved_c), r.method,
                    r.params, r.trials_ok, r.flagged, _cell(r.precision_mean),
                    _cell(r.precision_sd), _cell(r.separation_mean),
                ]
            )
    dist_paths: list[Path] = []
    for item in result.distributions:
        path = out / f"dist_{item.level}_{item.method}.csv"
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["class", "bin_lo", "bin_hi", "count"])
            for name, lo, hi, count in distribution_rows(item.dist):
                w.writerow([name, _cell(lo), _cell(hi), count])
        dist_paths.append(path)
    paths["distributions"] = dist_paths
    versions: dict[str, str] = {"numpy": np.__version__}
    try:
        import importlib.metadata as _md

        versions["linkclust"] = _md.version("linkclust")
    except Exception:
        versions["linkclust"] = "unknown"
    with open(paths["provenance"], "w") as fh:
        json.dump({"plan": asdict(result.plan), "versions": versions}, fh, indent=2)
        fh.write("\n")
    return paths
