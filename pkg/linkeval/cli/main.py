"""
linkeval command line.

    uv run linkeval stats --dataset=data/fb237 --versions=v1,v2,v3,v4 --out=out/stats
    uv run linkeval learn_rules --dataset=data/fb237_v1 --out=out/fb237_v1.rules.tsv
    uv run linkeval gen_negatives --dataset=data/fb237_v1 --seed=7 --out=out/fb237_v1.tmn.jsonl
    uv run linkeval evaluate --dataset=data/fb237 --versions=v1,v2,v3,v4 --protocol=random --seed=7
    uv run linkeval compare --reports=out/eval --reference=anyburl --out=out/delta.csv

Flags override ``LINKEVAL_*`` environment variables (``.env`` is honoured),
which override the built-in defaults.
"""
import sys
import uuid
from pathlib import Path
from typing import Iterable, Sequence

import fire
from dotenv import load_dotenv
from tqdm import tqdm

from cli.reports import metrics_table, write_csv, write_json, write_text
from core.config import CONFIG, RunConfig, TieMode
from core.errors import LinkEvalError, UsageError
from evaluation.compare import compare as compare_reports
from evaluation.harness import evaluate as evaluate_model
from evaluation.metrics import MetricReport, average_reports, reports_frame
from evaluation.protocols import RandomSampling, make_protocol
from kg.dataset import DatasetLayout, InductiveDataset, load_dataset
from kg.stats import StatsReport, render_table, stats_frame
from kg.stats import stats as dataset_stats
from log import configure_logging, get_logger, set_run_id
from negatives.io import write_negative_sets
from negatives.sampler import generate_negative_sets
from ranking.baseline import BaselineModel, RandomModel, ScoringModel
from ranking.predictions import PredictionModel
from rules.apply import apply_rules
from rules.io import read_rules, write_rules
from rules.learner import learn_rules as learn_type_rules
from rules.types import TypeRule

logger = get_logger(__name__)


def _as_list(value: str | int | Sequence | None) -> list[str]:
    """Fire hands over ``a,b`` as a tuple and ``a`` as a scalar."""
    if value is None:
        return []
    if isinstance(value, (list, tuple)):
        return [str(v).strip() for v in value if str(v).strip()]
    return [part.strip() for part in str(value).split(",") if part.strip()]


def _ks(value: str | int | Sequence | None) -> list[int]:
    if value is None:
        return [1, 3, 10]
    try:
        ks = sorted({int(k) for k in _as_list(value)})
    except ValueError:
        raise UsageError(f"--k expects integers, got {value!r}") from None
    if not ks or ks[0] < 1:
        raise UsageError(f"--k expects positive integers, got {value!r}")
    return ks


def _dataset_dirs(dataset: str | Sequence | None, versions: str | Sequence | None) -> list[Path]:
    """``--dataset=data/fb237 --versions=v1,v2`` -> data/fb237_v1, data/fb237_v2.

    A ``{version}`` placeholder in the dataset path is substituted instead.
    """
    bases = _as_list(dataset)
    if not bases:
        raise UsageError("--dataset is required")
    found = _as_list(versions)
    if not found:
        return [Path(b) for b in bases]
    dirs = []
    for base in bases:
        for version in found:
            dirs.append(Path(base.format(version=version)) if "{version}" in base else Path(f"{base}_{version}"))
    return dirs


def _fill(template: str, dataset: InductiveDataset) -> Path:
    return Path(template.format(name=dataset.path.name, version=dataset.version))


def _per_version_out(out: str | None, dirs: list[Path], what: str) -> None:
    if out and len(dirs) > 1 and "{name}" not in out and "{version}" not in out:
        raise UsageError(f"--out for several versions needs a {{name}} or {{version}} placeholder ({what})")


def _setup(command: str, json_logs: bool | None) -> None:
    configure_logging(json_logs=CONFIG.json_logs if json_logs is None else bool(json_logs))
    set_run_id(f"{command}-{uuid.uuid4().hex[:8]}")


def _resolve_seed(seed: int | None, required: bool, why: str) -> int | None:
    seed = CONFIG.seed if seed is None else int(seed)
    if seed is None and required:
        raise UsageError(f"{why} requires --seed (or LINKEVAL_SEED)")
    if seed is not None and seed < 0:
        raise UsageError(f"--seed must be non-negative, got {seed}")
    return seed


def _resolve_tie(tie: str | None) -> TieMode:
    value = tie or CONFIG.tie
    if value not in ("average", "pessimistic"):
        raise UsageError(f"--tie must be 'average' or 'pessimistic', got {value!r}")
    return value  # type: ignore[return-value]


def _rules_for(
    dataset: InductiveDataset, rules: str, min_support: int, min_confidence: float, n_jobs: int
) -> list[TypeRule]:
    if rules == "auto":
        return learn_type_rules(dataset.rule_graph, min_support, min_confidence, n_jobs=n_jobs)
    return read_rules(_fill(rules, dataset))


def _model_for(
    source: str,
    dataset: InductiveDataset,
    seed: int | None,
    rules: str,
    min_support: int,
    min_confidence: float,
    n_jobs: int,
) -> ScoringModel:
    match source.split(":", 1):
        case ["baseline"]:
            type_rules = _rules_for(dataset, rules, min_support, min_confidence, n_jobs)
            return BaselineModel(apply_rules(type_rules, dataset.inference_graph))
        case ["random"]:
            assert seed is not None
            return RandomModel(len(dataset.test_graph.graph.entities), seed)
        case ["predictions", template] if template:
            stem = Path(template).stem.replace("{name}", "").replace("{version}", "").strip("_-.")
            return PredictionModel.from_file(_fill(template, dataset), dataset, name=stem or "predictions")
        case _:
            raise UsageError(f"Unknown model: {source}. Use 'baseline', 'random' or 'predictions:<path>'")


class Commands:
    """Type-rule baseline, type-matched negatives and ranking protocols for inductive link prediction."""

    def stats(
        self,
        dataset: str,
        versions: str | None = None,
        layout: str = "single",
        out: str | None = None,
        json_logs: bool | None = None,
    ):
        """Split sizes, entity and relation counts per version, checked against the published table."""
        _setup("stats", json_logs)
        dirs = _dataset_dirs(dataset, versions)
        config = RunConfig(command="stats", datasets=[str(d) for d in dirs], layout=layout, out=out)
        data_layout = DatasetLayout.named(layout)

        reports: list[StatsReport] = []
        for path in tqdm(dirs, desc="versions", disable=len(dirs) < 2):
            report = dataset_stats(load_dataset(path, data_layout))
            report.config = config.as_meta()
            reports.append(report)

        table = render_table(reports)
        print(table)
        if out:
            out_dir = Path(out)
            for report, path in zip(reports, dirs):
                write_json(out_dir / f"{path.name}.stats.json", report, config)
            write_csv(out_dir / "stats.csv", stats_frame(reports), config)
            write_text(out_dir / "stats.txt", table, config)

    def learn_rules(
        self,
        dataset: str,
        out: str,
        versions: str | None = None,
        min_support: int = 1,
        min_confidence: float = 0.0,
        layout: str = "single",
        n_jobs: int | None = None,
        json_logs: bool | None = None,
    ):
        """Learn type rules from the training split of the train graph and write a rule file."""
        _setup("learn_rules", json_logs)
        dirs = _dataset_dirs(dataset, versions)
        _per_version_out(out, dirs, "rule files")
        jobs = CONFIG.n_jobs if n_jobs is None else int(n_jobs)
        config = RunConfig(
            command="learn_rules",
            datasets=[str(d) for d in dirs],
            layout=layout,
            min_support=int(min_support),
            min_confidence=float(min_confidence),
            n_jobs=jobs,
            out=out,
        )
        data_layout = DatasetLayout.named(layout)
        for path in tqdm(dirs, desc="versions", disable=len(dirs) < 2):
            data = load_dataset(path, data_layout)
            rules = learn_type_rules(data.rule_graph, int(min_support), float(min_confidence), n_jobs=jobs)
            target = _fill(out, data)
            write_rules(target, rules, config)
            logger.info(f"{data.label}: wrote {len(rules)} rules to {target}")

    def gen_negatives(
        self,
        dataset: str,
        out: str,
        versions: str | None = None,
        rules: str = "auto",
        num_negatives: int | None = None,
        seed: int | None = None,
        min_support: int = 1,
        min_confidence: float = 0.0,
        layout: str = "single",
        n_jobs: int | None = None,
        json_logs: bool | None = None,
    ):
        """Type-matched negatives for every test triple, written as JSONL."""
        _setup("gen_negatives", json_logs)
        dirs = _dataset_dirs(dataset, versions)
        _per_version_out(out, dirs, "negatives files")
        resolved_seed = _resolve_seed(seed, required=True, why="gen_negatives")
        assert resolved_seed is not None
        n = CONFIG.tmn_negatives if num_negatives is None else int(num_negatives)
        if n < 1:
            raise UsageError(f"--num-negatives must be >= 1, got {n}")
        jobs = CONFIG.n_jobs if n_jobs is None else int(n_jobs)
        config = RunConfig(
            command="gen_negatives",
            datasets=[str(d) for d in dirs],
            layout=layout,
            num_negatives=n,
            seed=resolved_seed,
            rules=rules,
            min_support=int(min_support),
            min_confidence=float(min_confidence),
            n_jobs=jobs,
            out=out,
        )
        data_layout = DatasetLayout.named(layout)
        for path in tqdm(dirs, desc="versions", disable=len(dirs) < 2):
            data = load_dataset(path, data_layout)
            type_rules = _rules_for(data, rules, int(min_support), float(min_confidence), jobs)
            type_scores = apply_rules(type_rules, data.inference_graph)
            sets = generate_negative_sets(data, type_scores, n=n, seed=resolved_seed, n_jobs=jobs)
            write_negative_sets(_fill(out, data), sets, data.test_graph.graph, config)

    def evaluate(
        self,
        dataset: str,
        versions: str | None = None,
        model: str = "baseline",
        protocol: str = "random",
        runs: int | None = None,
        num_negatives: int | None = None,
        tmn_file: str | None = None,
        k: str | int | Sequence | None = None,
        seed: int | None = None,
        rules: str = "auto",
        min_support: int = 1,
        min_confidence: float = 0.0,
        tie: str | None = None,
        resample_known: bool = False,
        layout: str = "single",
        out: str | None = None,
        n_jobs: int | None = None,
        json_logs: bool | None = None,
    ):
        """Hits@k and MRR of a model under one protocol, per version plus the cross-version average."""
        _setup("evaluate", json_logs)
        dirs = _dataset_dirs(dataset, versions)
        ks = _ks(k)
        tie_mode = _resolve_tie(tie)
        jobs = CONFIG.n_jobs if n_jobs is None else int(n_jobs)
        run_count = CONFIG.runs if runs is None else int(runs)
        negatives = CONFIG.num_negatives if num_negatives is None else int(num_negatives)
        if tmn_file and len(dirs) > 1 and "{name}" not in tmn_file and "{version}" not in tmn_file:
            raise UsageError("--tmn-file for several versions needs a {name} or {version} placeholder")
        try:
            selected = make_protocol(protocol, run_count, negatives, tmn_file, bool(resample_known))
        except LinkEvalError as e:
            raise UsageError(str(e)) from e
        needs_seed = isinstance(selected, RandomSampling) or model == "random"
        resolved_seed = _resolve_seed(seed, required=needs_seed, why=f"protocol {protocol} with model {model}")

        config = RunConfig(
            command="evaluate",
            datasets=[str(d) for d in dirs],
            layout=layout,
            protocol=selected.name,
            runs=run_count if isinstance(selected, RandomSampling) else None,
            num_negatives=negatives if isinstance(selected, RandomSampling) else None,
            resample_known=bool(resample_known),
            tmn_file=tmn_file,
            ks=ks,
            seed=resolved_seed,
            model=model,
            rules=rules,
            min_support=int(min_support),
            min_confidence=float(min_confidence),
            tie=tie_mode,
            n_jobs=jobs,
            out=out,
        )
        data_layout = DatasetLayout.named(layout)

        reports: list[MetricReport] = []
        for path in tqdm(dirs, desc="versions", disable=len(dirs) < 2):
            data = load_dataset(path, data_layout)
            scoring = _model_for(model, data, resolved_seed, rules, int(min_support), float(min_confidence), jobs)
            version_protocol = (
                make_protocol(protocol, run_count, negatives, _fill(tmn_file, data), bool(resample_known))
                if tmn_file
                else selected
            )
            report = evaluate_model(scoring, data, version_protocol, ks, resolved_seed, tie_mode, jobs)
            reports.append(report.model_copy(update={"config": config.as_meta()}))

        summary = list(reports)
        if len(reports) > 1:
            summary.append(average_reports(reports).model_copy(update={"config": config.as_meta()}))

        table = metrics_table(summary)
        print(table)
        if out:
            out_dir = Path(out)
            for report in summary:
                name = f"{report.dataset}_{report.version}.{report.model}.{report.protocol}.json"
                write_json(out_dir / name, report, config)
            write_csv(out_dir / "metrics.csv", reports_frame(summary), config)
            write_text(out_dir / "metrics.txt", table, config)

    def compare(
        self,
        reports: str | Sequence,
        reference: str,
        out: str | None = None,
        positions: bool = False,
        json_logs: bool | None = None,
    ):
        """Delta of every model's metrics to a reference model, as CSV.

        ``--positions`` adds each model's standing per dataset, protocol and metric.
        """
        _setup("compare", json_logs)
        loaded = _load_reports(_as_list(reports))
        if not loaded:
            raise UsageError("no metric reports found")
        frame = compare_reports(loaded, reference, positions=positions)
        config = RunConfig(command="compare", model=reference, out=out)
        if out:
            write_csv(Path(out), frame, config)
        else:
            print("\n".join([*config.header_lines(), frame.write_csv().rstrip("\n")]))


def _load_reports(paths: Iterable[str]) -> list[MetricReport]:
    files: list[Path] = []
    for raw in paths:
        path = Path(raw)
        if path.is_dir():
            files.extend(sorted(p for p in path.glob("*.json") if not p.name.endswith(".stats.json")))
        elif path.is_file():
            files.append(path)
        else:
            raise LinkEvalError(f"report not found: {path}")
    loaded = []
    for path in files:
        try:
            loaded.append(MetricReport.from_json(path.read_text(encoding="utf-8")))
        except ValueError as e:
            raise LinkEvalError(f"{path}: not a metric report: {e}") from e
    return loaded


def main(argv: list[str] | None = None) -> int:
    load_dotenv()
    try:
        fire.Fire(Commands, command=argv, name="linkeval")
    except UsageError as e:
        logger.error(f"usage error: {e}")
        return 2
    except (LinkEvalError, OSError) as e:
        logger.error(str(e))
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
