"""Command-line surface for the analytics pipeline and annotation service.

Stage commands (ingest/normalize/classify/analyze/export) run the pipeline
up to and including the named stage, since every stage depends on all the
stages before it. `run` is an alias for the full prefix.
"""

from __future__ import annotations

import json
import logging
import sys
from pathlib import Path

import click

from . import pipeline as pipeline_mod
from .annotation import AnnotationQueue, bootstrap_labels
from .classify import DEFAULT_THRESHOLD, ModelBackendDescriptor
from .corpus import Corpus
from .metrics import aggregate_runs, binary_metrics, multilabel_metrics
from .labels import SENWAVE_LABELS

log = logging.getLogger(__name__)


def _load_config(ctx) -> dict:
    data = {}
    if ctx.obj["config"]:
        with open(ctx.obj["config"], encoding="utf-8") as fh:
            data = json.load(fh)
    if ctx.obj["out"]:
        data["output_dir"] = ctx.obj["out"]
    if ctx.obj["seed"] is not None:
        data["seed"] = ctx.obj["seed"]
    return data


def _run_prefix(ctx, last_stage: str, input_path: str | None,
                rules: str | None, cases: str | None = None,
                all_posts: bool = False, no_figures: bool = False) -> None:
    data = _load_config(ctx)
    if input_path:
        data["input_path"] = input_path
    if rules:
        data["rules_path"] = rules
    if cases:
        data["cases_path"] = cases
    if all_posts:
        data["hinduphobic_only"] = False
    if no_figures:
        data["figures"] = False
    data.setdefault("output_dir", "output")
    stages = list(pipeline_mod.STAGES)
    data["stages"] = stages[: stages.index(last_stage) + 1]
    try:
        config = pipeline_mod.PipelineConfig(**data)
        manifest = pipeline_mod.run(config)
    except (pipeline_mod.ConfigError, TypeError) as exc:
        raise click.ClickException(str(exc)) from exc
    except pipeline_mod.StageError as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(json.dumps({
        "run_id": manifest["run_id"],
        "run_dir": manifest["run_dir"],
        "stages": {s: v["seconds"] for s, v in manifest["stages"].items()},
    }, indent=2))


@click.group()
@click.option("--config", type=click.Path(exists=True), default=None,
              help="Pipeline config JSON.")
@click.option("--seed", type=int, default=None, help="Deterministic seed.")
@click.option("--out", type=click.Path(), default=None, help="Output directory.")
@click.option("-v", "--verbose", is_flag=True, help="Debug logging.")
@click.pass_context
def main(ctx, config, seed, out, verbose):
    """Longitudinal abuse-detection and sentiment analytics pipeline."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    ctx.ensure_object(dict)
    ctx.obj.update(config=config, seed=seed, out=out)


def _stage_command(name: str, help_text: str):
    @main.command(name=name, help=help_text)
    @click.option("--input", "input_path", type=click.Path(exists=True),
                  default=None, help="Raw input file (CSV or JSONL).")
    @click.option("--rules", type=click.Path(exists=True), default=None,
                  help="Normalization rules JSON override.")
    @click.option("--cases", type=click.Path(exists=True), default=None,
                  help="Monthly case-count CSV for trend correlation.")
    @click.option("--all-posts", is_flag=True,
                  help="Analyze all posts, not only abuse-flagged ones.")
    @click.option("--no-figures", is_flag=True, help="Skip image rendering.")
    @click.pass_context
    def cmd(ctx, input_path, rules, cases, all_posts, no_figures):
        _run_prefix(ctx, name, input_path, rules, cases, all_posts, no_figures)

    return cmd


_stage_command("ingest", "Validate and partition raw posts into a corpus.")
_stage_command("normalize", "Run ingestion plus text normalization and spam filtering.")
_stage_command("classify", "Run through classification with the configured backend.")
_stage_command("analyze", "Run through trend analytics and figure data export.")
_stage_command("export", "Full pipeline, ending with flat corpus/prediction exports.")


@main.command(name="run")
@click.option("--input", "input_path", type=click.Path(exists=True), default=None)
@click.option("--rules", type=click.Path(exists=True), default=None)
@click.option("--cases", type=click.Path(exists=True), default=None)
@click.option("--all-posts", is_flag=True)
@click.option("--no-figures", is_flag=True)
@click.pass_context
def run_cmd(ctx, input_path, rules, cases, all_posts, no_figures):
    """Run every pipeline stage (same as `export`)."""
    _run_prefix(ctx, "export", input_path, rules, cases, all_posts, no_figures)


def _load_gold(path: Path) -> dict[str, dict]:
    gold = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                rec = json.loads(line)
                gold[rec["id"]] = rec
    return gold


def _evaluate_one(pred_path: Path, gold: dict[str, dict], threshold: float):
    pred_binary, gold_binary = [], []
    y_true, y_pred, y_score = [], [], []
    with open(pred_path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            g = gold.get(rec["id"])
            if g is None:
                raise click.ClickException(
                    f"prediction id {rec['id']!r} missing from gold file")
            pred_binary.append(rec["binary"])
            gold_binary.append(g["binary_label"])
            if "sentiment_scores" in rec and "sentiment_labels" in g:
                scores = [float(s) for s in rec["sentiment_scores"]]
                y_score.append(scores)
                y_pred.append([s >= threshold for s in scores])
                y_true.append([lbl in g["sentiment_labels"]
                               for lbl in SENWAVE_LABELS])
    binary = binary_metrics(pred_binary, gold_binary)
    # ranking metrics need at least one gold sentiment label somewhere
    multi = (multilabel_metrics(y_true, y_pred, y_score)
             if any(any(row) for row in y_true) else None)
    return binary, multi


@main.command()
@click.option("--pred", "pred_paths", type=click.Path(exists=True),
              multiple=True, required=True,
              help="Prediction JSONL; repeat for multiple runs.")
@click.option("--gold", type=click.Path(exists=True), required=True,
              help="Gold labels JSONL (id, binary_label, sentiment_labels).")
@click.option("--threshold", type=float, default=DEFAULT_THRESHOLD,
              show_default=True)
@click.option("--output", type=click.Path(), default=None,
              help="Write the metrics report here instead of stdout.")
def evaluate(pred_paths, gold, threshold, output):
    """Score predictions against gold labels; JSON metrics report."""
    gold_by_id = _load_gold(Path(gold))
    binaries, multis = [], []
    for path in pred_paths:
        binary, multi = _evaluate_one(Path(path), gold_by_id, threshold)
        binaries.append(binary)
        if multi is not None:
            multis.append(multi)
    report: dict = {"n_runs": len(binaries), "binary": binaries[0].as_dict()}
    if len(binaries) > 1:
        report["binary_over_runs"] = aggregate_runs(binaries).as_dict()
    if multis:
        report["multi_label"] = multis[0].as_dict()
        if len(multis) > 1:
            report["multi_label_runs"] = [m.as_dict() for m in multis]
    text = json.dumps(report, indent=2)
    if output:
        Path(output).write_text(text + "\n", encoding="utf-8")
        click.echo(f"wrote {output}")
    else:
        click.echo(text)


@main.command()
@click.option("--corpus", "corpus_root", type=click.Path(exists=True),
              required=True, help="Normalized corpus directory.")
@click.option("--n-manual", type=int, default=0, show_default=True,
              help="Leading tasks queued without a machine proposal.")
@click.option("--queue", "queue_dir", type=click.Path(), required=True,
              help="Directory for tasks.jsonl / decisions.jsonl.")
@click.option("--backend-kind", default="keyword_rule", show_default=True)
@click.option("--backend-path", type=click.Path(exists=True), default=None)
@click.option("--threshold", type=float, default=DEFAULT_THRESHOLD)
def bootstrap(corpus_root, n_manual, queue_dir, backend_kind, backend_path,
              threshold):
    """Seed the annotation queue from a normalized corpus."""
    suggester = ModelBackendDescriptor(
        kind=backend_kind, path=backend_path).load()
    queue = bootstrap_labels(Corpus(Path(corpus_root)), suggester, n_manual,
                             queue_dir, threshold=threshold)
    click.echo(json.dumps({"queue_dir": str(queue_dir), "tasks": len(queue)}))


@main.command()
@click.option("--queue", "queue_dir", type=click.Path(exists=True), required=True)
@click.option("--port", type=int, default=8787, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--static-dir", type=click.Path(), default=None,
              help="Built UI bundle to serve at /.")
@click.option("--corpus", "corpus_root", type=click.Path(exists=True),
              default=None, help="Corpus whose manifest backs /api/corpus/summary.")
@click.option("--lease-seconds", type=float, default=300.0, show_default=True)
def serve(queue_dir, port, host, static_dir, corpus_root, lease_seconds):
    """Serve the annotation API (and UI bundle, if built)."""
    import uvicorn

    from .service import create_app

    queue = AnnotationQueue(queue_dir, lease_seconds=lease_seconds)
    summary = Corpus(Path(corpus_root)).manifest if corpus_root else None
    app = create_app(queue, corpus_summary=summary, static_dir=static_dir)
    uvicorn.run(app, host=host, port=port)


@main.command(name="export-labeled")
@click.option("--queue", "queue_dir", type=click.Path(exists=True), required=True)
@click.option("--output", type=click.Path(), required=True)
def export_labeled_cmd(queue_dir, output):
    """Export human-verified labels from the annotation queue."""
    queue = AnnotationQueue(queue_dir)
    summary = queue.export_labeled(output)
    click.echo(json.dumps(summary))


@main.command()
@click.option("--run-dir", type=click.Path(exists=True), required=True,
              help="A finished run directory containing analyze/ outputs.")
@click.option("--output", type=click.Path(), default=None,
              help="Figure directory (default: <run-dir>/analyze/figures).")
def report(run_dir, output):
    """Render figures from a run's analytics CSVs."""
    from . import report as report_mod

    analyze_dir = Path(run_dir) / "analyze"
    if not analyze_dir.is_dir():
        raise click.ClickException(f"no analyze outputs under {run_dir}")
    out_dir = Path(output) if output else analyze_dir / "figures"
    written = report_mod.render_figures(analyze_dir, out_dir)
    click.echo(json.dumps({"figures": written}, indent=2))


if __name__ == "__main__":
    sys.exit(main())
