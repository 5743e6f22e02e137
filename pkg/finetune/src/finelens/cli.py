"""CLI for the two-stage training harness."""

from __future__ import annotations

import json
import logging

import click

from .config import TrainConfig
from .export import export_portable
from .train import finetune_binary, finetune_binary_runs, finetune_sentiment


def _config(path, seed) -> TrainConfig:
    config = TrainConfig.from_file(path) if path else TrainConfig()
    if seed is not None:
        config = TrainConfig(**{**config.as_dict(), "seed": seed})
    return config


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--seed", type=int, default=None)
@click.option("-v", "--verbose", is_flag=True)
@click.pass_context
def main(ctx, config_path, seed, verbose):
    """Two-stage classifier fine-tuning and portable model export."""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO)
    ctx.ensure_object(dict)
    ctx.obj["config"] = _config(config_path, seed)


@main.command(name="train-binary")
@click.option("--dataset", type=click.Path(exists=True), required=True,
              help="Labeled-record JSONL (must include text).")
@click.option("--out", type=click.Path(), required=True)
@click.option("--seeds", default=None,
              help="Comma-separated seeds for repeated runs (mean ± std).")
@click.pass_context
def train_binary(ctx, dataset, out, seeds):
    config = ctx.obj["config"]
    if seeds:
        seed_list = [int(s) for s in seeds.split(",")]
        result = finetune_binary_runs(dataset, config, out, seed_list)
    else:
        result = finetune_binary(dataset, config, out)
    click.echo(json.dumps(result, indent=2))


@main.command(name="train-sentiment")
@click.option("--checkpoint", type=click.Path(exists=True), required=True,
              help="Binary-stage checkpoint (stage order is enforced).")
@click.option("--dataset", type=click.Path(exists=True), required=True,
              help="Ten-label CSV or labeled-record JSONL.")
@click.option("--out", type=click.Path(), required=True)
@click.pass_context
def train_sentiment(ctx, checkpoint, dataset, out):
    result = finetune_sentiment(checkpoint, dataset, ctx.obj["config"], out)
    click.echo(json.dumps(result, indent=2))


@main.command()
@click.option("--checkpoint", type=click.Path(exists=True), required=True)
@click.option("--out", type=click.Path(), required=True,
              help="Portable model file path (.pt).")
def export(checkpoint, out):
    result = export_portable(checkpoint, out)
    click.echo(json.dumps(result, indent=2))


if __name__ == "__main__":
    main()
