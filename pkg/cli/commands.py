"""Sub-command handlers. Each takes the parsed argparse namespace and returns an exit status."""

from __future__ import annotations

import argparse
import time
from pathlib import Path
from typing import Optional

import numpy as np

from cli.ablation import GRIDS, load_grid, run_ablation
from cli.reports import emit, eval_table, flops_table, predict_table, to_records, train_table
from dataset import convert, load_dataset, load_points, write_synthetic
from errors import ConfigError
from logging_config import get_logger
from pipeline import (
    PipelineConfig, PipelineModel, classify_batch, config_parameters, count_parameters, estimate_flops,
    evaluation_report, fit_pipeline, load_config, load_model, model_label_ids, parse_overrides, preset, save_model,
)
from storage import RunStore

logger = get_logger(__name__)

DEFAULT_GRID = Path(__file__).resolve().parent.parent / "configs" / "ablation.yaml"


def _config(args: argparse.Namespace) -> PipelineConfig:
    if getattr(args, "preset", None):
        if args.config:
            raise ConfigError("Use either --preset or --config, not both")
        return preset(args.preset).with_overrides(**parse_overrides(args.override))
    return load_config(args.config, args.override)


def _timed_classify(model: PipelineModel, clouds: list) -> tuple[np.ndarray, np.ndarray, float]:
    start = time.perf_counter()
    labels, scores = classify_batch(model, clouds)
    return labels, scores, time.perf_counter() - start


def _record(args: argparse.Namespace, kind: str, model_path: Optional[str], config: Optional[PipelineConfig],
            report: dict) -> None:
    if not getattr(args, "record", False):
        return
    run_id = RunStore().save(kind, model_path, config.model_dump(mode="json") if config else None, report)
    logger.info(f"Run stored as #{run_id}")


def cmd_train(args: argparse.Namespace) -> int:
    config = _config(args)
    data = load_dataset(args.dataset)
    model, summary = fit_pipeline(data, config)
    save_model(model, args.model)
    parameters = count_parameters(model)
    df = train_table(summary, parameters)
    notes = [f"{stage}: {seconds:.2f}s" for stage, seconds in summary.seconds.items()]
    notes.append(f"total training time: {sum(summary.seconds.values()):.2f}s")
    emit(df, f"Training report ({args.model})", args.output, notes)
    _record(args, "train", str(args.model), config, {"rows": to_records(df)})
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    data = load_dataset(args.dataset)
    labels, _, elapsed = _timed_classify(model, data.clouds)
    report = evaluation_report(model_label_ids(model, data), labels, model.class_names)
    df = eval_table(report)
    per_sample = 1000.0 * elapsed / max(len(data), 1)
    notes = [f"overall accuracy: {report.overall_accuracy:.4f}", f"class-avg accuracy: {report.class_avg_accuracy:.4f}",
             f"inference: {per_sample:.2f} ms/sample"]
    emit(df, f"Evaluation report ({args.dataset})", args.output, notes)
    _record(args, "eval", str(args.model), model.config, report.model_dump())
    return 0


def cmd_predict(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    truth = None
    if args.dataset:
        data = load_dataset(args.dataset)
        paths, clouds = list(data.paths or ()), data.clouds
        truth = model_label_ids(model, data).tolist()
    else:
        paths = [str(p) for p in args.inputs]
        clouds = [load_points(p) for p in args.inputs]
    labels, scores, elapsed = _timed_classify(model, clouds)
    df = predict_table(paths, labels, scores, model.class_names, truth)
    notes = []
    if truth is not None and len(paths):
        notes.append(f"correct: {int(df['correct'].sum())} / {len(paths)}")
    if len(paths):
        notes.append(f"inference: {1000.0 * elapsed / len(paths):.2f} ms/sample")
    emit(df, "Predictions", args.output, notes)
    return 0


def cmd_ablate(args: argparse.Namespace) -> int:
    base = _config(args)
    grid = load_grid(args.grid)
    train_set = load_dataset(args.dataset)
    test_set = load_dataset(args.test_dataset)
    if tuple(train_set.class_names) != tuple(test_set.class_names):
        raise ConfigError("Training and test manifests must declare the same class list")
    timings: dict[str, float] = {}
    df = run_ablation(grid, base, train_set, test_set, args.grids or GRIDS, timings)
    notes = [f"{cell}: {seconds:.2f}s" for cell, seconds in timings.items()]
    emit(df, "Ablation report", args.output, notes)
    _record(args, "ablate", None, base, {"rows": to_records(df)})
    return 0


def cmd_flops(args: argparse.Namespace) -> int:
    if args.model:
        model = load_model(args.model)
        config, n_classes, n_selected = model.config, model.classifier.n_classes, int(model.selected.size)
        notes = [f"parameters: {count_parameters(model)}"]
    else:
        config, n_classes, n_selected = _config(args), args.classes, None
        notes = [f"parameters: {config_parameters(config, n_classes)}"]
    report = estimate_flops(config, n_points=args.points, n_classes=n_classes, n_selected=n_selected)
    notes = [f"headline ({'+'.join(report.headline_stages)}): {report.headline:,}",
             f"all stages: {report.total:,}"] + notes
    emit(flops_table(report), f"FLOPs per inference (N={report.n_points})", args.output, notes)
    return 0


def cmd_convert(args: argparse.Namespace) -> int:
    manifest = convert(args.format, args.src, args.dst, split=args.split)
    print(manifest)
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    shapes = [s for s in args.shapes.split(",") if s] if args.shapes else None
    kwargs = {"shapes": shapes} if shapes else {}
    train, test = write_synthetic(
        args.dst, per_class_train=args.per_class_train, per_class_test=args.per_class_test,
        n_points=args.points, seed=args.seed, binary=args.binary, **kwargs,
    )
    print(train)
    print(test)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from api import create_app

    app = create_app(load_model(args.model))
    uvicorn.run(app, host=args.host, port=args.port, log_config=None)
    return 0


def cmd_runs(args: argparse.Namespace) -> int:
    store = RunStore()
    if args.id is not None:
        rec = store.get(args.id)
        if rec is None:
            raise ConfigError(f"No stored run with id {args.id}")
        print(rec.model_dump_json(indent=2))
        return 0
    for rec in store.list(kind=args.kind, limit=args.limit):
        print(f"#{rec.id}\t{rec.created_at:%Y-%m-%d %H:%M:%S}\t{rec.kind}\t{rec.model_path or '-'}")
    return 0
