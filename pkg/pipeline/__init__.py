from pipeline.config import PRESETS, PipelineConfig, build_config, load_config, parse_overrides, preset
from pipeline.engine import (
    FORMAT_VERSION, PipelineModel, TrainingSummary, classify, classify_batch, evaluate,
    extract_batch, extract_features, fit_pipeline, model_label_ids, train,
)
from pipeline.metrics import EvalReport, confusion_matrix, evaluation_report
from pipeline.complexity import FlopReport, config_parameters, count_parameters, estimate_flops
from pipeline.model_io import dumps_model, load_model, loads_model, save_model

__all__ = [
    "PRESETS", "PipelineConfig", "build_config", "load_config", "parse_overrides", "preset",
    "FORMAT_VERSION", "PipelineModel", "TrainingSummary", "classify", "classify_batch", "evaluate",
    "extract_batch", "extract_features", "fit_pipeline", "model_label_ids", "train",
    "EvalReport", "confusion_matrix", "evaluation_report",
    "FlopReport", "config_parameters", "count_parameters", "estimate_flops",
    "dumps_model", "load_model", "loads_model", "save_model",
]
