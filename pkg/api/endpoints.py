"""
Inference endpoints over one loaded PipelineModel.

The model lives on ``app.state.model`` and is never mutated, so the sync
handlers below run concurrently in FastAPI's thread pool.
"""

import math
import time
from typing import Any, Dict, List

from fastapi import APIRouter, Depends, HTTPException, Request
from pydantic import BaseModel, Field, field_validator

from errors import GreenHopError, InvalidInputError
from logging_config import get_logger
from pipeline import PipelineModel, classify, count_parameters, estimate_flops

logger = get_logger(__name__)

router = APIRouter(tags=["inference"])


class ClassifyRequest(BaseModel):
    points: List[List[float]] = Field(..., min_length=1)

    @field_validator("points")
    @classmethod
    def _xyz_triples(cls, v: List[List[float]]) -> List[List[float]]:
        for i, p in enumerate(v):
            if len(p) != 3:
                raise ValueError(f"point {i} has {len(p)} coordinates, expected 3")
            if not all(math.isfinite(c) for c in p):
                raise ValueError(f"point {i} has a non-finite coordinate")
        return v


class ClassifyResponse(BaseModel):
    label: int
    class_name: str
    scores: List[float]
    latency_ms: float


def get_model(request: Request) -> PipelineModel:
    return request.app.state.model


@router.get("/health")
def health(model: PipelineModel = Depends(get_model)) -> Dict[str, Any]:
    return {
        "status": "ok",
        "classes": model.classifier.n_classes,
        "format_version": model.format_version,
    }


@router.get("/model")
def describe_model(model: PipelineModel = Depends(get_model)) -> Dict[str, Any]:
    flops = estimate_flops(
        model.config, n_classes=model.classifier.n_classes, n_selected=int(model.selected.size)
    )
    return {
        "config": model.config.model_dump(mode="json"),
        "class_names": list(model.class_names),
        "parameters": count_parameters(model),
        "flops": {"stages": flops.stages, "headline_stages": list(flops.headline_stages),
                  "headline": flops.headline, "total": flops.total},
    }


@router.post("/classify", response_model=ClassifyResponse)
def classify_points(body: ClassifyRequest, model: PipelineModel = Depends(get_model)) -> ClassifyResponse:
    start = time.perf_counter()
    try:
        label, scores = classify(model, body.points)
    except InvalidInputError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except GreenHopError as e:
        logger.error(f"Classification failed: {e}")
        raise HTTPException(status_code=500, detail=str(e))
    latency = (time.perf_counter() - start) * 1000.0
    logger.debug(f"Classified {len(body.points)} points as {label} in {latency:.1f}ms")
    return ClassifyResponse(
        label=label, class_name=model.class_name(label), scores=[float(s) for s in scores], latency_ms=latency
    )
