from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from api.endpoints import router
from logging_config import get_logger
from pipeline import PipelineModel

logger = get_logger(__name__)


def create_app(model: PipelineModel) -> FastAPI:
    app = FastAPI(
        title="Green-PointHop",
        version="1.0.0",
        description="Point cloud classification with a one-hop Saab pipeline",
    )
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.model = model
    app.include_router(router)
    logger.info(f"✅ Inference service ready: {model.classifier.n_classes} classes")
    return app
