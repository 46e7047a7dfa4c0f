"""Run-report store (SQLite by default) behind SQLAlchemy."""

import json
import os
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel
from sqlalchemy import Column, DateTime, Integer, String, Text, create_engine
from sqlalchemy.orm import Session, declarative_base, sessionmaker

from errors import ConfigError
from logging_config import get_logger

logger = get_logger(__name__)

DEFAULT_DB_URL = "sqlite:///./data/greenhop.db"
RUN_KINDS = ("train", "eval", "ablate")

Base = declarative_base()


class RunDB(Base):
    __tablename__ = "runs"
    id = Column(Integer, primary_key=True, index=True)
    created_at = Column(DateTime, default=datetime.utcnow, index=True)
    kind = Column(String(20), index=True)               # "train", "eval", "ablate"
    model_path = Column(Text, nullable=True)
    config_json = Column(Text, nullable=True)
    report_json = Column(Text, nullable=True)


class RunRecord(BaseModel):
    id: int
    created_at: datetime
    kind: str
    model_path: Optional[str]
    config: Optional[Dict[str, Any]]
    report: Optional[Dict[str, Any]]


def _to_record(rec: RunDB) -> RunRecord:
    return RunRecord(
        id=rec.id,
        created_at=rec.created_at,
        kind=rec.kind,
        model_path=rec.model_path,
        config=json.loads(rec.config_json) if rec.config_json else None,
        report=json.loads(rec.report_json) if rec.report_json else None,
    )


def db_url() -> str:
    return os.getenv("GREENHOP_DB_URL", DEFAULT_DB_URL)


class RunStore:
    def __init__(self, url: Optional[str] = None):
        self.url = url or db_url()
        if self.url.startswith("sqlite:///") and not self.url.startswith("sqlite:///:memory:"):
            Path(self.url[len("sqlite:///"):]).parent.mkdir(parents=True, exist_ok=True)
        connect_args = {"check_same_thread": False} if self.url.startswith("sqlite") else {}
        self.engine = create_engine(self.url, connect_args=connect_args)
        self.SessionLocal = sessionmaker(bind=self.engine, autoflush=False, autocommit=False)
        Base.metadata.create_all(bind=self.engine)

    def save(
        self,
        kind: str,
        model_path: Optional[str],
        config: Optional[Dict[str, Any]],
        report: Optional[Dict[str, Any]],
    ) -> int:
        """Persist one run report and return its id."""
        if kind not in RUN_KINDS:
            raise ConfigError(f"Unknown run kind '{kind}'; choose from {list(RUN_KINDS)}")
        with self.SessionLocal() as db:
            rec = RunDB(
                kind=kind,
                model_path=model_path,
                config_json=json.dumps(config) if config is not None else None,
                report_json=json.dumps(report) if report is not None else None,
            )
            db.add(rec)
            db.commit()
            db.refresh(rec)
            logger.info(f"💾 Recorded {kind} run #{rec.id}")
            return rec.id

    def list(self, kind: Optional[str] = None, limit: int = 20, offset: int = 0) -> List[RunRecord]:
        db: Session
        with self.SessionLocal() as db:
            q = db.query(RunDB).order_by(RunDB.created_at.desc(), RunDB.id.desc())
            if kind:
                q = q.filter(RunDB.kind == kind)
            return [_to_record(r) for r in q.offset(offset).limit(limit).all()]

    def get(self, run_id: int) -> Optional[RunRecord]:
        with self.SessionLocal() as db:
            rec = db.get(RunDB, run_id)
            return _to_record(rec) if rec else None
