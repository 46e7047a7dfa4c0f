from storage.db import DEFAULT_DB_URL, RUN_KINDS, RunRecord, RunStore, db_url

__all__ = ["DEFAULT_DB_URL", "RUN_KINDS", "RunRecord", "RunStore", "db_url"]
