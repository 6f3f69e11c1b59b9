import asyncio
import logging
from contextlib import asynccontextmanager
from typing import Any, Dict, List

import pandas as pd
from fastapi import FastAPI, HTTPException

from . import database
from .models import RunRecord, RunRequest
from .scenario import run_sweep
from .scenario.sweep import failed_runs
from .settings import configure_logging, max_workers

configure_logging()
logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    await database.init_db()
    yield

app = FastAPI(
    title="MANET Routing Simulator",
    description="Run proactive routing scenarios and sweeps",
    lifespan=lifespan
)


def frame_rows(frame: pd.DataFrame) -> List[Dict[str, Any]]:
    """CSV rows as JSON-safe dicts (missing values become null)."""
    return frame.astype(object).where(frame.notna(), None).to_dict(orient="records")


@app.post("/runs")
async def submit_run(request: RunRequest):
    run_id = await database.create_run(request.scenario.protocol)
    # Process synchronously for serverless
    await process_run(run_id, request)
    run = await database.get_run(run_id)
    return {"id": run_id, "status": run.status}


@app.get("/runs", response_model=List[RunRecord])
async def list_runs():
    return await database.get_all_runs()


@app.get("/runs/{run_id}", response_model=RunRecord)
async def get_run(run_id: int):
    run = await database.get_run(run_id)
    if not run:
        raise HTTPException(status_code=404, detail="Run not found")
    return run


@app.get("/api/status/{run_id}")
async def get_status(run_id: int):
    run = await database.get_run(run_id)
    if not run:
        raise HTTPException(status_code=404, detail="Run not found")
    return {"status": run.status, "progress": run.progress, "progress_message": run.progress_message, "error": run.error}


@app.delete("/runs/{run_id}")
async def delete_run(run_id: int):
    deleted = await database.delete_run(run_id)
    if not deleted:
        raise HTTPException(status_code=404, detail="Run not found")
    return {"status": "deleted"}


async def process_run(run_id: int, request: RunRequest):
    try:
        points = len(request.sweep.values) * request.sweep.seeds if request.sweep else 1
        await database.update_run_progress(run_id, 10, f"Simulating {points} run(s)...")
        frame = await asyncio.to_thread(run_sweep, request.scenario, request.sweep, None, None, max_workers())
        rows = frame_rows(frame)
        failed = failed_runs(frame)
        if failed:
            await database.fail_run(run_id, f"{failed} run(s) failed", rows)
            return
        await database.complete_run(run_id, rows)
    except Exception as e:
        logger.exception("run %d failed", run_id)
        await database.fail_run(run_id, str(e)[:150])
