"""Run store - in-memory storage for serverless compatibility."""
import asyncio
from datetime import datetime
from typing import Any, Dict, List, Optional

from .models import ProtocolName, RunRecord, RunStatus

# In-memory storage; runs are lost on restart
_runs: Dict[int, RunRecord] = {}
_counter = 0
_lock = asyncio.Lock()


async def init_db():
    """Initialize storage - no-op for in-memory."""
    pass


async def reset():
    """Forget every run (used by tests)."""
    global _counter
    async with _lock:
        _runs.clear()
        _counter = 0


async def create_run(protocol: ProtocolName) -> int:
    """Create a new run entry and return its ID."""
    global _counter
    async with _lock:
        _counter += 1
        run_id = _counter
        _runs[run_id] = RunRecord(id=run_id, protocol=protocol, created_at=datetime.now())
        return run_id


async def update_run_progress(run_id: int, progress: int, message: str):
    if run_id in _runs:
        _runs[run_id].progress = progress
        _runs[run_id].progress_message = message


async def complete_run(run_id: int, rows: List[Dict[str, Any]]):
    """Mark run as complete with its result rows."""
    if run_id in _runs:
        run = _runs[run_id]
        run.status = RunStatus.COMPLETE
        run.rows = rows
        run.progress = 100
        run.progress_message = "Complete"
        run.completed_at = datetime.now()


async def fail_run(run_id: int, error: str, rows: Optional[List[Dict[str, Any]]] = None):
    """Mark run as failed; rows of the runs that did finish are kept."""
    if run_id in _runs:
        _runs[run_id].rows = rows
        _runs[run_id].status = RunStatus.FAILED
        _runs[run_id].error = error
        _runs[run_id].completed_at = datetime.now()


async def get_run(run_id: int) -> Optional[RunRecord]:
    return _runs.get(run_id)


async def get_all_runs() -> List[RunRecord]:
    """All runs, newest first."""
    return sorted(_runs.values(), key=lambda r: r.id, reverse=True)


async def delete_run(run_id: int) -> bool:
    async with _lock:
        return _runs.pop(run_id, None) is not None
