import pytest

from app.engine import EventScheduler
from app.errors import SchedulingError, SimulationError


def test_events_fire_in_time_order():
    s = EventScheduler()
    fired = []
    s.at(3.0, 0, "c", lambda: fired.append("c"))
    s.at(1.0, 0, "a", lambda: fired.append("a"))
    s.at(2.0, 0, "b", lambda: fired.append("b"))
    assert s.run_until(10.0) == 3
    assert fired == ["a", "b", "c"]


def test_same_timestamp_is_fifo():
    s = EventScheduler()
    fired = []
    for i in range(5):
        s.at(1.0, i, "tick", lambda i=i: fired.append(i))
    s.run_until(1.0)
    assert fired == [0, 1, 2, 3, 4]


def test_clock_advances_to_horizon():
    s = EventScheduler()
    s.at(1.0, 0, "x", lambda: None)
    s.run_until(5.0)
    assert s.now == 5.0
    assert len(s) == 0


def test_event_at_horizon_is_dispatched():
    s = EventScheduler()
    fired = []
    s.at(5.0, 0, "edge", lambda: fired.append(s.now))
    s.run_until(5.0)
    assert fired == [5.0]


def test_scheduling_in_the_past_is_fatal():
    s = EventScheduler()
    s.run_until(2.0)
    with pytest.raises(SchedulingError):
        s.at(1.0, 0, "late", lambda: None)
    with pytest.raises(SimulationError):
        s.run_until(1.0)


def test_events_scheduled_during_dispatch_run_in_same_call():
    s = EventScheduler()
    fired = []
    s.at(1.0, 0, "first", lambda: s.after(0.5, 0, "second", lambda: fired.append(s.now)))
    s.run_until(2.0)
    assert fired == [1.5]


def test_cancelled_event_is_skipped():
    s = EventScheduler()
    fired = []
    ev = s.at(1.0, 0, "x", lambda: fired.append(1))
    ev.cancel()
    assert s.pending("x") == []
    assert s.run_until(2.0) == 0
    assert fired == []


def test_pending_filters_by_kind():
    s = EventScheduler()
    s.at(1.0, 0, "rx_data", lambda: None)
    s.at(1.0, 0, "rx_control", lambda: None)
    s.at(2.0, 1, "rx_data", lambda: None)
    assert len(s.pending("rx_data")) == 2
    assert len(s.pending()) == 3


def test_trace_records_dispatch_order():
    s = EventScheduler(record_trace=True)
    s.at(2.0, 7, "b", lambda: None)
    s.at(1.0, 3, "a", lambda: None)
    s.run_until(3.0)
    assert [(t, target, kind) for t, _, target, kind in s.trace] == [(1.0, 3, "a"), (2.0, 7, "b")]


def test_trace_off_by_default():
    assert EventScheduler().trace is None
