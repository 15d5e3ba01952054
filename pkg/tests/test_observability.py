"""Tests for structured logging and run phases"""
import json
import logging
from fractions import Fraction

import pytest

from src.observability import StructuredLogger, Tracer


def _last_entry(caplog):
    return json.loads(caplog.records[-1].getMessage())


def test_bound_fields_reach_every_event(caplog):
    log = StructuredLogger("twistrank.test").bind(command="grid")
    with caplog.at_level(logging.INFO):
        log.info("cell_finished", s=2, r=3, n=3)
    entry = _last_entry(caplog)
    assert entry["event"] == "cell_finished"
    assert (entry["command"], entry["s"], entry["r"], entry["n"]) == ("grid", 2, 3, 3)


def test_bind_does_not_change_the_parent(caplog):
    parent = StructuredLogger("twistrank.test")
    parent.bind(certifier="fp")
    with caplog.at_level(logging.INFO):
        parent.info("run_started")
    assert "certifier" not in _last_entry(caplog)


def test_exact_values_are_logged_as_text(caplog):
    with caplog.at_level(logging.INFO):
        StructuredLogger("twistrank.test").info("point_found", X=Fraction(25, 4))
    assert _last_entry(caplog)["X"] == "25/4"


def test_phases_record_status_and_attributes():
    tracer = Tracer(StructuredLogger("twistrank.test"))
    with tracer.phase("construct", s=2, n=3):
        pass
    with pytest.raises(ZeroDivisionError):
        with tracer.phase("certify", certifier="fp"):
            1 / 0
    first, second = tracer.get_trace()
    assert (first["span_id"], first["phase"], first["status"]) == ("construct_0", "construct", "ok")
    assert first["attributes"] == {"s": 2, "n": 3}
    assert (second["phase"], second["status"]) == ("certify", "ZeroDivisionError")


def test_unknown_phase_is_rejected():
    tracer = Tracer(StructuredLogger("twistrank.test"))
    with pytest.raises(ValueError, match="unknown phase"):
        with tracer.phase("descent"):
            pass
    assert tracer.get_trace() == []
