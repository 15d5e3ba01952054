"""Structured logging and timing spans for construct, certify and grid runs"""
import json
import logging
import sys
import time
from contextlib import contextmanager
from typing import Any, Dict, List

# Logs go to stderr so reports on stdout stay clean
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    stream=sys.stderr,
)

PHASES = ("construct", "certify", "grid_cell")


def set_level(level: str) -> None:
    logging.getLogger().setLevel(level.upper())


class StructuredLogger:
    """JSON structured logging; bound fields are added to every event"""

    def __init__(self, name: str, **bound):
        self.name = name
        self.logger = logging.getLogger(name)
        self.bound = bound

    def bind(self, **fields) -> "StructuredLogger":
        return StructuredLogger(self.name, **{**self.bound, **fields})

    def log(self, level: str, event: str, **kwargs):
        """Log structured event"""
        log_entry = {
            "timestamp": time.time(),
            "event": event,
            **self.bound,
            **kwargs
        }
        # Fractions and mpf values render through str
        getattr(self.logger, level)(json.dumps(log_entry, default=str))

    def debug(self, event: str, **kwargs):
        self.log("debug", event, **kwargs)

    def info(self, event: str, **kwargs):
        self.log("info", event, **kwargs)

    def error(self, event: str, **kwargs):
        self.log("error", event, **kwargs)

    def warning(self, event: str, **kwargs):
        self.log("warning", event, **kwargs)


class Tracer:
    """Timing spans for the phases of one run

    Each phase records its duration, its attributes (s, r, n, certifier)
    and whether it finished or raised.
    """

    def __init__(self, logger: StructuredLogger):
        self.logger = logger
        self.spans: List[Dict[str, Any]] = []

    @contextmanager
    def phase(self, name: str, **attributes):
        if name not in PHASES:
            raise ValueError(f"unknown phase {name!r}; expected one of {', '.join(PHASES)}")
        span_id = f"{name}_{len(self.spans)}"
        start = time.perf_counter()
        status = "ok"
        try:
            yield span_id
        except Exception as e:
            status = type(e).__name__
            raise
        finally:
            duration = int((time.perf_counter() - start) * 1000)
            self.spans.append({
                "span_id": span_id,
                "phase": name,
                "status": status,
                "duration_ms": duration,
                "attributes": attributes,
            })
            self.logger.debug("phase_finished", phase=name, status=status, duration_ms=duration, **attributes)

    def get_trace(self) -> List[Dict[str, Any]]:
        return self.spans
