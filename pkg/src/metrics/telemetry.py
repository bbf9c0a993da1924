"""
Lightweight in-memory telemetry for the forward solver.

Each forward time step records its Newton iteration count, backtracks and
whether the regularized fallback was needed. The CLI prints a snapshot in
the run summary.
"""

from collections import deque
from statistics import mean
from threading import Lock
from typing import Deque


class SolverTelemetry:
    """Ring buffer of recent forward-step events."""

    def __init__(self, maxlen: int = 20000) -> None:
        self._events: Deque[dict] = deque(maxlen=maxlen)
        self._solves = 0
        self._lock = Lock()

    def record_step(self, time_index: int, iterations: int, backtracks: int, fallback: bool) -> None:
        with self._lock:
            self._events.append(
                {
                    "time_index": time_index,
                    "iterations": iterations,
                    "backtracks": backtracks,
                    "fallback": fallback,
                }
            )

    def record_solve(self) -> None:
        with self._lock:
            self._solves += 1

    def reset(self) -> None:
        with self._lock:
            self._events.clear()
            self._solves = 0

    def snapshot(self) -> dict:
        with self._lock:
            events = list(self._events)
            solves = self._solves

        iterations = [e["iterations"] for e in events]
        return {
            "solves": solves,
            "steps": len(events),
            "mean_newton_iterations": mean(iterations) if iterations else None,
            "max_newton_iterations": max(iterations) if iterations else None,
            "backtracks": sum(e["backtracks"] for e in events),
            "fallbacks": sum(1 for e in events if e["fallback"]),
        }


telemetry = SolverTelemetry()
