# Metrics Module
from .telemetry import SolverTelemetry, telemetry

__all__ = ["SolverTelemetry", "telemetry"]
