# Reporting Module
from .csv_export import (
    SCHEMA_VERSION,
    RunExporter,
    adjoint_frame,
    control_frame,
    read_table,
    records_frame,
    schema_header,
    trajectory_frame,
    write_profile,
    write_table,
)

__all__ = [
    "SCHEMA_VERSION",
    "RunExporter",
    "adjoint_frame",
    "control_frame",
    "read_table",
    "records_frame",
    "schema_header",
    "trajectory_frame",
    "write_profile",
    "write_table",
]
