# Data schemas for Sparse VCH Control
from .discrete import ControlProblem, InitialData, PhysParams, Targets
from .optimization import OptimizerConfig, OracleConfig, SecondOrderConfig, SweepConfig
from .problem import (
    BoxBounds,
    CostWeights,
    FieldProfile,
    GeometrySpec,
    InitialSpec,
    NewtonConfig,
    PhysicsSpec,
    ProblemSpec,
    TargetSpec,
    TimeSpec,
)

__all__ = [
    # Configuration
    "BoxBounds",
    "CostWeights",
    "FieldProfile",
    "GeometrySpec",
    "InitialSpec",
    "NewtonConfig",
    "PhysicsSpec",
    "ProblemSpec",
    "TargetSpec",
    "TimeSpec",
    "OptimizerConfig",
    "OracleConfig",
    "SecondOrderConfig",
    "SweepConfig",
    # Discretized data
    "ControlProblem",
    "InitialData",
    "PhysParams",
    "Targets",
]
