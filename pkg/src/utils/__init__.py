"""Utility modules for Sparse VCH Control."""

from .logger import ROOT_LOGGER, get_logger, logger

__all__ = ["ROOT_LOGGER", "logger", "get_logger"]
