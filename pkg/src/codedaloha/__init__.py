"""Coded slotted ALOHA: frame simulation and density-evolution analysis."""

from .degree import CodeParams, DegreeDistribution, Perspective
from .de import DeSettings, DeTrace, ThresholdResult, de_run, threshold
from .frame import FrameConfig, FrameGraph, build_frame
from .decode import DecodeResult, ic_decode, sa_decode, thma_decode
from .mc import ThroughputStats, simulate_point, sweep

__version__ = "0.1.0"

__all__ = [
    "CodeParams", "DegreeDistribution", "Perspective",
    "DeSettings", "DeTrace", "ThresholdResult", "de_run", "threshold",
    "FrameConfig", "FrameGraph", "build_frame",
    "DecodeResult", "ic_decode", "sa_decode", "thma_decode",
    "ThroughputStats", "simulate_point", "sweep",
]
