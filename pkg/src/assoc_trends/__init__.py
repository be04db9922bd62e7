"""Diachronic word-association analysis for multi-word target terms."""

__version__ = "0.1.0"

from .config import AnalysisConfig, build_config
from .cooccur import CooccurrenceTable, Occurrence, TargetTerm
from .corpus import CorpusSlice, Document, SliceStats
from .metrics import AssociationScore
from .normalize import StopList, TokenStream
from .pipeline import AnalysisResult, run_analysis
from .trends import RankTrajectory

__all__ = [
    "AnalysisConfig",
    "AnalysisResult",
    "AssociationScore",
    "CooccurrenceTable",
    "CorpusSlice",
    "Document",
    "Occurrence",
    "RankTrajectory",
    "SliceStats",
    "StopList",
    "TargetTerm",
    "TokenStream",
    "build_config",
    "run_analysis",
    "__version__",
]
