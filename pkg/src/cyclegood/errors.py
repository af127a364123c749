"""Exception hierarchy shared by every module."""
from __future__ import annotations


class CycleGoodError(Exception):
    pass


class ParameterError(CycleGoodError, ValueError):
    """Arguments violate a stated precondition."""


class VertexRangeError(ParameterError, IndexError):
    pass


class SearchBudgetExhausted(CycleGoodError):
    """A finder hit its node-expansion cap before deciding the question.

    Distinct from an absent result: absence means the search completed.
    """

    def __init__(self, message: str, expanded: int = 0):
        super().__init__(message)
        self.expanded = expanded


class ConstructionError(CycleGoodError):
    """A construction stage failed. ``stage`` names the step, ``trace`` the log so far."""

    def __init__(self, stage: str, message: str, trace: list | None = None, verdict=None):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
        self.trace = list(trace or [])
        self.verdict = verdict


class HypothesisFalsified(ConstructionError):
    """A claimed hypothesis was refuted; ``witness`` certifies the refutation."""

    def __init__(self, stage: str, message: str, witness, trace: list | None = None):
        super().__init__(stage, message, trace)
        self.witness = witness
