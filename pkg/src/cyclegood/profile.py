"""Numeric constants for every construction, with a paper preset and a desk preset.

The ``paper`` preset holds the values the proofs fix. They make every hypothesis
unsatisfiable on inputs that fit in memory, so engines under that preset refuse
to run constructions. The desk preset shrinks the multiplicative constants and
keeps the recipes; its guarantees come from output verification only.
"""
from __future__ import annotations

import json
import sys
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from .errors import ParameterError


@dataclass(frozen=True)
class ExpanderConstants:
    M: float
    delta: float
    beta: float


@dataclass(frozen=True)
class ConstantsProfile:
    preset: str
    slack: int = 2
    exhaustive_threshold: int = 20
    # randomized falsifier: restarts and local-search moves per restart
    falsifier_restarts: int = 48
    falsifier_moves: int = 24
    falsifier_pool: int = 24
    # small r-gadget lemma: |G| >= small_gadget_factor * k * m
    small_gadget: ExpanderConstants = ExpanderConstants(9_000_000, 4000, 1_500_000)
    small_gadget_factor: float = 9_100_000
    # doubling (large) gadget lemma
    large_gadget: ExpanderConstants = ExpanderConstants(9_500_000, 40000, 1_500_000)
    large_gadget_factor: float = 9_500_000
    # gadget existence lemma: |G| >= N1 * lambda * mu * k * m, mu*m >= coeff*(lambda*m)^(3/4)
    N1: float = 1e7
    gadget_existence: ExpanderConstants = ExpanderConstants(1e7, 40000, 1_500_000)
    return_size_coeff: float = 4100
    lambda_min: float = 1e9  # "lambda >= 2 mu >= 10^9"
    # exact-length connection
    N2: float = 2e49
    connect_lambda: float = 1e21
    connect_mu: float = 1e20
    connect_min_m: int = 8
    # connected case
    N3_connected: float = 1e56
    connected_lambda: float = 1e24
    connected_mu: float = 1e21
    connectivity_exponent: int = 20
    join_exponent: int = 12
    matching_size: int = 12
    join_min_paths: int = 16
    gadget_cycle_a_fraction: float = 0.01
    gadget_cycle_b_fraction: float = 0.99
    # partition lemma
    N3_partition: float = 1e58
    separator_exponent: int = 20
    separator_total_exponent: int = 11
    partition_m_exponent: int = 21
    # main theorem
    N3_main: float = 1e60
    main_exponent: int = 22
    # budgets
    search_budget: int = 2_000_000
    rotation_budget: int = 20000
    tree_order_cap: int | None = None
    expander_m_cap: int | None = None
    build_attempts: int = 3
    spot_check_pairs: int = 4

    def to_json(self) -> dict:
        return asdict(self)

    def bound(self, value: float) -> int:
        """A paper bound with ceilings taken and the additive slack applied."""
        import math

        if math.isinf(value):
            return sys.maxsize
        return int(math.ceil(value - 1e-9)) + self.slack

    def with_overrides(self, **kw) -> "ConstantsProfile":
        return replace(self, **kw)


PAPER = ConstantsProfile(preset="paper")

DESK = ConstantsProfile(
    preset="desk",
    small_gadget=ExpanderConstants(1e6, 1, 1),
    small_gadget_factor=4,
    large_gadget=ExpanderConstants(1e6, 1, 1),
    large_gadget_factor=4,
    N1=0.25,
    gadget_existence=ExpanderConstants(1e6, 1, 1),
    return_size_coeff=0.0,
    lambda_min=2,
    N2=1.0,
    connect_lambda=16,
    connect_mu=8,
    connect_min_m=2,
    N3_connected=1.0,
    connected_lambda=16,
    connected_mu=8,
    connectivity_exponent=2,
    join_exponent=2,
    matching_size=12,
    join_min_paths=16,
    gadget_cycle_a_fraction=0.01,
    gadget_cycle_b_fraction=0.99,
    N3_partition=1.0,
    separator_exponent=2,
    separator_total_exponent=3,
    partition_m_exponent=0,
    N3_main=1.0,
    main_exponent=0,
    search_budget=200_000,
    rotation_budget=4000,
    tree_order_cap=8,
    expander_m_cap=8,
    falsifier_restarts=6,
    falsifier_moves=12,
    falsifier_pool=16,
)

PRESETS = {"paper": PAPER, "desk": DESK}


def _decode(cls, data: dict):
    kw = {}
    for f in fields(cls):
        if f.name not in data:
            continue
        val = data[f.name]
        if f.type in ("ExpanderConstants",) or isinstance(getattr(cls, f.name, None), ExpanderConstants):
            val = ExpanderConstants(**val)
        kw[f.name] = val
    return kw


def load_profile(spec: str) -> ConstantsProfile:
    """``paper``, ``desk`` or ``file:<path>`` (JSON with a ``base`` preset plus overrides)."""
    if spec in PRESETS:
        return PRESETS[spec]
    if spec.startswith("file:"):
        path = Path(spec[5:])
        try:
            data = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ParameterError(f"cannot read profile {path}: {exc}") from None
        base = PRESETS.get(data.pop("base", "desk"))
        if base is None:
            raise ParameterError("profile base must be 'paper' or 'desk'")
        unknown = set(data) - {f.name for f in fields(ConstantsProfile)}
        if unknown:
            raise ParameterError(f"unknown profile keys: {sorted(unknown)}")
        kw = _decode(ConstantsProfile, data)
        kw.setdefault("preset", f"file:{path.name}")
        return replace(base, **kw)
    raise ParameterError(f"unknown profile '{spec}'")
