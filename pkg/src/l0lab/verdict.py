from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Verdict:
    """Outcome of a sampled check.

    A failed verdict always carries ``witness``: a dict holding a ``kind``
    key understood by :func:`l0lab.theorems.replay` plus the refuting inputs.
    """

    passed: bool
    witness: dict[str, Any] | None = None
    samples_run: int = 0
    name: str = ""
    notes: dict[str, Any] = field(default_factory=dict)
