"""Guard for the exponential searches."""

from __future__ import annotations

import os

DEFAULT_NODE_CAP = 10**7
ENV_VAR = "SHARE_ALLOC_NODE_CAP"


class SearchBudgetExceeded(RuntimeError):
    """An exhaustive search was refused or aborted because it would exceed the node cap."""


def node_cap(override: int | None = None) -> int:
    if override is not None:
        return int(override)
    raw = os.environ.get(ENV_VAR)
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise ValueError(f"{ENV_VAR} must be an integer, got {raw!r}") from None
    return DEFAULT_NODE_CAP


class NodeCounter:
    __slots__ = ("cap", "count", "what")

    def __init__(self, cap: int, what: str):
        self.cap = cap
        self.count = 0
        self.what = what

    def tick(self, k: int = 1) -> None:
        self.count += k
        if self.count > self.cap:
            raise SearchBudgetExceeded(f"{self.what}: more than {self.cap} search nodes")
