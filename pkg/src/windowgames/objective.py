"""Which window objective is being optimised."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Objective:
    kind: str
    window: int | None = None

    def __post_init__(self):
        if self.kind not in ("fwmp", "bwmp"):
            raise ValueError(f"unknown objective {self.kind!r}")
        if self.kind == "fwmp" and (self.window is None or self.window < 1):
            raise ValueError("FWMP needs a window length >= 1")
        if self.kind == "bwmp" and self.window is not None:
            raise ValueError("BWMP takes no window length")

    @classmethod
    def fwmp(cls, window: int) -> "Objective":
        return cls("fwmp", window)

    @classmethod
    def bwmp(cls) -> "Objective":
        return cls("bwmp")

    @property
    def is_fwmp(self) -> bool:
        return self.kind == "fwmp"

    def __str__(self) -> str:
        return f"FWMP({self.window})" if self.is_fwmp else "BWMP"
