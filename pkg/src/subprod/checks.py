"""Residual reports shared by the relation checks and the CLI."""
from __future__ import annotations

from dataclasses import dataclass

from .kernel import CHECK_TOL


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    tol: float = CHECK_TOL
    # inclusive degree window the residual was measured on; None = everything
    window: tuple | None = None

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tol)

    def as_dict(self) -> dict:
        return {
            "check": self.name,
            "window": list(self.window) if self.window is not None else None,
            "residual": float(self.residual),
            "pass": self.passed,
        }
