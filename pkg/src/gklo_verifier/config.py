from dataclasses import dataclass
from pathlib import Path

from .gklo import Conventions


@dataclass(frozen=True)
class Config:
    command: str
    spec_path: Path | None = None
    suites: tuple[str, ...] = ("all",)
    vertex: int | None = None
    parallel: int = 1
    max_mode: int = 3
    seed: int | None = None
    fail_fast: bool = False
    report_format: str = "text"
    residual_terms: int = 4
    include_timings: bool = False
    mutation: str | None = None
    verbose: bool = False

    def conventions(self) -> Conventions:
        if self.mutation is None:
            return Conventions()
        return Conventions().mutated(self.mutation)
