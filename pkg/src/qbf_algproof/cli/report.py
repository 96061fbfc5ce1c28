from typing import Any

from pydantic import BaseModel, Field

from ..constants import VerdictEnum
from ..cert import Measures
from ..proofs import ProofMeasures


_EXIT_OK = (VerdictEnum.ACCEPTED, VerdictEnum.FEASIBLE, VerdictEnum.WINNING, VerdictEnum.WRITTEN)


class Report(BaseModel):
    """Outcome of one CLI command, printed as `key: value` lines.

    Timings are only present when requested, so that default output is byte-stable.
    """

    command: str
    verdict: VerdictEnum
    measures: dict[str, int] = Field(default_factory=dict)
    details: dict[str, str] = Field(default_factory=dict)
    counterexample: dict[int, int] | None = Field(default=None)
    error: str | None = Field(default=None)
    timings: dict[str, float] | None = Field(default=None)
    artifact: str | None = Field(default=None, exclude=True)

    @property
    def exit_code(self) -> int:
        return 0 if self.verdict in _EXIT_OK else 1

    def add_measures(self, measures: Measures | ProofMeasures) -> None:
        self.measures.update(measures.model_dump())

    def to_text(self) -> str:
        _lines = [f"command: {self.command}", f"verdict: {self.verdict.value}"]
        for _key, _value in self.measures.items():
            _lines.append(f"{_key}: {_value}")

        for _key, _value in self.details.items():
            _lines.append(f"{_key}: {_value}")

        if self.counterexample is not None:
            _bits = " ".join(f"{_var}={_bit}" for _var, _bit in sorted(self.counterexample.items()))
            _lines.append(f"counterexample: {_bits}")

        if self.error:
            _lines.append(f"error: {self.error}")

        if self.timings:
            for _key, _value in self.timings.items():
                _lines.append(f"time.{_key}: {_value:.6f}")

        return "\n".join(_lines) + "\n"

    def to_data(self) -> dict[str, Any]:
        return self.model_dump(mode="json", exclude_none=True)


__all__ = [
    "Report",
]
