from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from metric_invariants.utils.constants import (
    DEFAULT_FORMAT,
    DEFAULT_PRIME_COUNT,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    SEED_LIMIT,
)

OutputFormat = Literal["table", "json", "csv"]


class RunConfig(BaseModel):
    """Resolved settings of one CLI invocation; embedded in every JSON output."""

    subcommand: str
    n: Optional[int] = None
    r: Optional[int] = None
    signature: Optional[tuple[int, int]] = None
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    prime_count: int = DEFAULT_PRIME_COUNT
    format: OutputFormat = DEFAULT_FORMAT
    paranoid: bool = False
    point: Optional[str] = None
    curvature: Optional[str] = None
    flat: bool = False
    out: Optional[str] = None
    nmax: Optional[int] = None
    rmax: Optional[int] = None
    workers: int = Field(default=1, ge=1)
    signature_mix: bool = False

    @field_validator("n", "nmax")
    @classmethod
    def _positive_dimension(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and value < 1:
            raise ValueError("dimension must be at least 1")
        return value

    @field_validator("r", "rmax")
    @classmethod
    def _nonnegative_order(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and value < 0:
            raise ValueError("order must be non-negative")
        return value

    @field_validator("trials", "prime_count")
    @classmethod
    def _at_least_one(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be at least 1")
        return value

    @field_validator("seed")
    @classmethod
    def _seed_range(cls, value: int) -> int:
        if not 0 <= value < SEED_LIMIT:
            raise ValueError("seed must lie in [0, 2**64)")
        return value

    @model_validator(mode="after")
    def _signature_matches(self) -> "RunConfig":
        if self.signature is not None:
            if min(self.signature) < 0:
                raise ValueError("signature entries must be non-negative")
            if self.n is not None and sum(self.signature) != self.n:
                raise ValueError(f"signature {self.signature} does not sum to n = {self.n}")
        return self

    def resolved(self) -> "RunConfig":
        """Copy with the signature defaulted to (n, 0)."""
        if self.signature is None and self.n is not None:
            return self.model_copy(update={"signature": (self.n, 0)})
        return self.model_copy()
