"""Pinned jet points for commands: --point FILE, --curvature FILE or --flat."""

import json
import logging
from pathlib import Path
from typing import Any, Optional

from metric_invariants.config import RunConfig
from metric_invariants.core.errors import (
    DimensionMismatchError,
    InvalidPointFileError,
    OrderMismatchError,
)
from metric_invariants.counting.sampling import flat_point
from metric_invariants.geometry.curvature import (
    CurvatureTensor,
    flat_metric,
    three_jet_from_curvature,
    two_jet_from_curvature,
)
from metric_invariants.jets.jetspace import MetricJetPoint

logger = logging.getLogger(__name__)


def read_json(path: str) -> Any:
    """Decode a JSON file; OSError propagates, malformed JSON becomes InvalidPointFileError."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidPointFileError(f"{path}: malformed JSON ({exc.msg})") from exc


def _check_against_flags(point: MetricJetPoint, config: RunConfig) -> None:
    if config.n is not None and config.n != point.n:
        raise DimensionMismatchError(f"--n {config.n} but the point has dimension {point.n}")
    if config.r is not None and config.r != point.r:
        raise OrderMismatchError(f"--r {config.r} but the point has order {point.r}")
    if config.signature is not None and tuple(config.signature) != point.signature:
        raise DimensionMismatchError(
            f"--signature {tuple(config.signature)} but the point has {point.signature}"
        )


def load_point(path: str, config: RunConfig) -> MetricJetPoint:
    point = MetricJetPoint.from_json(read_json(path))
    _check_against_flags(point, config)
    logger.info("loaded a %d-jet point of dimension %d from %s", point.r, point.n, path)
    return point


def load_curvature(path: str) -> CurvatureTensor:
    return CurvatureTensor.from_json(read_json(path))


def point_from_curvature(
    R: CurvatureTensor, signature: tuple[int, int], r: int
) -> MetricJetPoint:
    """Normal-coordinate jet seeded by R; orders above 3 have no geometric expansion."""
    if sum(signature) != R.n:
        raise DimensionMismatchError(f"signature {signature} for a curvature of dimension {R.n}")
    g0 = flat_metric(signature)
    if r <= 2:
        return two_jet_from_curvature(g0, R).truncate(r)
    if r == 3:
        return three_jet_from_curvature(g0, R)
    raise OrderMismatchError("curvature seeds jets of order at most 3")


def pinned_point(config: RunConfig) -> Optional[tuple[str, MetricJetPoint]]:
    """The point selected by the flags, with a description, or None to sample."""
    if config.point:
        return f"file {config.point}", load_point(config.point, config)
    if config.curvature:
        R = load_curvature(config.curvature)
        if config.n is not None and config.n != R.n:
            raise DimensionMismatchError(f"--n {config.n} but the curvature has dimension {R.n}")
        signature = tuple(config.signature) if config.signature else (R.n, 0)
        r = 2 if config.r is None else config.r
        return f"curvature {config.curvature}", point_from_curvature(R, signature, r)
    if config.flat:
        return "flat", flat_point(config.n, tuple(config.signature), config.r)
    return None
