import math
import time
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from edflow import get_logger

from ruijsenaars.errors import NumericalError
from ruijsenaars.numerics import richardson_limit

logger = get_logger(__name__)


def jsonable(value):
    """Convert parameter echoes (complex, numpy scalars, tuples) to JSON types."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        value = complex(value)
        if value.imag == 0.0:
            return _finite_or_none(value.real)
        return [_finite_or_none(value.real), _finite_or_none(value.imag)]
    if isinstance(value, (float, np.floating)):
        return _finite_or_none(float(value))
    return value


def _finite_or_none(x):
    return x if math.isfinite(x) else None


@dataclass
class VerificationReport:
    id: str
    params: dict
    lhs: complex
    rhs: complex
    abs_residual: float
    rel_residual: float
    tolerance: float
    passed: bool
    ms: float = 0.0
    warnings: list = field(default_factory=list)

    @classmethod
    def from_sides(cls, id, params, lhs, rhs, tolerance, scale=None, ms=0.0, warnings=None):
        lhs, rhs = complex(lhs), complex(rhs)
        abs_residual = abs(lhs - rhs)
        if scale is None:
            scale = max(abs(lhs), abs(rhs))
        rel_residual = abs_residual / scale if scale > 0 else abs_residual
        if not math.isfinite(rel_residual):
            rel_residual = math.inf
        return cls(id=id, params=dict(params), lhs=lhs, rhs=rhs,
                   abs_residual=abs_residual, rel_residual=rel_residual,
                   tolerance=tolerance, passed=bool(rel_residual <= tolerance),
                   ms=ms, warnings=list(warnings or []))

    @classmethod
    def failure(cls, id, params, tolerance, message, ms=0.0):
        nan = complex(math.nan, math.nan)
        return cls(id=id, params=dict(params), lhs=nan, rhs=nan,
                   abs_residual=math.inf, rel_residual=math.inf,
                   tolerance=tolerance, passed=False, ms=ms, warnings=[message])

    def to_dict(self):
        return {
            "id": self.id,
            "params": jsonable(self.params),
            "lhs": [_finite_or_none(self.lhs.real), _finite_or_none(self.lhs.imag)],
            "rhs": [_finite_or_none(self.rhs.real), _finite_or_none(self.rhs.imag)],
            "abs_residual": _finite_or_none(self.abs_residual),
            "rel_residual": _finite_or_none(self.rel_residual),
            "tolerance": self.tolerance,
            "pass": self.passed,
            "ms": round(self.ms, 3),
            "warnings": list(self.warnings),
        }


class Sides(NamedTuple):
    """Both sides of an identity and the scale its residual is measured against."""
    lhs: complex
    rhs: complex
    scale: float

    @classmethod
    def of(cls, lhs, rhs, *terms):
        """Scale is the largest modulus among the sides and any extra terms."""
        scale = max([abs(lhs), abs(rhs)] + [abs(t) for t in terms])
        return cls(complex(lhs), complex(rhs), float(scale))


def ratio_report(id, params, ratio, schedule, tolerance):
    """Extrapolate ratio(delta) along the schedule and compare the limit with 1.

    Numerical failures while sampling become a failing report.
    """
    start = time.time()
    echo = dict(params, deltas=list(schedule.deltas))
    try:
        samples = [(d, complex(ratio(d))) for d in schedule.deltas]
        result = richardson_limit(samples, schedule.order, log=schedule.log)
    except NumericalError as exc:
        logger.info("{} limit failed: {}".format(id, exc))
        return VerificationReport.failure(id, echo, tolerance, str(exc), ms=1000 * (time.time() - start))
    echo["diagnostics"] = {"observed_order": result.order, "spread": result.spread,
                          "ratios": [s[1] for s in samples]}
    warnings = list(result.warnings)
    if result.order < 1:
        warnings.append("observed order {:.2f} below 1".format(result.order))
    return VerificationReport.from_sides(id, echo, result.value, 1.0, tolerance,
                                         ms=1000 * (time.time() - start), warnings=warnings)
