"""Run a selection of identities and limits, serially or on a process pool.

Parameter draws are made up front from the suite seed, so the reports do not
depend on the number of workers.
"""
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from tqdm import tqdm
from edflow import get_logger

from ruijsenaars.errors import DomainError, RuijsenaarsException
from ruijsenaars.report import VerificationReport
from ruijsenaars.verify.catalog import CATALOG, entry_for, identity_ids, tolerance_for, verify_identity
from ruijsenaars.verify.limits import LIMITS, limit_ids, verify_limit

logger = get_logger(__name__)


@dataclass
class SuiteReport:
    seed: int
    reports: list = field(default_factory=list)
    independent: float = 1.0
    ms: float = 0.0

    @property
    def passed(self):
        return sum(r.passed for r in self.reports)

    @property
    def failed(self):
        return len(self.reports) - self.passed

    @property
    def ok(self):
        return self.failed == 0

    def to_dict(self):
        return {
            "seed": self.seed,
            "passed": self.passed,
            "failed": self.failed,
            "independent_fraction": round(self.independent, 4),
            "ms": round(self.ms, 3),
            "reports": [r.to_dict() for r in self.reports],
        }


def resolve_selection(selection=None, exclude=(), include_optional=False):
    """Ids to run, in catalog order: identities first, then limits."""
    known = identity_ids(include_optional=True) + limit_ids()
    if not selection:
        selection = identity_ids(include_optional=include_optional) + limit_ids()
    unknown = [s for s in list(selection) + list(exclude) if s not in known]
    if unknown:
        raise DomainError("unknown identity or limit: {}".format(", ".join(unknown)))
    chosen = set(selection) - set(exclude)
    return [i for i in known if i in chosen]


def _jobs(ids, seed, points):
    jobs = []
    for index, id in enumerate(ids):
        if id in LIMITS:
            jobs.append(("limit", id, None, 0))
            continue
        entry = entry_for(id)
        rng = np.random.RandomState([seed, index])
        for draw in range(points):
            params = dict(entry.defaults) if draw == 0 else entry.draw(rng)
            jobs.append(("identity", id, params, draw))
    return jobs


def _failure(kind, id, params, config, message, ms):
    family = "limit" if kind == "limit" else CATALOG[id].family
    return VerificationReport.failure(id, params or {}, tolerance_for(family, config), message, ms=ms)


def run_job(job, quad=None, tolerance=None, config=None):
    kind, id, params, draw = job
    start = time.time()
    try:
        if kind == "limit":
            report = verify_limit(id, tolerance=tolerance, config=config)
        else:
            report = verify_identity(id, params, quad=quad, tolerance=tolerance, config=config)
    except RuijsenaarsException as exc:
        logger.warning("{} raised {}: {}".format(id, type(exc).__name__, exc))
        report = _failure(kind, id, params, config, "{}: {}".format(type(exc).__name__, exc),
                          1000 * (time.time() - start))
    if kind == "identity":
        report.params["draw"] = draw
    return report


class _Job:
    def __init__(self, quad, tolerance, config):
        self.quad = quad
        self.tolerance = tolerance
        self.config = config

    def __call__(self, job):
        return run_job(job, self.quad, self.tolerance, self.config)


def run_suite(selection=None, workers=1, seed=0, points=1, exclude=(), include_optional=False, quad=None,
              tolerance=None, config=None, progress=True):
    """Verify the selected ids; ``points`` > 1 adds seeded draws around each identity's defaults."""
    if points < 1:
        raise DomainError("points must be positive")
    start = time.time()
    ids = resolve_selection(selection, exclude, include_optional)
    jobs = _jobs(ids, seed, points)
    logger.info("Running {} checks for {} ids with {} worker(s), seed {}".format(len(jobs), len(ids), workers, seed))
    run = _Job(quad, tolerance, config)
    bar = tqdm(total=len(jobs), desc="verify", file=sys.stderr, disable=not progress)
    reports = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            for report in executor.map(run, jobs):
                reports.append(report)
                bar.update(1)
    else:
        for job in jobs:
            reports.append(run(job))
            bar.update(1)
    bar.close()

    identities = [i for i in ids if i in CATALOG]
    independent = (sum(not CATALOG[i].shared for i in identities) / len(identities)) if identities else 1.0
    suite = SuiteReport(seed=seed, reports=reports, independent=independent, ms=1000 * (time.time() - start))
    logger.info("{} passed, {} failed".format(suite.passed, suite.failed))
    return suite
