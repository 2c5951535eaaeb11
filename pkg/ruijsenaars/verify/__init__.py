from ruijsenaars.verify.catalog import CATALOG, verify_identity
from ruijsenaars.verify.limits import LIMITS, verify_limit
from ruijsenaars.verify.runner import SuiteReport, run_suite
