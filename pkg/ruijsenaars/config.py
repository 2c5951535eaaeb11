import os
import copy

import yaml
from edflow import get_logger

from ruijsenaars.errors import DomainError

logger = get_logger(__name__)

DEFAULTS = {
    "periods": {"w1": 1.0, "w2": 2.0 ** 0.5},
    "seed": 0,
    "workers": 1,
    "quad": {"abs_tol": 1e-10, "rel_tol": 1e-8, "max_depth": 8, "nodes_per_unit": 8},
    "tolerances": {
        "gamma": 1e-9,
        "representation": 1e-8,
        "identity": 1e-6,
        "product": 1e-5,
        "euler": 1e-5,
        "differential": 1e-4,
        "phase": 1e-8,
        "pairing": 1e-5,
        "limit": 1e-3,
        "q_commutativity": 1e-2,
        "positivity": 1e-10,
    },
    "limits": {},
}

# sections whose keys are free-form (keyed by limit id)
OPEN_SECTIONS = ("limits",)

DEFAULTS_PATH = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
                             "configs", "defaults.yaml")


def _merge(base, override, prefix=""):
    for key, value in override.items():
        if key not in base and prefix.rstrip("/") not in OPEN_SECTIONS:
            raise DomainError("unknown config key '{}{}'".format(prefix, key))
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            _merge(base[key], value, prefix="{}{}/".format(prefix, key))
        else:
            base[key] = value
    return base


def _read_yaml(path):
    with open(path, "r") as f:
        content = yaml.safe_load(f)
    if content is None:
        return {}
    if not isinstance(content, dict):
        raise DomainError("config file {} must hold a mapping".format(path))
    return content


def load_config(path=None):
    config = copy.deepcopy(DEFAULTS)
    if os.path.exists(DEFAULTS_PATH):
        _merge(config, _read_yaml(DEFAULTS_PATH))
    path = path if path is not None else os.environ.get("RUIJSENAARS_CONFIG")
    if path:
        logger.info("Reading config overrides from {}".format(path))
        _merge(config, _read_yaml(path))
    return config


def tolerance_override():
    """Tolerance forced through RUIJSENAARS_TOLERANCE, or None."""
    value = os.environ.get("RUIJSENAARS_TOLERANCE")
    if value is None or value == "":
        return None
    try:
        tol = float(value)
    except ValueError:
        raise DomainError("RUIJSENAARS_TOLERANCE must be a float, got '{}'".format(value))
    if not tol > 0:
        raise DomainError("RUIJSENAARS_TOLERANCE must be positive")
    return tol
