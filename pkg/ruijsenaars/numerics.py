"""Quadrature, bilateral sums, extrapolation, finite differences and complex powers.

All integrators take vectorized callables: ``f`` receives a numpy array of
nodes and returns an array of the same shape.
"""
import math
import functools
from dataclasses import dataclass, replace
from typing import NamedTuple, Optional, Tuple

import numpy as np
from scipy import special
from edflow import get_logger
from edflow.util import retrieve

from ruijsenaars.errors import (DomainError, UnsupportedError, BranchError, DivergenceError,
                                EvaluationError, PrecisionError)

logger = get_logger(__name__)

CONTOUR_KINDS = ("vertical", "real", "shifted-vertical", "segment", "ray")
MAX_RADIUS_GROWTH = 8
CHUNK = 1 << 16


@dataclass(frozen=True)
class TailModel:
    kind: str
    value: float

    def __post_init__(self):
        if self.kind == "exponential":
            if not self.value > 0:
                raise DomainError("exponential tail needs a positive rate, got {}".format(self.value))
        elif self.kind == "power":
            if not self.value < -1:
                raise DomainError("power-law exponent {} does not give a convergent tail".format(self.value))
        else:
            raise DomainError("unknown tail model '{}'".format(self.kind))

    @classmethod
    def exponential(cls, rate):
        return cls("exponential", float(rate))

    @classmethod
    def power_law(cls, exponent):
        return cls("power", float(exponent))

    def bound(self, magnitude, radius):
        """Integral of the tail beyond `radius`, given its size there."""
        if self.kind == "exponential":
            return magnitude / self.value
        return magnitude * radius / (-self.value - 1.0)


@dataclass(frozen=True)
class QuadSpec:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_depth: int = 8
    tail: Optional[TailModel] = None

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if self.max_depth < 1:
            raise DomainError("max_depth must be a positive integer")

    @classmethod
    def from_config(cls, config):
        return cls(abs_tol=float(retrieve(config, "quad/abs_tol", default=cls.abs_tol)),
                   rel_tol=float(retrieve(config, "quad/rel_tol", default=cls.rel_tol)),
                   max_depth=int(retrieve(config, "quad/max_depth", default=cls.max_depth)))

    def tolerance(self, value):
        return max(self.abs_tol, self.rel_tol * abs(value))

    def with_tail(self, tail):
        return replace(self, tail=tail)

    def scaled(self, factor):
        return replace(self, abs_tol=self.abs_tol * factor, rel_tol=self.rel_tol * factor)


@dataclass(frozen=True)
class Contour:
    kind: str = "vertical"
    radius: float = 10.0
    nodes_per_unit: int = 8
    offset: float = 0.0
    a: complex = 0j
    b: complex = 1 + 0j
    direction: complex = -1j

    def __post_init__(self):
        if self.kind not in CONTOUR_KINDS:
            raise DomainError("unknown contour kind '{}'".format(self.kind))
        if not self.radius > 0:
            raise DomainError("truncation radius must be positive, got {}".format(self.radius))
        if not math.isfinite(self.offset):
            raise DomainError("contour offset must be finite")
        if self.nodes_per_unit < 1:
            raise DomainError("nodes_per_unit must be a positive integer")
        if self.kind == "segment" and self.a == self.b:
            raise DomainError("degenerate segment")
        if self.kind == "ray":
            if self.direction == 0:
                raise DomainError("ray needs a nonzero direction")
            object.__setattr__(self, "direction", complex(self.direction) / abs(self.direction))

    @classmethod
    def vertical(cls, radius=10.0, nodes_per_unit=8, offset=0.0):
        kind = "vertical" if offset == 0 else "shifted-vertical"
        return cls(kind=kind, radius=radius, nodes_per_unit=nodes_per_unit, offset=float(offset))

    @classmethod
    def real_line(cls, radius=10.0, nodes_per_unit=8, offset=0.0):
        return cls(kind="real", radius=radius, nodes_per_unit=nodes_per_unit, offset=float(offset))

    @classmethod
    def segment(cls, a, b, nodes_per_unit=8):
        return cls(kind="segment", a=complex(a), b=complex(b), nodes_per_unit=nodes_per_unit)

    @classmethod
    def ray(cls, start, direction, radius=10.0, nodes_per_unit=8):
        return cls(kind="ray", a=complex(start), direction=complex(direction), radius=radius,
                   nodes_per_unit=nodes_per_unit)

    @property
    def unit(self):
        """dz/dt of the unit-speed parametrization."""
        if self.kind in ("vertical", "shifted-vertical"):
            return 1j
        if self.kind == "real":
            return 1 + 0j
        if self.kind == "segment":
            return (self.b - self.a) / abs(self.b - self.a)
        return self.direction

    @property
    def open_ends(self):
        if self.kind == "segment":
            return ()
        if self.kind == "ray":
            return (1.0,)
        return (-1.0, 1.0)

    def bounds(self, radius):
        if self.kind == "segment":
            return 0.0, abs(self.b - self.a)
        if self.kind == "ray":
            return 0.0, radius
        return -radius, radius

    def point(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "vertical":
            return 1j * t
        if self.kind == "shifted-vertical":
            return self.offset + 1j * t
        if self.kind == "real":
            return t + 1j * self.offset
        return self.a + self.unit * t


@functools.lru_cache(maxsize=None)
def gauss_legendre(order=16):
    return np.polynomial.legendre.leggauss(order)


@functools.lru_cache(maxsize=None)
def gauss_jacobi(order, beta):
    """Nodes/weights on [-1, 1] for the weight (1 + x)**beta."""
    return special.roots_jacobi(order, 0.0, beta)


def panel_nodes(t0, t1, n_panels, order=16):
    """Composite Gauss-Legendre rule on [t0, t1] with equal panels."""
    x, w = gauss_legendre(order)
    edges = np.linspace(t0, t1, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def evaluate(f, z):
    """Evaluate a vectorized integrand and reject non-finite values."""
    z = np.asarray(z)
    with np.errstate(all="ignore"):
        values = np.asarray(f(z), dtype=complex)
    values = np.broadcast_to(values, z.shape)
    bad = ~np.isfinite(values)
    if bad.any():
        node = np.ravel(z)[int(np.argmax(np.ravel(bad)))]
        raise EvaluationError("integrand is not finite at node {}".format(node), node=node)
    return values


def _panel_sum(f, contour, t0, t1, n_panels):
    nodes, weights = panel_nodes(t0, t1, n_panels)
    total = 0j
    for start in range(0, nodes.size, CHUNK):
        t = nodes[start:start + CHUNK]
        total += np.sum(weights[start:start + CHUNK] * evaluate(f, contour.point(t)))
    return total * contour.unit


def _refine(f, contour, radius, quad):
    t0, t1 = contour.bounds(radius)
    n_panels = max(2, int(math.ceil((t1 - t0) * contour.nodes_per_unit / 16.0)))
    coarse = _panel_sum(f, contour, t0, t1, n_panels)
    for depth in range(quad.max_depth):
        n_panels *= 2
        fine = _panel_sum(f, contour, t0, t1, n_panels)
        error = abs(fine - coarse)
        if error <= 0.5 * quad.tolerance(fine):
            return fine, error
        logger.debug("refining {} contour: {} panels, change {:.3e}".format(contour.kind, n_panels, error))
        coarse = fine
    raise DivergenceError("line integral did not converge after {} refinements".format(quad.max_depth),
                          estimates=(coarse, fine))


def _tail(f, contour, radius, quad):
    """Estimate of the integral beyond the truncation radius.

    With ``quad.tail`` it is the model bound from the integrand modulus at the
    ends; without one, |f| is integrated over one more panel [R, 2R] past each
    open end.
    """
    ends = contour.open_ends
    if not ends:
        return 0.0
    if quad.tail is None:
        n_panels = max(2, int(math.ceil(radius * contour.nodes_per_unit / 16.0)))
        magnitude = lambda z: np.abs(f(z))
        tail = sum(abs(_panel_sum(magnitude, contour, *sorted((s * radius, 2 * s * radius)), n_panels=n_panels))
                   for s in ends)
        logger.debug("{} contour: |f| integrates to {:.3e} over [R, 2R], R = {:.3g}".format(
            contour.kind, tail, radius))
        return float(tail)
    t = np.array([s * radius for s in ends])
    magnitudes = np.abs(evaluate(f, contour.point(t)))
    return float(sum(quad.tail.bound(m, radius) for m in magnitudes))


def integrate_line(f, contour, quad=None):
    """Integrate f(z) dz along a contour; returns (value, error estimate).

    The error estimate combines the change under panel doubling with the
    tail estimate beyond the truncation radius, which is grown until that
    estimate is below the tolerance.
    """
    quad = quad if quad is not None else QuadSpec()
    radius = contour.radius
    estimates = []
    for growth in range(MAX_RADIUS_GROWTH):
        value, error = _refine(f, contour, radius, quad)
        estimates.append(value)
        tail = _tail(f, contour, radius, quad)
        if tail <= 0.25 * quad.tolerance(value):
            return value, error + tail
        logger.debug("growing truncation radius {:.3g} (tail {:.3e})".format(radius, tail))
        radius *= 1.5
    raise DivergenceError("integrand tail stays above tolerance up to radius {:.3g}".format(radius),
                          estimates=estimates[-2:])


@dataclass(frozen=True)
class CylinderDomain:
    """R x [a, a+1] truncated to |tau1| < T.

    ``singularities`` are points (tau1, tau2) near which the integrand
    behaves like rho**exponent; they are integrated on polar patches.
    """
    T: float
    a: float = 0.0
    singularities: Tuple[Tuple[float, float], ...] = ()
    exponent: float = 0.0

    def __post_init__(self):
        if not self.T > 0:
            raise DomainError("cylinder half-length must be positive")
        if not self.exponent > -2:
            raise DomainError("singular exponent {} is not integrable in 2D".format(self.exponent))


def _smooth_step(x):
    x = np.clip(x, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        up = np.where(x > 0, np.exp(-1.0 / np.where(x > 0, x, 1.0)), 0.0)
        down = np.where(x < 1, np.exp(-1.0 / np.where(x < 1, 1.0 - x, 1.0)), 0.0)
    return up / (up + down)


def _bump(rho, radius):
    return _smooth_step(2.0 - 2.0 * rho / radius)


def _periodic_offset(t2, s2):
    return np.mod(t2 - s2 + 0.5, 1.0) - 0.5


def _patch_radius(domain):
    points = domain.singularities
    closest = 0.5
    for i, (s1, s2) in enumerate(points):
        for u1, u2 in points[i + 1:]:
            d = math.hypot(s1 - u1, float(_periodic_offset(np.array(u2), s2)))
            closest = min(closest, d)
    radius = min(0.25, 0.45 * closest)
    if radius < 1e-3:
        raise UnsupportedError("singular points of the cylinder integrand nearly coincide")
    # snap to a power of two so the grid is locally constant in the parameters
    return 2.0 ** math.floor(math.log2(radius))


def _cylinder_sum(f, domain, level):
    radius = _patch_radius(domain) if domain.singularities else 0.25
    h = radius / 8.0 / 2 ** level
    n2 = int(math.ceil(1.0 / h))
    h2 = 1.0 / n2
    n1 = int(math.floor(domain.T / h))
    tau1 = h * np.arange(-n1, n1 + 1)
    # trapezoid in tau1 with the end cells stretched to reach +-T
    cell = np.full(tau1.size, h)
    cell[[0, -1]] = 0.5 * h + (domain.T - n1 * h)
    tau2 = domain.a + h2 * np.arange(n2)
    rows = max(1, CHUNK // n2)
    total = 0j
    for start in range(0, tau1.size, rows):
        t1, t2 = np.meshgrid(tau1[start:start + rows], tau2, indexing="ij")
        weight = np.ones_like(t1)
        for s1, s2 in domain.singularities:
            weight -= _bump(np.hypot(t1 - s1, _periodic_offset(t2, s2)), radius)
        weight *= cell[start:start + rows, None]
        mask = weight > 0
        if mask.any():
            values = evaluate(lambda z: f(z.real, z.imag), t1[mask] + 1j * t2[mask])
            total += np.sum(weight[mask] * values)
    total *= h2

    p = domain.exponent
    n_rho, n_theta = 16 * 2 ** level, 32 * 2 ** level
    x, w = gauss_jacobi(n_rho, p + 1.0)
    rho = 0.5 * radius * (1.0 + x)
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    for s1, s2 in domain.singularities:
        r, th = np.meshgrid(rho, theta, indexing="ij")
        values = evaluate(lambda z: f(z.real, z.imag), (s1 + r * np.cos(th)) + 1j * (s2 + r * np.sin(th)))
        ring = values.sum(axis=1) * (2 * np.pi / n_theta)
        total += (0.5 * radius) ** (p + 2.0) * np.sum(w * rho ** (-p) * _bump(rho, radius) * ring)
    return total


def check_periodicity(f, domain, tol):
    samples = np.linspace(-0.5 * domain.T, 0.5 * domain.T, 9) + 0.0123
    start = evaluate(lambda z: f(z.real, z.imag), samples + 1j * domain.a)
    end = evaluate(lambda z: f(z.real, z.imag), samples + 1j * (domain.a + 1.0))
    scale = max(float(np.max(np.abs(start))), 1e-300)
    mismatch = float(np.max(np.abs(start - end))) / scale
    if mismatch > 10 * tol:
        raise BranchError("cylinder integrand is not 1-periodic in tau2 (mismatch {:.3e})".format(mismatch))
    return mismatch


def integrate_cylinder(f, domain, quad=None, level=None):
    """Integrate f(tau1, tau2) over the truncated cylinder; returns (value, error).

    With ``level`` the resolution is fixed (no adaptation), which keeps the
    result smooth in parameters for finite differencing.
    """
    quad = quad if quad is not None else QuadSpec(abs_tol=1e-6, rel_tol=1e-4, max_depth=3)
    check_periodicity(f, domain, quad.rel_tol)
    if level is not None:
        coarse = _cylinder_sum(f, domain, level)
        fine = _cylinder_sum(f, domain, level + 1)
        return fine, abs(fine - coarse)
    coarse = _cylinder_sum(f, domain, 0)
    for level in range(1, min(quad.max_depth, 4) + 1):
        fine = _cylinder_sum(f, domain, level)
        error = abs(fine - coarse)
        if error <= 0.5 * quad.tolerance(fine):
            return fine, error
        coarse = fine
    raise DivergenceError("cylinder integral did not converge", estimates=(coarse, fine))


def _fit_tail(magnitudes, distance):
    """Bound the remaining one-sided tail from the last sampled magnitudes."""
    last = np.asarray(magnitudes[-4:], dtype=float)
    if np.all(last == 0):
        return 0.0, None
    if np.any(last == 0):
        return float(last.max()), None
    ratios = last[1:] / last[:-1]
    if ratios.max() < 0.95:
        r = float(ratios.max())
        return float(last[-1] * r / (1.0 - r)), None
    k = np.asarray(distance[-4:], dtype=float)
    slope = float(np.polyfit(np.log(k), np.log(last), 1)[0])
    if slope >= -1.0:
        return math.inf, slope
    return float(last[-1] * k[-1] / (-slope - 1.0)), slope


def sum_bilateral(term, eps=0.0, quad=None, center=0, max_terms=400, min_terms=4):
    """Sum term(k) over k in Z + eps, outward from `center`; returns (value, error)."""
    if eps not in (0, 0.5):
        raise DomainError("lattice offset must be 0 or 1/2, got {}".format(eps))
    quad = quad if quad is not None else QuadSpec(abs_tol=1e-8, rel_tol=1e-6)
    total = 0j
    up, down, dist = [], [], []
    previous = None
    slope_up = slope_down = None
    tail = math.inf
    for j in range(max_terms):
        k_up = center + eps + j
        k_down = center + eps - 1 - j
        t_up, t_down = complex(term(k_up)), complex(term(k_down))
        if not (np.isfinite(t_up) and np.isfinite(t_down)):
            raise EvaluationError("summand is not finite near k={}".format(k_up), node=k_up)
        previous = total
        total += t_up + t_down
        up.append(abs(t_up))
        down.append(abs(t_down))
        dist.append(j + 1.0)
        if j + 1 < min_terms:
            continue
        tail_up, slope_up = _fit_tail(up, dist)
        tail_down, slope_down = _fit_tail(down, dist)
        tail = tail_up + tail_down
        if tail <= 0.5 * quad.tolerance(total):
            return total, tail
    slopes = [s for s in (slope_up, slope_down) if s is not None]
    if slopes and max(slopes) >= -1.0:
        raise DivergenceError("summand decays like |k|^{:.2f}; the series does not converge".format(max(slopes)),
                              estimates=(previous, total))
    raise DivergenceError("bilateral sum not converged after {} terms (tail {:.3e})".format(2 * max_terms, tail),
                          estimates=(previous, total))


class Extrapolation(NamedTuple):
    value: complex
    order: float
    warnings: tuple = ()
    spread: float = 0.0


def _limit_basis(deltas, log, columns):
    basis = [np.ones_like(deltas)]
    power = 1
    while len(basis) < columns:
        if log:
            basis.append(deltas ** power * np.log(deltas))
        basis.append(deltas ** power)
        power += 1
    return np.stack(basis[:columns], axis=1).astype(complex)


def _fit_limit(deltas, values, order, log):
    columns = min(len(deltas), 2 * order + 3) if log else order + 1
    # in units of the coarsest delta
    coeffs = np.linalg.lstsq(_limit_basis(deltas / deltas[0], log, columns), values, rcond=None)[0]
    return complex(coeffs[0])


def richardson_limit(samples, order=1, log=False):
    """Extrapolate values v(delta) to delta = 0.

    Without ``log`` the fit is a polynomial of degree `order`. With ``log``
    the basis is 1, delta log delta, delta, delta^2 log delta, delta^2, ...
    with as many columns as samples (at most 2 order + 3), which covers
    limits approached like delta log delta. ``samples`` is a sequence of
    (delta, value) with delta strictly decreasing. The observed order is the
    mean slope of log|v - limit| against log delta, with the residuals
    divided by |log delta| in the ``log`` case. ``spread`` is the change of
    the limit when the coarsest sample is dropped.
    """
    needed = 2 * order + 1 if log else order + 2
    if len(samples) < needed:
        raise DomainError("need at least {} samples for order {}".format(needed, order))
    deltas = np.array([s[0] for s in samples], dtype=float)
    values = np.array([s[1] for s in samples], dtype=complex)
    if np.any(deltas <= 0) or np.any(np.diff(deltas) >= 0):
        raise DomainError("deltas must be positive and strictly decreasing")
    limit = _fit_limit(deltas, values, order, log)
    spread = 0.0
    if len(samples) > needed:
        spread = abs(_fit_limit(deltas[1:], values[1:], order, log) - limit)

    residuals = np.abs(values - limit)
    warnings = []
    floor = 1e-13 * max(1.0, abs(limit))
    if np.all(residuals <= floor):
        return Extrapolation(limit, math.inf, (), spread)
    scaled = residuals / np.maximum(1.0, np.abs(np.log(deltas))) if log else residuals
    slopes = [math.log(scaled[i] / scaled[i + 1]) / math.log(deltas[i] / deltas[i + 1])
              for i in range(len(deltas) - 1)
              if residuals[i] > floor and residuals[i + 1] > floor]
    observed = float(np.mean(slopes)) if slopes else math.inf
    if np.any(np.diff(residuals) >= 0):
        warnings.append("non-monotone residuals: extrapolation unreliable")
    return Extrapolation(limit, observed, tuple(warnings), spread)


DIRECTIONS = ("z", "zbar", "alpha", "beta")


def _stencil(f, p, h, direction, order):
    if order == 1:
        fa = (f(p + h) - f(p - h)) / (2 * h)
        fb = (f(p + 1j * h) - f(p - 1j * h)) / (2 * h)
        return {"alpha": fa, "beta": fb, "z": 0.5 * (fa - 1j * fb), "zbar": 0.5 * (fa + 1j * fb)}[direction]
    f0 = f(p)
    if direction == "alpha":
        return (f(p + h) - 2 * f0 + f(p - h)) / h ** 2
    fbb = (f(p + 1j * h) - 2 * f0 + f(p - 1j * h)) / h ** 2
    if direction == "beta":
        return fbb
    faa = (f(p + h) - 2 * f0 + f(p - h)) / h ** 2
    fab = (f(p + h + 1j * h) - f(p + h - 1j * h) - f(p - h + 1j * h) + f(p - h - 1j * h)) / (4 * h ** 2)
    sign = -1 if direction == "z" else 1
    return 0.25 * (faa + 2j * sign * fab - fbb)


def central_derivative(f, point, direction="z", order=1, step=1e-3, return_error=False):
    """Central difference in the real coordinates (alpha, beta) of point = alpha + i beta.

    Wirtinger directions use d/dz = (d/dalpha - i d/dbeta)/2 and
    d/dzbar = (d/dalpha + i d/dbeta)/2. One Richardson step with h and h/2.
    """
    if direction not in DIRECTIONS:
        raise DomainError("unknown derivative direction '{}'".format(direction))
    if order not in (1, 2):
        raise DomainError("only first and second derivatives are supported")
    point = complex(point)
    floor = (1e-9 if order == 1 else 1e-6) * max(1.0, abs(point))
    if step < floor:
        raise PrecisionError("step {:.1e} is below the rounding-noise floor {:.1e}".format(step, floor))
    coarse = _stencil(f, point, step, direction, order)
    fine = _stencil(f, point, 0.5 * step, direction, order)
    value = (4 * fine - coarse) / 3
    if return_error:
        return value, abs(fine - coarse) / 3
    return value


def _is_conjugate_pair(w, wp):
    return np.abs(wp - np.conj(w)) <= 1e-13 * (1.0 + np.abs(w))


def pow_pair(w, wp, rho, rhop, path=None):
    """exp(rho log w + rhop log wp) with matched branches.

    For a conjugate pair with rho - rhop integral the value is the
    single-valued |w|**(rho + rhop) (w/|w|)**(rho - rhop). Otherwise logs
    are principal, or continued along ``path``, a sequence of (w, wp) base
    points ending near the target.
    """
    w = np.asarray(w, dtype=complex)
    wp = np.asarray(wp, dtype=complex)
    if np.any(w == 0) or np.any(wp == 0):
        raise BranchError("complex power of zero base")
    diff = complex(rho) - complex(rhop)
    m = round(diff.real)
    integral = abs(diff - m) < 1e-12
    if path is not None:
        if w.ndim or wp.ndim:
            raise DomainError("path continuation takes scalar bases")
        points = np.asarray(list(path), dtype=complex).reshape(-1, 2)
        log_w = _continued_log(np.append(points[:, 0], w))
        log_wp = _continued_log(np.append(points[:, 1], wp))
        return complex(np.exp(rho * log_w + rhop * log_wp))
    with np.errstate(all="ignore"):
        principal = np.exp(rho * np.log(w) + rhop * np.log(wp))
        if integral:
            modulus = np.abs(w)
            single = np.exp((rho + rhop) * np.log(modulus)) * (w / modulus) ** m
            principal = np.where(_is_conjugate_pair(w, wp), single, principal)
    return principal if principal.ndim else complex(principal)


def _continued_log(points):
    if np.any(np.abs(points) < 1e-300):
        raise BranchError("base of a complex power crosses zero along the path")
    angles = np.unwrap(np.angle(points))
    if np.any(np.abs(np.diff(angles)) > 0.5 * np.pi):
        raise BranchError("path too coarse to continue the logarithm")
    return np.log(np.abs(points[-1])) + 1j * angles[-1]


COMPANION_RULES = ("even", "odd", "nearest", None)
# default deltas; alpha / delta is an even integer for alpha = 0.3 all along EVEN_GEOMETRIC
GEOMETRIC = (0.04, 0.02, 0.01, 0.005, 0.0025)
EVEN_GEOMETRIC = (0.03, 0.015, 0.0075, 0.00375)


@dataclass(frozen=True)
class LimitSchedule:
    """Decreasing deltas with the companion-integer rule delta -> N.

    ``log`` extrapolates with delta log delta terms in the basis.
    """
    deltas: Tuple[float, ...]
    order: int = 1
    rule: Optional[str] = None
    alpha: float = 0.0
    log: bool = True

    def __post_init__(self):
        deltas = tuple(float(d) for d in self.deltas)
        object.__setattr__(self, "deltas", deltas)
        if len(deltas) < 3:
            raise DomainError("a limit schedule needs at least 3 deltas")
        if any(d <= 0 for d in deltas) or any(b >= a for a, b in zip(deltas, deltas[1:])):
            raise DomainError("schedule deltas must be positive and strictly decreasing")
        if self.rule not in COMPANION_RULES:
            raise DomainError("unknown companion rule '{}'".format(self.rule))
        if self.order < 1:
            raise DomainError("extrapolation order must be positive")
        if self.log and len(deltas) < 2 * self.order + 1:
            raise DomainError("a logarithmic fit of order {} needs at least {} deltas".format(
                self.order, 2 * self.order + 1))

    def companion(self, delta):
        ratio = self.alpha / delta + 1e-9
        if self.rule == "even":
            return 2 * int(math.floor(ratio / 2.0))
        if self.rule == "odd":
            return 2 * int(math.floor((ratio - 1) / 2.0)) + 1
        if self.rule == "nearest":
            return int(round(ratio))
        return 0

    def effective_alpha(self, delta):
        return self.companion(delta) * delta

    def require_even(self):
        if self.rule == "odd":
            raise UnsupportedError("odd companion integers are not supported for this limit")
