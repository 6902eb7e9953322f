"""Bivariate copula families: densities, samplers, and latent-space transforms.

Three parametric families are supported:

* Gaussian, parameterized by Kendall's tau,
* Student t, parameterized by Kendall's tau and the degrees of freedom,
* symmetrized Joe-Clayton (SJC), parameterized by the upper and lower tail
  dependence coefficients.

Elliptical families convert tau to the copula correlation through
``rho = sin(0.5 * tau * pi)``.  The SJC copula is built from the Joe-Clayton
copula C_JC as ``0.5 * [C_JC(u, v | tU, tL) + C_JC(1-u, 1-v | tL, tU)
+ u + v - 1]``, and its density is the analytic mixed derivative of that
construction.

Every latent parameter map ("transform") sends the real line into the valid
parameter set: ``0.99 * (2 * Phi(f) - 1)`` for tau, ``1 + 1e6 * Phi(g)`` for
the degrees of freedom and ``0.01 + 0.98 * Phi(g)`` for tail dependence,
with Phi the standard normal cdf.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import gammaln, ndtr, ndtri, stdtr, stdtrit

from .errors import BoundaryError, LatentArityError, ParameterDomainError

__all__ = [
    "CopulaFamily",
    "CopulaParams",
    "clamp_unit",
    "copula_log_density",
    "log_density_grid",
    "copula_sample",
    "apply_transform",
    "transform_component",
    "inverse_transform",
    "tau_to_rho",
    "rho_to_tau",
]

UNIT_EPS = 1e-6        # unit-square inputs are clamped to [UNIT_EPS, 1 - UNIT_EPS]
TAU_SCALE = 0.99       # tau transform image is (-0.99, 0.99)
NU_SPAN = 1.0e6        # nu transform image is (1, 1 + 1e6)
NU_FLOOR = 1e-8        # keeps nu - 1 positive when the normal cdf underflows
TAIL_LO = 0.01         # tail transform image is (0.01, 0.99)
TAIL_SPAN = 0.98


class CopulaFamily(Enum):
    """Closed enumeration of the supported copula families."""

    GAUSSIAN = "gaussian"
    STUDENT_T = "student_t"
    SJC = "sjc"

    @property
    def param_count(self):
        return 1 if self is CopulaFamily.GAUSSIAN else 2

    @property
    def param_names(self):
        return {
            CopulaFamily.GAUSSIAN: ("tau",),
            CopulaFamily.STUDENT_T: ("tau", "nu"),
            CopulaFamily.SJC: ("tau_upper", "tau_lower"),
        }[self]

    @classmethod
    def from_tag(cls, tag):
        try:
            return cls(str(tag).lower())
        except ValueError:
            raise ParameterDomainError(f"unknown copula family {tag!r}") from None


def _validate_values(family, values):
    names = family.param_names
    if len(values) != len(names):
        raise ParameterDomainError(
            f"{family.value} takes {len(names)} parameters, got {len(values)}"
        )
    for name, value in zip(names, values):
        value = float(value)
        if not np.isfinite(value):
            raise ParameterDomainError(f"{name} must be finite, got {value!r}")
        if name == "tau" and not -1.0 < value < 1.0:
            raise ParameterDomainError(f"tau must lie in (-1, 1), got {value}")
        if name == "nu" and not value > 1.0:
            raise ParameterDomainError(f"nu must exceed 1, got {value}")
        if name.startswith("tau_") and not 0.0 < value < 1.0:
            raise ParameterDomainError(f"{name} must lie in (0, 1), got {value}")


@dataclass(frozen=True)
class CopulaParams:
    """Natural-space parameters of one copula family.

    Validity is enforced at construction: tau in (-1, 1), nu > 1, tail
    dependence coefficients in (0, 1).
    """

    family: CopulaFamily
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(x) for x in self.values))
        _validate_values(self.family, self.values)

    @classmethod
    def gaussian(cls, tau):
        return cls(CopulaFamily.GAUSSIAN, (tau,))

    @classmethod
    def student_t(cls, tau, nu):
        return cls(CopulaFamily.STUDENT_T, (tau, nu))

    @classmethod
    def sjc(cls, tau_upper, tau_lower):
        return cls(CopulaFamily.SJC, (tau_upper, tau_lower))

    def _get(self, name):
        names = self.family.param_names
        if name not in names:
            raise AttributeError(f"{self.family.value} copula has no parameter {name}")
        return self.values[names.index(name)]

    @property
    def tau(self):
        return self._get("tau")

    @property
    def nu(self):
        return self._get("nu")

    @property
    def tau_upper(self):
        return self._get("tau_upper")

    @property
    def tau_lower(self):
        return self._get("tau_lower")


def tau_to_rho(tau):
    """Map Kendall's tau to the elliptical-copula correlation sin(0.5*tau*pi)."""
    tau = np.asarray(tau, dtype=float)
    if np.any(np.abs(tau) >= 1.0):
        raise ParameterDomainError("tau must lie strictly inside (-1, 1)")
    rho = np.sin(0.5 * np.pi * tau)
    return float(rho) if rho.ndim == 0 else rho


def rho_to_tau(rho):
    """Inverse of :func:`tau_to_rho`."""
    rho = np.asarray(rho, dtype=float)
    if np.any(np.abs(rho) >= 1.0):
        raise ParameterDomainError("rho must lie strictly inside (-1, 1)")
    tau = 2.0 / np.pi * np.arcsin(rho)
    return float(tau) if tau.ndim == 0 else tau


def clamp_unit(x):
    """Clamp unit-interval values to [UNIT_EPS, 1 - UNIT_EPS]."""
    return np.clip(x, UNIT_EPS, 1.0 - UNIT_EPS)


# ---------------------------------------------------------------------------
# Log densities


def _gaussian_logpdf(u, v, tau):
    rho = np.sin(0.5 * np.pi * np.asarray(tau, dtype=float))
    x = ndtri(u)
    y = ndtri(v)
    one_m = 1.0 - rho * rho
    return -0.5 * np.log(one_m) - (rho * rho * (x * x + y * y) - 2.0 * rho * x * y) / (2.0 * one_m)


def _student_logpdf(u, v, tau, nu):
    nu = np.asarray(nu, dtype=float)
    rho = np.sin(0.5 * np.pi * np.asarray(tau, dtype=float))
    x = stdtrit(nu, u)
    y = stdtrit(nu, v)
    one_m = 1.0 - rho * rho
    quad = (x * x - 2.0 * rho * x * y + y * y) / one_m
    return (
        gammaln(0.5 * (nu + 2.0))
        + gammaln(0.5 * nu)
        - 2.0 * gammaln(0.5 * (nu + 1.0))
        - 0.5 * np.log(one_m)
        - 0.5 * (nu + 2.0) * np.log1p(quad / nu)
        + 0.5 * (nu + 1.0) * (np.log1p(x * x / nu) + np.log1p(y * y / nu))
    )


def _jc_shape(tau_upper, tau_lower):
    """Joe-Clayton shape parameters (kappa, gamma) from tail dependence."""
    tau_upper = np.asarray(tau_upper, dtype=float)
    tau_lower = np.asarray(tau_lower, dtype=float)
    kappa = 1.0 / np.log2(2.0 - tau_upper)
    gamma = -1.0 / np.log2(tau_lower)
    return kappa, gamma


def _jc_core(u, v, kappa, gamma):
    """Shared Joe-Clayton building blocks, computed in overflow-safe form.

    With ubar = 1-u, A = 1 - ubar**kappa, X = A**-gamma (and likewise B, Y
    for v), S = X + Y - 1, T = S**(-1/gamma), W = 1 - T, returns
    (log ubar, log vbar, log A, log B, log S, T, W).
    """
    log_ub = np.log1p(-u)
    log_vb = np.log1p(-v)
    a = -np.expm1(kappa * log_ub)
    b = -np.expm1(kappa * log_vb)
    log_a = np.log(a)
    log_b = np.log(b)
    log_x = -gamma * log_a
    log_y = -gamma * log_b
    big = np.maximum(log_x, log_y) > 700.0
    sm1 = np.expm1(np.minimum(log_x, 700.0)) + np.expm1(np.minimum(log_y, 700.0))
    lse = np.logaddexp(log_x, log_y)
    log_s = np.where(big, lse + np.log1p(-np.exp(-lse)), np.log1p(sm1))
    t = np.exp(-log_s / gamma)
    w = -np.expm1(-log_s / gamma)
    return log_ub, log_vb, log_a, log_b, log_s, t, w


def _jc_logpdf(u, v, tau_upper, tau_lower):
    kappa, gamma = _jc_shape(tau_upper, tau_lower)
    log_ub, log_vb, log_a, log_b, log_s, t, w = _jc_core(u, v, kappa, gamma)
    bracket = kappa * (1.0 + gamma) * w + (kappa - 1.0) * t
    return (
        (kappa - 1.0) * (log_ub + log_vb)
        - (gamma + 1.0) * (log_a + log_b)
        - (1.0 / gamma + 2.0) * log_s
        + (1.0 / kappa - 2.0) * np.log(w)
        + np.log(bracket)
    )


def _jc_cdf(u, v, tau_upper, tau_lower):
    kappa, gamma = _jc_shape(tau_upper, tau_lower)
    _, _, _, _, _, _, w = _jc_core(u, v, kappa, gamma)
    return -np.expm1(np.log(w) / kappa)


def _jc_du(u, v, tau_upper, tau_lower):
    """Partial derivative dC_JC/du, the conditional cdf of V given U=u."""
    kappa, gamma = _jc_shape(tau_upper, tau_lower)
    log_ub, _, log_a, _, log_s, _, w = _jc_core(u, v, kappa, gamma)
    log_d = (
        (kappa - 1.0) * log_ub
        - (gamma + 1.0) * log_a
        - (1.0 / gamma + 1.0) * log_s
        + (1.0 / kappa - 1.0) * np.log(w)
    )
    return np.exp(log_d)


def _sjc_logpdf(u, v, tau_upper, tau_lower):
    direct = _jc_logpdf(u, v, tau_upper, tau_lower)
    rotated = _jc_logpdf(1.0 - u, 1.0 - v, tau_lower, tau_upper)
    return np.logaddexp(direct, rotated) - np.log(2.0)


def _sjc_cdf(u, v, tau_upper, tau_lower):
    return 0.5 * (
        _jc_cdf(u, v, tau_upper, tau_lower)
        + _jc_cdf(1.0 - u, 1.0 - v, tau_lower, tau_upper)
        + u
        + v
        - 1.0
    )


def _sjc_cond_v_given_u(u, v, tau_upper, tau_lower):
    """Conditional cdf P(V <= v | U = u) of the SJC copula."""
    return 0.5 * (
        _jc_du(u, v, tau_upper, tau_lower)
        - _jc_du(1.0 - u, 1.0 - v, tau_lower, tau_upper)
        + 1.0
    )


def _check_interior(u, v):
    if np.any(u <= 0.0) or np.any(u >= 1.0) or np.any(v <= 0.0) or np.any(v >= 1.0):
        raise BoundaryError("unit-square coordinates must lie strictly inside (0, 1)")


def log_density_grid(family, u, v, theta):
    """Vectorized log-density with per-point parameter arrays.

    ``theta`` is a sequence of ``family.param_count`` arrays, broadcastable
    against ``u`` and ``v``.  Coordinates are clamped to the interior band;
    parameter validity is the caller's responsibility (used on transform
    output, which is valid by construction).
    """
    u = clamp_unit(np.asarray(u, dtype=float))
    v = clamp_unit(np.asarray(v, dtype=float))
    if len(theta) != family.param_count:
        raise LatentArityError(
            f"{family.value} takes {family.param_count} parameters, got {len(theta)}"
        )
    if family is CopulaFamily.GAUSSIAN:
        return _gaussian_logpdf(u, v, theta[0])
    if family is CopulaFamily.STUDENT_T:
        return _student_logpdf(u, v, theta[0], theta[1])
    return _sjc_logpdf(u, v, theta[0], theta[1])


def copula_log_density(params, u, v):
    """Log density of the copula at (u, v).

    Raises :class:`BoundaryError` for coordinates on the closed boundary;
    interior coordinates are clamped to [1e-6, 1 - 1e-6] before evaluation.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    _check_interior(u, v)
    out = log_density_grid(params.family, u, v, params.values)
    return float(out) if np.ndim(out) == 0 else out


def copula_density(params, u, v):
    """Density of the copula at (u, v)."""
    return np.exp(copula_log_density(params, u, v))


# ---------------------------------------------------------------------------
# Sampling


def copula_sample(params, count, seed):
    """Draw ``count`` i.i.d. pairs from the copula; deterministic given ``seed``.

    Returns an array of shape ``(count, 2)`` with both coordinates strictly
    inside the unit interval.
    """
    count = int(count)
    if count < 1:
        raise ParameterDomainError(f"count must be >= 1, got {count}")
    rng = np.random.default_rng(seed)
    family = params.family
    if family is CopulaFamily.GAUSSIAN:
        rho = tau_to_rho(params.tau)
        z = rng.standard_normal((count, 2))
        w = rho * z[:, 0] + np.sqrt(1.0 - rho * rho) * z[:, 1]
        u = ndtr(z[:, 0])
        v = ndtr(w)
    elif family is CopulaFamily.STUDENT_T:
        rho = tau_to_rho(params.tau)
        nu = params.nu
        z = rng.standard_normal((count, 2))
        w = rho * z[:, 0] + np.sqrt(1.0 - rho * rho) * z[:, 1]
        g = rng.chisquare(nu, size=count) / nu
        scale = 1.0 / np.sqrt(g)
        u = stdtr(nu, z[:, 0] * scale)
        v = stdtr(nu, w * scale)
    else:
        u = rng.uniform(size=count)
        target = rng.uniform(size=count)
        v = _sjc_conditional_ppf(u, target, params.tau_upper, params.tau_lower)
    return np.column_stack([clamp_unit(u), clamp_unit(v)])


def _sjc_conditional_ppf(u, prob, tau_upper, tau_lower, iterations=64):
    """Invert the SJC conditional cdf by bisection (interval below 1e-10)."""
    lo = np.full_like(u, UNIT_EPS)
    hi = np.full_like(u, 1.0 - UNIT_EPS)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        below = _sjc_cond_v_given_u(u, mid, tau_upper, tau_lower) < prob
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Latent transforms (real line -> valid parameter set)


def transform_component(family, index, latent):
    """Map the ``index``-th latent of ``family`` to its natural parameter."""
    latent = np.asarray(latent, dtype=float)
    name = family.param_names[index]
    p = ndtr(latent)
    if name == "tau":
        out = TAU_SCALE * (2.0 * p - 1.0)
    elif name == "nu":
        out = 1.0 + np.maximum(NU_SPAN * p, NU_FLOOR)
    else:
        out = TAIL_LO + TAIL_SPAN * p
    return float(out) if out.ndim == 0 else out


def apply_transform(family, latents):
    """Map a length-k latent vector to valid natural parameters."""
    latents = np.atleast_1d(np.asarray(latents, dtype=float))
    if latents.shape != (family.param_count,):
        raise LatentArityError(
            f"{family.value} needs {family.param_count} latents, got shape {latents.shape}"
        )
    values = tuple(transform_component(family, i, latents[i]) for i in range(len(latents)))
    return CopulaParams(family, values)


def inverse_transform(family, params):
    """Latent vector whose transform reproduces ``params`` (analytic inverse)."""
    probs = []
    for name, value in zip(family.param_names, params.values):
        if name == "tau":
            probs.append((value / TAU_SCALE + 1.0) / 2.0)
        elif name == "nu":
            probs.append((value - 1.0) / NU_SPAN)
        else:
            probs.append((value - TAIL_LO) / TAIL_SPAN)
    probs = np.clip(np.asarray(probs, dtype=float), 1e-16, 1.0 - 1e-16)
    return ndtri(probs)
