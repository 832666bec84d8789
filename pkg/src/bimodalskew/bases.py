"""Symmetric unit-variance base densities that the skewed families are built from.

Every base is standardized so that its variance equals one; the skewing and
tilting layers in :mod:`bimodalskew.families` then never need to renormalize
second moments.  Each base exposes its log density, its absolute moments
m_r = E|Z|^r, and exact samplers for |Z| and for the quadratically weighted
half-line density proportional to z^2 f(z) on z > 0 (where one is available
in closed form).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import betaln, gammaln

from .errors import CapabilityError, DomainError, ExistenceError

_LOG_2PI = float(np.log(2.0 * np.pi))
# z**2 overflows above ~1.3e154; switch to log-space asymptotics before that.
_HUGE = 1e150


def _validate_order(r: int) -> int:
    if not isinstance(r, (int, np.integer)) or r < 0:
        raise DomainError(f"moment order must be a nonnegative integer, got {r!r}")
    return int(r)


def gt_variance(p: float, q: float) -> float:
    """Variance of the unit-scale generalized-t density.

    The density is f(x) = p / (2 q^(1/p) B(1/p, q)) * (1 + |x|^p / q)^-(q + 1/p)
    and the variance is q^(2/p) * Gamma(3/p) Gamma(q - 2/p) / (Gamma(1/p) Gamma(q)),
    finite only for p*q > 2.
    """
    if p <= 0 or q <= 0:
        raise DomainError(f"generalized-t needs p > 0 and q > 0, got p={p}, q={q}")
    if p * q <= 2:
        raise DomainError(f"generalized-t variance needs p*q > 2, got p*q={p * q}")
    log_var = (
        (2.0 / p) * np.log(q)
        + gammaln(3.0 / p)
        + gammaln(q - 2.0 / p)
        - gammaln(1.0 / p)
        - gammaln(q)
    )
    return float(np.exp(log_var))


def gt_standard_scale(p: float, q: float) -> float:
    """Scale delta that gives the generalized-t density unit variance."""
    return 1.0 / np.sqrt(gt_variance(p, q))


def ep_standard_scale(p: float) -> float:
    """Scale phi giving the exponential-power kernel exp(-|x/phi|^p / 2) unit variance."""
    if p <= 0:
        raise DomainError(f"exponential-power tail must be positive, got p={p}")
    return float(np.exp(-0.5 * ((2.0 / p) * np.log(2.0) + gammaln(3.0 / p) - gammaln(1.0 / p))))


class NormalBase:
    """Standard normal base."""

    name = "normal"

    def log_pdf(self, z):
        z = np.asarray(z, dtype=float)
        return -0.5 * z * z - 0.5 * _LOG_2PI

    def moment_exists(self, r: int) -> bool:
        _validate_order(r)
        return True

    def abs_moment(self, r: int) -> float:
        r = _validate_order(r)
        return float(np.exp(0.5 * r * np.log(2.0) + gammaln(0.5 * (r + 1)) - 0.5 * np.log(np.pi)))

    def sample_abs(self, gen: np.random.Generator, size: int) -> np.ndarray:
        return np.abs(gen.standard_normal(size))

    def sample_abs_tilted(self, gen: np.random.Generator, size: int) -> np.ndarray:
        # z^2 exp(-z^2/2) on z > 0 is the chi(3) density.
        return np.sqrt(gen.chisquare(3, size))


@dataclass(frozen=True)
class StudentTBase:
    """Student-t rescaled to unit variance; requires nu > 2."""

    nu: float

    def __post_init__(self):
        if not self.nu > 2:
            raise DomainError(f"degrees of freedom must exceed 2, got nu={self.nu}")

    @property
    def name(self) -> str:
        return "student"

    def log_pdf(self, z):
        z = np.asarray(z, dtype=float)
        nu = self.nu
        zz = z * z
        with np.errstate(divide="ignore"):
            tail = np.where(
                zz < _HUGE,
                np.log1p(zz / (nu - 2.0)),
                2.0 * np.log(np.abs(z)) - np.log(nu - 2.0),
            )
        return (
            gammaln(0.5 * (nu + 1))
            - gammaln(0.5 * nu)
            - 0.5 * np.log(np.pi * (nu - 2.0))
            - 0.5 * (nu + 1) * tail
        )

    def moment_exists(self, r: int) -> bool:
        return _validate_order(r) < self.nu

    def abs_moment(self, r: int) -> float:
        r = _validate_order(r)
        if r >= self.nu:
            raise ExistenceError(f"E|Z|^{r} diverges for nu={self.nu} (needs r < nu)")
        nu = self.nu
        return float(
            np.exp(
                0.5 * r * np.log(nu - 2.0)
                + gammaln(0.5 * (r + 1))
                + gammaln(0.5 * (nu - r))
                - 0.5 * np.log(np.pi)
                - gammaln(0.5 * nu)
            )
        )

    def sample_abs(self, gen: np.random.Generator, size: int) -> np.ndarray:
        return np.abs(gen.standard_t(self.nu, size)) * np.sqrt((self.nu - 2.0) / self.nu)

    def sample_abs_tilted(self, gen: np.random.Generator, size: int) -> np.ndarray:
        raise CapabilityError(
            "no closed-form sampler for the z^2-weighted Student-t half density; "
            "draw through the gamma-mixture hierarchy instead"
        )


@dataclass(frozen=True)
class GenTBase:
    """Generalized-t rescaled to unit variance; requires p > 0, q > 0 and p*q > 2."""

    p: float
    q: float
    delta: float | None = None

    def __post_init__(self):
        if self.delta is None:
            object.__setattr__(self, "delta", gt_standard_scale(self.p, self.q))

    @property
    def name(self) -> str:
        return "gent"

    def log_pdf(self, z):
        z = np.asarray(z, dtype=float)
        p, q, delta = self.p, self.q, self.delta
        az = np.abs(z)
        with np.errstate(over="ignore"):
            w = (az / delta) ** p
        with np.errstate(divide="ignore", invalid="ignore"):
            tail = np.where(
                np.isfinite(w),
                np.log1p(w / q),
                p * (np.log(az) - np.log(delta)) - np.log(q),
            )
        return (
            np.log(p)
            - np.log(2.0)
            - np.log(delta)
            - np.log(q) / p
            - betaln(1.0 / p, q)
            - (q + 1.0 / p) * tail
        )

    def moment_exists(self, r: int) -> bool:
        return _validate_order(r) < self.p * self.q

    def abs_moment(self, r: int) -> float:
        r = _validate_order(r)
        p, q = self.p, self.q
        if r >= p * q:
            raise ExistenceError(f"E|Z|^{r} diverges for p={p}, q={q} (needs r < p*q)")
        return float(
            np.exp(
                r * np.log(self.delta)
                + (r / p) * np.log(q)
                + gammaln((r + 1.0) / p)
                + gammaln(q - r / p)
                - gammaln(1.0 / p)
                - gammaln(q)
            )
        )

    def sample_abs(self, gen: np.random.Generator, size: int) -> np.ndarray:
        # |Z/delta|^p / q is beta-prime(1/p, q), i.e. a ratio of gammas.
        g1 = gen.gamma(1.0 / self.p, 1.0, size)
        g2 = gen.gamma(self.q, 1.0, size)
        return self.delta * (self.q * g1 / g2) ** (1.0 / self.p)

    def sample_abs_tilted(self, gen: np.random.Generator, size: int) -> np.ndarray:
        raise CapabilityError(
            "no closed-form sampler for the z^2-weighted generalized-t half density; "
            "draw through the generalized-gamma hierarchy instead"
        )


@dataclass(frozen=True)
class ExpPowerBase:
    """Exponential-power kernel exp(-|z/scale|^p / 2); all moments finite.

    Not one of the public families: it appears as the conditional layer of the
    generalized-t mixture hierarchy, so its samplers carry an explicit scale.
    """

    p: float
    scale: float = 1.0

    def __post_init__(self):
        if self.p <= 0:
            raise DomainError(f"exponential-power tail must be positive, got p={self.p}")
        if self.scale <= 0:
            raise DomainError(f"scale must be positive, got {self.scale}")

    @property
    def name(self) -> str:
        return "exppower"

    def log_pdf(self, z):
        z = np.asarray(z, dtype=float)
        p, s = self.p, self.scale
        with np.errstate(over="ignore"):
            w = (np.abs(z) / s) ** p
        return (
            np.log(p)
            - np.log(s)
            - (1.0 + 1.0 / p) * np.log(2.0)
            - gammaln(1.0 / p)
            - 0.5 * w
        )

    def moment_exists(self, r: int) -> bool:
        _validate_order(r)
        return True

    def abs_moment(self, r: int) -> float:
        r = _validate_order(r)
        return float(
            self.scale**r
            * np.exp((r / self.p) * np.log(2.0) + gammaln((r + 1.0) / self.p) - gammaln(1.0 / self.p))
        )

    def sample_abs(self, gen: np.random.Generator, size: int) -> np.ndarray:
        # |Z/scale|^p ~ Gamma(1/p, rate 1/2).
        g = gen.gamma(1.0 / self.p, 2.0, size)
        return self.scale * g ** (1.0 / self.p)

    def sample_abs_tilted(self, gen: np.random.Generator, size: int) -> np.ndarray:
        # z^2-weighting shifts the gamma shape from 1/p to 3/p.
        g = gen.gamma(3.0 / self.p, 2.0, size)
        return self.scale * g ** (1.0 / self.p)
