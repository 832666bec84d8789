"""Independent validation machinery for the distribution identities.

Everything here exists to cross-check the closed-form code in `families` and
the samplers in `sampling` by a second route: adaptive Gauss-Kronrod
quadrature (self-contained, deliberately not sharing the library CDF's
integration code), numeric marginalization of the scale-mixture hierarchies,
Monte Carlo moments, and Kolmogorov-Smirnov gates.  `run_checks` executes the
whole identity suite and is what the ``check`` CLI command prints.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln
from scipy.stats import betaprime, ks_2samp, norm
from scipy.stats import gamma as gamma_dist
from scipy.stats import t as student_t

from .bases import NormalBase, StudentTBase, gt_standard_scale
from .errors import DomainError, ExistenceError
from .families import (
    DistributionSpec,
    bsgt,
    bsn,
    bsstd,
    cdf_values,
    find_modes,
    full_moment,
    log_pdf,
    moment_exists,
    pdf,
    two_piece_second_moment,
)
from .sampling import (
    RngStream,
    sample,
    sample_bsgt,
    sample_bsn,
    sample_bsstd,
    sample_gen_gamma,
    sample_quadratic_tilt,
    sample_skewed_uniform_normal,
    sample_two_piece,
)

__all__ = [
    "OracleResult",
    "integrate",
    "gamma_mixture_density",
    "uniform_mixture_density",
    "gg_mixture_density",
    "uniform_gg_mixture_density",
    "mc_moment",
    "ks_distance",
    "ks_distance_pdf",
    "run_checks",
]


@dataclass(frozen=True)
class OracleResult:
    """Numeric estimate with its own quality report."""

    value: float
    abs_error_estimate: float
    evaluations: int
    converged: bool


# 15-point Kronrod extension of 7-point Gauss: (node, Gauss weight, Kronrod
# weight) for the nonnegative nodes; negatives mirror.  Gauss weight 0 marks
# Kronrod-only nodes.
_GK_ROWS = (
    (0.9914553711208126, 0.0, 0.0229353220105292),
    (0.9491079123427585, 0.1294849661688697, 0.0630920926299785),
    (0.8648644233597691, 0.0, 0.1047900103222502),
    (0.7415311855993945, 0.2797053914892767, 0.1406532597155259),
    (0.5860872354676911, 0.0, 0.1690047266392679),
    (0.4058451513773972, 0.3818300505051189, 0.1903505780647854),
    (0.2077849550078985, 0.0, 0.2044329400752989),
    (0.0, 0.4179591836734694, 0.2094821410847278),
)

_NODES = np.array([-r[0] for r in _GK_ROWS[:-1]] + [r[0] for r in reversed(_GK_ROWS)])
_WG = np.array([r[1] for r in _GK_ROWS[:-1]] + [r[1] for r in reversed(_GK_ROWS)])
_WK = np.array([r[2] for r in _GK_ROWS[:-1]] + [r[2] for r in reversed(_GK_ROWS)])


def _gk_panel(f, lo: float, hi: float) -> tuple[float, float]:
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    ys = np.asarray(f(mid + half * _NODES), dtype=float)
    k = half * float(ys @ _WK)
    g = half * float(ys @ _WG)
    diff = abs(k - g)
    # sharpen |K - G| relative to the panel's own variation: the Kronrod
    # estimate is far better than the raw gap on smooth panels, but not on
    # rough ones, and an absolute cutoff would misjudge small-valued tails
    spread = half * float(np.abs(ys - k / (hi - lo)) @ _WK)
    if spread > 0.0 and diff > 0.0:
        return k, spread * min(1.0, (200.0 * diff / spread) ** 1.5)
    return k, diff


def _t_of(y: float) -> float:
    """Inverse of y = t/(1 - t^2) on (-1, 1), in a cancellation-free form."""
    if y == 0.0:
        return 0.0
    return 2.0 * y / (1.0 + math.hypot(1.0, 2.0 * y))


def integrate(f, a: float, b: float, tol: float = 1e-10, max_evals: int = 1_000_000, points=()):
    """Adaptive Gauss-Kronrod integral of ``f`` over (a, b), infinite ends allowed.

    ``f`` must accept an ndarray and return one.  ``points`` lists interior
    abscissae to split at from the start (the densities here kink at 0, which
    callers pass explicitly).  Infinite tails are folded onto (-1, 1) by
    x = anchor + t/(1 - t^2); the worst-error interval is bisected until the
    summed error estimate drops below ``tol`` or the evaluation budget runs
    out, in which case ``converged`` is False and the best estimate is
    returned.
    """
    a, b = float(a), float(b)
    if math.isnan(a) or math.isnan(b) or not a < b:
        raise DomainError(f"need an interval with a < b, got ({a}, {b})")
    if tol <= 0:
        raise DomainError("tol must be positive")

    if math.isinf(a) or math.isinf(b):
        if math.isinf(a) and math.isinf(b):
            anchor, lo, hi = 0.0, -1.0, 1.0
        elif math.isinf(b):
            anchor, lo, hi = a, 0.0, 1.0
        else:
            anchor, lo, hi = b, -1.0, 0.0

        def g(ts):
            ts = np.asarray(ts, dtype=float)
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                one_minus = 1.0 - ts * ts
                xs = anchor + ts / one_minus
                jac = (1.0 + ts * ts) / one_minus**2
            # deep bisection can round a node onto t = +-1; the true
            # contribution there is zero and the integrand never sees inf
            ok = np.isfinite(xs) & np.isfinite(jac)
            with np.errstate(invalid="ignore", over="ignore"):
                vals = np.asarray(f(np.where(ok, xs, 0.0)), dtype=float) * jac
            return np.where(ok & np.isfinite(vals), vals, 0.0)

        breaks = [_t_of(p - anchor) for p in points]
        if a < 0.0 < b:
            breaks.append(_t_of(0.0 - anchor))
    else:
        g, lo, hi = f, a, b
        breaks = list(points)
        if a < 0.0 < b:
            breaks.append(0.0)

    cuts = sorted({lo, hi, *(p for p in breaks if lo < p < hi)})
    # halve each initial segment once so a lone panel cannot fake convergence
    seams = []
    for left, right in zip(cuts[:-1], cuts[1:]):
        seams += [(left, 0.5 * (left + right)), (0.5 * (left + right), right)]

    heap = []
    evals = 0
    err_total = 0.0
    for i, (left, right) in enumerate(seams):
        val, err = _gk_panel(g, left, right)
        evals += 15
        err_total += err
        heapq.heappush(heap, (-err, i, left, right, val))
    counter = len(seams)
    retired_val, retired_err = [], []

    while heap and err_total > tol and evals + 30 <= max_evals:
        neg_err, _, left, right, val = heapq.heappop(heap)
        mid = 0.5 * (left + right)
        if not left < mid < right:
            # no representable interior point, cannot resolve further
            retired_val.append(val)
            retired_err.append(-neg_err)
            continue
        v1, e1 = _gk_panel(g, left, mid)
        v2, e2 = _gk_panel(g, mid, right)
        evals += 30
        err_total += e1 + e2 + neg_err  # neg_err removes the parent's share
        heapq.heappush(heap, (-e1, counter, left, mid, v1))
        heapq.heappush(heap, (-e2, counter + 1, mid, right, v2))
        counter += 2

    value = math.fsum([item[4] for item in heap] + retired_val)
    err_total = math.fsum([-item[0] for item in heap] + retired_err)
    return OracleResult(value, err_total, evals, err_total <= tol)


# ---------- numeric marginalization of the mixture hierarchies ----------


def _stretched(x: float, gamma: float) -> float:
    """x mapped through the two-piece stretch, sign(0) = +1."""
    return x / gamma if x >= 0 else x * gamma


def _log_tilt(x: float, alpha: float, gamma: float) -> float:
    return math.log1p(alpha * x * x) - math.log1p(alpha * two_piece_second_moment(gamma))


def gamma_mixture_density(x: float, alpha: float, gamma: float, nu: float, tol: float = 1e-10) -> OracleResult:
    """BSSTD density rebuilt by integrating the normal kernel over its gamma mixing law.

    The conditional given lambda is the tilted two-piece normal with scale
    lambda^(-1/2); marginalizing over Gamma(nu/2, rate (nu-2)/2) must
    reproduce the closed-form family density.
    """
    if not nu > 2:
        raise DomainError(f"need nu > 2, got {nu}")
    m = _stretched(x, gamma)
    c = math.log(2.0) - math.log(gamma + 1.0 / gamma)
    shape, rate = 0.5 * nu, 0.5 * (nu - 2.0)
    const = (
        c
        + _log_tilt(x, alpha, gamma)
        - 0.5 * math.log(2.0 * math.pi)
        + shape * math.log(rate)
        - gammaln(shape)
    )

    def integrand(lam):
        lam = np.asarray(lam, dtype=float)
        with np.errstate(divide="ignore"):
            logs = const + (shape - 0.5) * np.log(lam) - rate * lam - 0.5 * lam * m * m
        return np.exp(logs)

    return integrate(integrand, 0.0, math.inf, tol=tol)


def uniform_mixture_density(x: float, gamma: float, lam: float, tol: float = 1e-10) -> OracleResult:
    """Two-piece normal density rebuilt from its uniform scale mixture.

    Conditional on u the draw is the two-piece uniform with radius
    sqrt(u/lam); mixing over chi-square(3) must give the two-piece normal
    with scale lam^(-1/2).
    """
    if not lam > 0:
        raise DomainError(f"need lam > 0, got {lam}")
    two_piece_second_moment(gamma)
    m = _stretched(x, gamma)
    u_min = lam * m * m
    log_chi3 = -0.5 * math.log(2.0 * math.pi)  # plus (1/2)log u - u/2

    def integrand(u):
        u = np.asarray(u, dtype=float)
        radius = np.sqrt(u / lam)
        height = 1.0 / (radius * (gamma + 1.0 / gamma))
        return height * np.exp(log_chi3 + 0.5 * np.log(u) - 0.5 * u)

    return integrate(integrand, u_min, math.inf, tol=tol)


def _log_ep_kernel(m: float, lam_scale: np.ndarray, p: float) -> np.ndarray:
    """Log density at m of the exponential power with scale lam_scale and tail p."""
    return (
        math.log(p)
        - (1.0 + 1.0 / p) * math.log(2.0)
        - gammaln(1.0 / p)
        - np.log(lam_scale)
        - 0.5 * (abs(m) / lam_scale) ** p
    )


def gg_mixture_density(
    x: float, alpha: float, gamma: float, p: float, q: float, tol: float = 1e-9
) -> OracleResult:
    """BSGT density rebuilt by integrating the exponential-power kernel over
    its generalized-gamma mixing law."""
    delta = gt_standard_scale(p, q)
    m = _stretched(x, gamma)
    c = math.log(2.0) - math.log(gamma + 1.0 / gamma)
    log_gg_const = math.log(p) - math.log(2.0) - gammaln(q)
    const = c + _log_tilt(x, alpha, gamma)

    def integrand(s):
        s = np.asarray(s, dtype=float)
        lam_scale = (0.5 * q) ** (1.0 / p) * delta / np.sqrt(s)
        with np.errstate(divide="ignore"):
            log_gg = log_gg_const + (0.5 * p * q - 1.0) * np.log(s) - s ** (0.5 * p)
        return np.exp(const + _log_ep_kernel(m, lam_scale, p) + log_gg)

    return integrate(integrand, 0.0, math.inf, tol=tol)


def uniform_gg_mixture_density(
    x: float, alpha: float, gamma: float, p: float, q: float, tol: float = 1e-7
) -> OracleResult:
    """BSGT density rebuilt from the double mixture: uniform layer inside the
    generalized-gamma layer.

    The inner integral runs over the uniform-layer radius variable u from the
    smallest u whose piece still covers x; the outer integral runs over the
    generalized-gamma scale s.
    """
    delta = gt_standard_scale(p, q)
    m = abs(_stretched(x, gamma))
    tilt = math.exp(_log_tilt(x, alpha, gamma))
    log_gg_const = math.log(p) - math.log(2.0) - gammaln(q)
    inv_width = 1.0 / (gamma + 1.0 / gamma)
    log_u_const = -gammaln(1.0 + 1.0 / p)
    evaluations = 0

    def inner(s: float) -> float:
        nonlocal evaluations
        u_min = (m * math.sqrt(s) / (q ** (1.0 / p) * delta)) ** p

        def integrand(u):
            u = np.asarray(u, dtype=float)
            radius = q ** (1.0 / p) * delta * u ** (1.0 / p) / math.sqrt(s)
            return inv_width / radius * np.exp(log_u_const + (1.0 / p) * np.log(u) - u)

        res = integrate(integrand, u_min, math.inf, tol=0.01 * tol, max_evals=50_000)
        evaluations += res.evaluations
        return res.value

    def outer(ss):
        ss = np.asarray(ss, dtype=float)
        out = np.empty_like(ss)
        for i, s in enumerate(ss):
            log_gg = log_gg_const + (0.5 * p * q - 1.0) * math.log(s) - s ** (0.5 * p)
            out[i] = math.exp(log_gg) * inner(float(s))
        return out * tilt

    res = integrate(outer, 0.0, math.inf, tol=tol)
    return OracleResult(res.value, res.abs_error_estimate, res.evaluations + evaluations, res.converged)


# ---------- Monte Carlo and goodness-of-fit ----------


def mc_moment(spec: DistributionSpec, r: int, n: int, rng) -> OracleResult:
    """Monte Carlo estimate of E(X^r); abs_error_estimate is one standard error."""
    if not moment_exists(spec, r):
        raise ExistenceError(f"moment of order {r} does not exist for this spec")
    draws = sample(spec, int(n), rng) ** r
    se = float(np.std(draws, ddof=1) / math.sqrt(draws.size))
    return OracleResult(float(np.mean(draws)), se, int(n), True)


def _ks_from_cdf(f_sorted: np.ndarray) -> float:
    n = f_sorted.size
    upper = np.arange(1, n + 1) / n
    return float(max(np.max(upper - f_sorted), np.max(f_sorted - (upper - 1.0 / n))))


def ks_distance(sample_values, spec: DistributionSpec) -> float:
    """KS distance of a sample against the family's numeric CDF."""
    xs = np.sort(np.asarray(sample_values, dtype=float))
    return _ks_from_cdf(cdf_values(spec, xs))


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


def ks_distance_pdf(sample_values, pdf_fn) -> float:
    """KS distance against the CDF of an arbitrary density callable."""
    xs = np.sort(np.asarray(sample_values, dtype=float))
    anchor = integrate(pdf_fn, -math.inf, xs[0], tol=1e-11).value
    mid = 0.5 * (xs[1:] + xs[:-1])
    half = 0.5 * (xs[1:] - xs[:-1])
    grid = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    panels = (np.asarray(pdf_fn(grid.ravel())).reshape(grid.shape) @ _GL_WEIGHTS) * half
    f = np.clip(anchor + np.concatenate([[0.0], np.cumsum(panels)]), 0.0, 1.0)
    return _ks_from_cdf(f)


# ---------- the identity suite ----------

_GRID_ALPHAS = (0.0, 0.5, 1.0, 3.0, 10.0)
_GRID_GAMMAS = (0.5, 0.9, 1.0, 1.1, 1.5)
_GRID_NUS = (3.0, 4.0, 8.0)
_GRID_PQS = ((1.7, 2.0), (2.0, 2.0), (2.3, 2.0), (2.0, 5.0))
_MIX_XS = (-2.0, -0.5, 0.0, 0.5, 2.0)
_MIX_GAMMAS = (0.8, 1.5)


def _corrupt(spec: DistributionSpec, delta_scale: float | None) -> DistributionSpec:
    if delta_scale is not None and spec.family == "bsgt":
        object.__setattr__(spec.shape, "delta", spec.shape.delta * delta_scale)
    return spec


def _norm_discrepancy(spec: DistributionSpec) -> float:
    res = integrate(lambda xs: pdf(spec, xs), -math.inf, math.inf, tol=1e-10)
    off = abs(res.value - 1.0)
    # an unconverged run still proves the identity if its error bound is tiny
    return off if res.converged else max(off, res.abs_error_estimate)


def _oracle_moment(spec: DistributionSpec, r: int) -> float:
    # Power tails near the existence boundary decay as slowly as x^(-1.4),
    # and the generic fold onto (-1, 1) squeezes their outer mass into a
    # sliver at t = 1 that double precision cannot split.  Substituting
    # u = 1/x instead puts the awkward end at u = 0, where floats are dense
    # and bisection reaches it.
    cut = 16.0 * max(1.0, abs(spec.loc) + spec.scale)
    center = integrate(lambda xs: xs**r * pdf(spec, xs), -cut, cut, tol=4e-10)

    def tail(sign: float):
        def g(us):
            us = np.maximum(us, 1e-150)
            # log form: u**-(r+2) and pdf(1/u) overflow/underflow separately
            return np.exp(-(r + 2.0) * np.log(us) + log_pdf(spec, sign / us))

        return integrate(g, 0.0, 1.0 / cut, tol=3e-10)

    return center.value + tail(1.0).value + (-1.0) ** r * tail(-1.0).value


def _sup_diff(f, g, grid) -> float:
    return float(np.max(np.abs(f(grid) - g(grid))))


def run_checks(
    only: str | None = None,
    seed: int = 20260814,
    sample_size: int = 100_000,
    delta_scale: float | None = None,
) -> list[dict]:
    """Run the identity suite; returns one record per identity.

    Each record is {"identity", "status", "value", "tolerance"}; ``value`` is
    the achieved discrepancy except for "sampler/paths-agree", where it is a
    two-sample KS p-value and larger is better.  ``only`` filters identities
    by substring.  ``delta_scale`` rescales the generalized-t standardization
    constant before checking, as a deliberate-fault hook proving the suite
    can fail.
    """
    checks: list[dict] = []

    def want(identity: str) -> bool:
        return only is None or only in identity

    def add(identity: str, value: float, tolerance: float, larger_is_better: bool = False) -> None:
        ok = value >= tolerance if larger_is_better else value <= tolerance
        checks.append(
            {
                "identity": identity,
                "status": "pass" if ok else "fail",
                "value": float(value),
                "tolerance": float(tolerance),
            }
        )

    def family_grid():
        for a in _GRID_ALPHAS:
            for g in _GRID_GAMMAS:
                yield f"bsn alpha={a} gamma={g}", bsn(a, g)
                for nu in _GRID_NUS:
                    yield f"bsstd alpha={a} gamma={g} nu={nu}", bsstd(a, g, nu)
                for p, q in _GRID_PQS:
                    yield f"bsgt alpha={a} gamma={g} p={p} q={q}", _corrupt(
                        bsgt(a, g, p, q), delta_scale
                    )

    # normalization over the full parameter grid
    for label, spec in family_grid():
        ident = f"normalization/{label}"
        if want(ident):
            add(ident, _norm_discrepancy(spec), 1e-8)

    # reduction chain
    grid = np.linspace(-10.0, 10.0, 401)
    for a, g in ((0.0, 1.0), (1.0, 0.8), (3.0, 1.5)):
        ident = f"reduction/gent-student alpha={a} gamma={g}"
        if want(ident):
            value = _sup_diff(
                lambda xs: pdf(_corrupt(bsgt(a, g, 2.0, 2.0), delta_scale), xs),
                lambda xs: pdf(bsstd(a, g, 4.0), xs),
                grid,
            )
            add(ident, value, 1e-10)
    for a, g in ((1.0, 1.5), (3.0, 0.8)):
        ident = f"reduction/student-normal-limit alpha={a} gamma={g}"
        if want(ident):
            value = _sup_diff(
                lambda xs: pdf(bsstd(a, g, 1e4), xs), lambda xs: pdf(bsn(a, g), xs), grid
            )
            add(ident, value, 1e-3)

    ident = "reduction/symmetric-base normal"
    if want(ident):
        add(ident, _sup_diff(lambda xs: pdf(bsn(0.0, 1.0), xs), norm.pdf, grid), 1e-12)
    ident = "reduction/symmetric-base student nu=5"
    if want(ident):
        k = math.sqrt(5.0 / 3.0)
        add(
            ident,
            _sup_diff(
                lambda xs: pdf(bsstd(0.0, 1.0, 5.0), xs),
                lambda xs: student_t.pdf(xs * k, 5.0) * k,
                grid,
            ),
            1e-12,
        )
    ident = "reduction/symmetric-base gent p=1.7 q=2"
    if want(ident):
        p, q = 1.7, 2.0
        delta = gt_standard_scale(p, q)

        def gt_via_betaprime(xs):
            az = np.abs(np.asarray(xs, dtype=float))
            w = (az / delta) ** p / q
            return betaprime.pdf(w, 1.0 / p, q) * 0.5 * p * (az / delta) ** (p - 1.0) / (q * delta)

        zero_free = np.linspace(-10.0, 10.0, 400)
        add(
            ident,
            _sup_diff(lambda xs: pdf(bsgt(0.0, 1.0, p, q), xs), gt_via_betaprime, zero_free),
            1e-12,
        )
    ident = "reduction/two-piece-normal gamma=2"
    if want(ident):

        def two_piece_direct(xs):
            xs = np.asarray(xs, dtype=float)
            stretched = np.where(xs >= 0, xs / 2.0, xs * 2.0)
            return 2.0 / 2.5 * norm.pdf(stretched)

        add(ident, _sup_diff(lambda xs: pdf(bsn(0.0, 2.0), xs), two_piece_direct, grid), 1e-12)

    # reflection: pdf(x; gamma) = pdf(-x; 1/gamma)
    refl_grid = np.linspace(-6.0, 6.0, 241)
    for label, make in (
        ("bsn", lambda g: bsn(1.0, g)),
        ("bsstd nu=4", lambda g: bsstd(1.0, g, 4.0)),
        ("bsgt p=1.7 q=2", lambda g: bsgt(1.0, g, 1.7, 2.0)),
    ):
        ident = f"reflection/{label}"
        if want(ident):
            worst = 0.0
            for g in (0.5, 1.0, 2.0):
                worst = max(
                    worst,
                    float(
                        np.max(np.abs(pdf(make(g), refl_grid) - pdf(make(1.0 / g), -refl_grid)))
                    ),
                )
            add(ident, worst, 1e-12)

    # mass ratio at alpha = 0
    for label, spec_of in (
        ("bsn", lambda g: bsn(0.0, g)),
        ("bsstd nu=4", lambda g: bsstd(0.0, g, 4.0)),
        ("bsgt p=2 q=5", lambda g: bsgt(0.0, g, 2.0, 5.0)),
    ):
        for g in (0.5, 2.0):
            ident = f"mass-ratio/{label} gamma={g}"
            if want(ident):
                spec = spec_of(g)
                upper = integrate(lambda xs: pdf(spec, xs), 0.0, math.inf, tol=1e-11).value
                lower = integrate(lambda xs: pdf(spec, xs), -math.inf, 0.0, tol=1e-11).value
                add(ident, abs(upper / lower - g * g), 1e-8)

    # closed-form moments vs direct quadrature, with existence bookkeeping
    moment_cases = [
        ("bsn alpha=0 gamma=1.5", bsn(0.0, 1.5), (1, 2, 3, 4)),
        ("bsn alpha=1 gamma=0.5", bsn(1.0, 0.5), (1, 2, 3, 4)),
        ("bsn alpha=3 gamma=1", bsn(3.0, 1.0), (1, 2, 3, 4)),
        ("bsstd alpha=0 gamma=1.5 nu=8", bsstd(0.0, 1.5, 8.0), (1, 2, 3, 4)),
        ("bsstd alpha=1 gamma=0.8 nu=8", bsstd(1.0, 0.8, 8.0), (1, 2, 3, 4)),
        ("bsstd alpha=0 gamma=1.5 nu=4", bsstd(0.0, 1.5, 4.0), (1, 2, 3)),
        ("bsgt alpha=0 gamma=1.5 p=2 q=5", bsgt(0.0, 1.5, 2.0, 5.0), (1, 2, 3, 4)),
        ("bsgt alpha=1 gamma=0.8 p=2 q=5", bsgt(1.0, 0.8, 2.0, 5.0), (1, 2, 3, 4)),
        ("bsgt alpha=0 gamma=1.2 p=1.7 q=2", bsgt(0.0, 1.2, 1.7, 2.0), (1, 2, 3)),
        ("bsgt alpha=1 gamma=1.2 p=1.7 q=2", bsgt(1.0, 1.2, 1.7, 2.0), (1,)),
    ]
    for label, spec, orders in moment_cases:
        for r in orders:
            ident = f"moments/{label} r={r}"
            if want(ident):
                add(ident, abs(full_moment(spec, r) - _oracle_moment(spec, r)), 1e-6)
    existence_cases = [
        ("bsstd nu=3", bsstd(1.0, 1.0, 3.0), {1: False, 2: False, 3: False, 4: False}),
        ("bsstd nu=3 alpha=0", bsstd(0.0, 1.0, 3.0), {1: True, 2: True, 3: False, 4: False}),
        ("bsstd nu=4", bsstd(1.0, 1.0, 4.0), {1: True, 2: False, 3: False, 4: False}),
        ("bsstd nu=8", bsstd(1.0, 1.0, 8.0), {1: True, 2: True, 3: True, 4: True}),
        ("bsgt p=2 q=2", bsgt(1.0, 1.0, 2.0, 2.0), {1: True, 2: False, 3: False, 4: False}),
        ("bsgt p=1.7 q=2 alpha=0", bsgt(0.0, 1.0, 1.7, 2.0), {1: True, 2: True, 3: True, 4: False}),
        ("bsgt p=2 q=5", bsgt(1.0, 1.0, 2.0, 5.0), {1: True, 2: True, 3: True, 4: True}),
    ]
    for label, spec, expected in existence_cases:
        ident = f"moments/existence {label}"
        if want(ident):
            wrong = sum(moment_exists(spec, r) != exp for r, exp in expected.items())
            add(ident, float(wrong), 0.0)

    # mixture marginalizations vs closed forms
    for g in _MIX_GAMMAS:
        for x in _MIX_XS:
            ident = f"mixture/gamma x={x} gamma={g}"
            if want(ident):
                res = gamma_mixture_density(x, 1.0, g, 4.0)
                add(ident, abs(res.value - float(pdf(bsstd(1.0, g, 4.0), x))), 1e-6)
    for g in _MIX_GAMMAS:
        for lam in (1.0, 2.5):
            for x in _MIX_XS:
                ident = f"mixture/uniform x={x} gamma={g} lambda={lam}"
                if want(ident):
                    res = uniform_mixture_density(x, g, lam)
                    ref = float(pdf(bsn(0.0, g, scale=lam**-0.5), x))
                    add(ident, abs(res.value - ref), 1e-6)
    for p, _q in ((1.7, 2.0), (2.0, 2.0), (2.3, 2.0)):
        for g in _MIX_GAMMAS:
            for x in _MIX_XS:
                spec = _corrupt(bsgt(1.0, g, p, _q), delta_scale)
                ident = f"mixture/gg x={x} gamma={g} p={p} q={_q}"
                if want(ident):
                    res = gg_mixture_density(x, 1.0, g, p, _q)
                    add(ident, abs(res.value - float(pdf(spec, x))), 1e-5)
                ident = f"mixture/uniform-gg x={x} gamma={g} p={p} q={_q}"
                if want(ident):
                    res = uniform_gg_mixture_density(x, 1.0, g, p, _q)
                    add(ident, abs(res.value - float(pdf(spec, x))), 1e-4)

    # mode-count law for the normal base at gamma = 1, plus mode geometry
    for a in (0.0, 0.1, 0.2, 0.3, 0.4, 0.6, 0.7, 0.8, 0.9, 1.0):
        ident = f"modes/count alpha={a}"
        if want(ident):
            n_modes = len(find_modes(bsn(a, 1.0)))
            add(ident, float(abs(n_modes - (1 if a < 0.5 else 2))), 0.0)
    ident = "modes/location alpha=0.6"
    if want(ident):
        locs = sorted(loc for loc, _ in find_modes(bsn(0.6, 1.0)))
        target = math.sqrt(2.0 - 1.0 / 0.6)
        add(ident, max(abs(locs[0] + target), abs(locs[1] - target)), 1e-6)
    ident = "modes/right-taller alpha=3 gamma=1.5"
    if want(ident):
        modes = find_modes(bsn(3.0, 1.5))
        ok = len(modes) == 2 and modes[-1][1] > modes[0][1]
        add(ident, 0.0 if ok else 1.0, 0.0)
    ident = "modes/two-piece-peak alpha=0 gamma=2"
    if want(ident):
        modes = find_modes(bsn(0.0, 2.0))
        add(ident, abs(modes[0][0]) + float(len(modes) != 1), 1e-6)

    # sampler goodness-of-fit gates
    n = int(sample_size)
    gate = 1.63 / math.sqrt(n)
    ident = "sampler/two-piece gamma=2"
    if want(ident):
        xs = sample_two_piece(2.0, NormalBase(), RngStream(seed, 1), n)
        add(ident, ks_distance(xs, bsn(0.0, 2.0)), gate)
    ident = "sampler/two-piece-student gamma=0.8 nu=5"
    if want(ident):
        xs = sample_two_piece(0.8, StudentTBase(5.0), RngStream(seed, 2), n)
        add(ident, ks_distance(xs, bsstd(0.0, 0.8, 5.0)), gate)
    ident = "sampler/quadratic-tilt gamma=2"
    if want(ident):
        xs = sample_quadratic_tilt(2.0, NormalBase(), RngStream(seed, 3), n)
        b = two_piece_second_moment(2.0)
        tilt_pdf = lambda v: v**2 * pdf(bsn(0.0, 2.0), v) / b
        add(ident, ks_distance_pdf(xs, tilt_pdf), gate)
    ident = "sampler/bsn alpha=1 gamma=1.5"
    if want(ident):
        xs = sample_bsn(1.0, 1.5, RngStream(seed, 4), n)
        add(ident, ks_distance(xs, bsn(1.0, 1.5)), gate)
    ident = "sampler/bsn-uniform alpha=1 gamma=1.5"
    if want(ident):
        xs = sample_bsn(1.0, 1.5, RngStream(seed, 5), n, path="uniform")
        add(ident, ks_distance(xs, bsn(1.0, 1.5)), gate)
    ident = "sampler/uniform-normal gamma=2 lambda=2.5"
    if want(ident):
        draw = sample_skewed_uniform_normal(2.0, 2.5, RngStream(seed, 6), n)
        add(ident, ks_distance(draw.x, bsn(0.0, 2.0, scale=2.5**-0.5)), gate)
    ident = "sampler/bsstd alpha=1 gamma=1.5 nu=4"
    if want(ident):
        draw = sample_bsstd(1.0, 1.5, 4.0, RngStream(seed, 7), n)
        add(ident, ks_distance(draw.x, bsstd(1.0, 1.5, 4.0)), gate)
    ident = "sampler/gen-gamma p=1.7 q=2"
    if want(ident):
        s = sample_gen_gamma(1.7, 2.0, RngStream(seed, 8), n)
        f = gamma_dist.cdf(np.sort(s ** (1.7 / 2.0)), 2.0)
        add(ident, _ks_from_cdf(f), gate)
    ident = "sampler/bsgt p=1.7 q=2 alpha=1 gamma=1.5"
    if want(ident):
        draw = sample_bsgt(1.0, 1.5, 1.7, 2.0, RngStream(seed, 9), n)
        add(ident, ks_distance(draw.x, bsgt(1.0, 1.5, 1.7, 2.0)), gate)
    ident = "sampler/bsgt-uniform p=2.3 q=2 alpha=1 gamma=0.8"
    if want(ident):
        draw = sample_bsgt(1.0, 0.8, 2.3, 2.0, RngStream(seed, 10), n, path="uniform-gg")
        add(ident, ks_distance(draw.x, bsgt(1.0, 0.8, 2.3, 2.0)), gate)
    ident = "sampler/paths-agree p=2.3 q=2"
    if want(ident):
        a_side = sample_bsgt(1.0, 1.5, 2.3, 2.0, RngStream(seed, 11), n).x
        b_side = sample_bsgt(1.0, 1.5, 2.3, 2.0, RngStream(seed, 12), n, path="uniform-gg").x
        add(ident, float(ks_2samp(a_side, b_side).pvalue), 0.01, larger_is_better=True)

    return checks
