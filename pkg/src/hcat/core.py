"""Profile curves of the rotational constant-mean-curvature family in H^2 x R.

For mean curvature H in (0, 1/2) and family parameter d >= -2H the
generating curve is the height function

    height(rho) = integral from neck to rho of
                  (d + 2H cosh r) / sqrt(sinh^2 r - (d + 2H cosh r)^2) dr,

with the neck radius given in closed form.  The radicand factors as
(1 - 4H^2)(cosh r - alpha)(cosh r - beta) where alpha = cosh(neck) and
beta < 0, which is what every evaluator here uses: it removes the
catastrophic cancellation of the naive form near the neck.

The inverse-square-root endpoint singularity at the neck is removed by
the substitution r = neck + u^2 before quadrature; in the u variable the
integrand is smooth, so plain adaptive Gauss-Kronrod recovers full
accuracy.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field

from scipy.integrate import quad
from scipy.optimize import brentq

from .errors import ConvergenceError, DomainError, PreconditionError

#: default absolute quadrature tolerance
QUAD_TOL = 1e-10
#: default root-finding tolerance (in the substituted variable u = sqrt(rho - neck))
ROOT_TOL = 1e-12
#: default cap for bracket expansion in profile inversion
RHO_MAX_DEFAULT = 1e4

# above this r the direct cosh/sinh evaluation is traded for an
# exp(-r)-based form; well below double overflow (~710)
_LARGE_R = 350.0


@dataclass(frozen=True)
class CmcParams:
    """One member of the rotational family: mean curvature H and parameter d."""

    H: float
    d: float

    def __post_init__(self):
        if not (0.0 < self.H < 0.5):
            raise PreconditionError(f"H must lie in (0, 1/2), got {self.H}")
        if self.d + 2.0 * self.H < 0.0:
            raise PreconditionError(f"d must be >= -2H = {-2.0 * self.H}, got {self.d}")

    @property
    def q(self) -> float:
        """1 - 4H^2, positive on the valid range of H."""
        return 1.0 - 4.0 * self.H * self.H

    @property
    def is_entire_graph(self) -> bool:
        return self.d + 2.0 * self.H == 0.0


def _stable_acosh1p(y: float) -> float:
    """acosh(1 + y) for y >= 0 without forming 1 + y."""
    if y < 0.0:
        raise DomainError(f"acosh argument below 1 by {-y}")
    return math.log1p(y + math.sqrt(y * (y + 2.0)))


def _roots(params: CmcParams) -> tuple[float, float]:
    """Roots alpha > 0 > beta of c^2 - 1 - (d + 2Hc)^2 in c = cosh r."""
    H, d, q = params.H, params.d, params.q
    s = math.sqrt(q + d * d)
    return (2.0 * d * H + s) / q, (2.0 * d * H - s) / q


def necksize(params: CmcParams) -> float:
    """Neck radius: the minimal rho of the profile, 0 exactly at d = -2H.

    cosh(neck) = alpha; evaluated through acosh(1 + y) with the
    cancellation-free rearrangement
    y = (d + 2H)^2 / (sqrt(1 - 4H^2 + d^2) + 1 - 4H^2 - 2dH).
    """
    H, d, q = params.H, params.d, params.q
    w = d + 2.0 * H
    denom = math.sqrt(q + d * d) + q - 2.0 * d * H
    return _stable_acosh1p(w * w / denom)


def _numerator_profile(params: CmcParams, r: float) -> float:
    # d + 2H cosh r, grouped so it vanishes cleanly as r -> 0 at d = -2H
    H, d = params.H, params.d
    return (d + 2.0 * H) + 4.0 * H * math.sinh(0.5 * r) ** 2


def _numerator_remainder(params: CmcParams, r: float) -> float:
    # d + 2H e^{-r}
    H, d = params.H, params.d
    return (d + 2.0 * H) + 2.0 * H * math.expm1(-r)


def _integrand_large_r(params: CmcParams, r: float, numerator_over_c: float) -> float:
    # everything divided by c = cosh r; z = e^{-r} avoids overflow
    q = params.q
    alpha, beta = _roots(params)
    z = math.exp(-r)
    inv_c = 2.0 * z / (1.0 + z * z)
    a1 = 1.0 - alpha * inv_c
    a2 = 1.0 - beta * inv_c
    return numerator_over_c / math.sqrt(q * a1 * a2)


def integrand(params: CmcParams, r: float) -> float:
    """Derivative of the height function at radius r.

    Requires r strictly above the neck (strictly above 0 for the entire
    graph), where the radicand is positive.
    """
    eta = necksize(params)
    if r <= eta:
        raise DomainError(f"integrand needs r > neck = {eta}, got {r}")
    if r >= _LARGE_R:
        H, d = params.H, params.d
        z = math.exp(-r)
        num_over_c = 2.0 * H + 2.0 * d * z / (1.0 + z * z)
        return _integrand_large_r(params, r, num_over_c)
    q = params.q
    _, beta = _roots(params)
    # cosh r - alpha = 2 sinh((r + eta)/2) sinh((r - eta)/2), exact identity
    c_minus_alpha = 2.0 * math.sinh(0.5 * (r + eta)) * math.sinh(0.5 * (r - eta))
    c_minus_beta = math.cosh(r) - beta
    radicand = q * c_minus_alpha * c_minus_beta
    if radicand <= 0.0:
        raise DomainError(f"radicand non-positive at r = {r}")
    return _numerator_profile(params, r) / math.sqrt(radicand)


def _sinhc_half_sq(u: float) -> float:
    """sinh(u^2/2) / (u^2/2), continued by 1 at u = 0."""
    x = 0.5 * u * u
    if x < 1e-8:
        return 1.0 + x * x / 6.0
    return math.sinh(x) / x


def _substituted(params: CmcParams, eta: float, u: float, remainder: bool) -> float:
    """Integrand after r = neck + u^2, i.e. 2u * integrand(neck + u^2).

    Written so the 1/sqrt(r - neck) singularity cancels algebraically;
    smooth in u down to u = 0.
    """
    r = eta + u * u
    if r >= _LARGE_R:
        if remainder:
            z = math.exp(-r)
            num_over_c = (params.d + 2.0 * params.H * z) * (2.0 * z / (1.0 + z * z))
        else:
            z = math.exp(-r)
            num_over_c = 2.0 * params.H + 2.0 * params.d * z / (1.0 + z * z)
        return 2.0 * u * _integrand_large_r(params, r, num_over_c)
    num = _numerator_remainder(params, r) if remainder else _numerator_profile(params, r)
    q = params.q
    _, beta = _roots(params)
    if u == 0.0:
        sh = math.sinh(eta)
        if sh == 0.0:
            # entire graph: the whole expression vanishes like u^3
            return 0.0
        return 2.0 * num / math.sqrt(q * sh * (math.cosh(eta) - beta))
    denom = q * math.sinh(eta + 0.5 * u * u) * _sinhc_half_sq(u) * (math.cosh(r) - beta)
    return 2.0 * num / math.sqrt(denom)


def _integrate_substituted(
    params: CmcParams, eta: float, u_hi: float, remainder: bool, tol: float
) -> float:
    if u_hi == 0.0:
        return 0.0
    val, _ = quad(
        lambda u: _substituted(params, eta, u, remainder),
        0.0,
        u_hi,
        epsabs=tol,
        epsrel=1e-12,
        limit=200,
    )
    return val


def lambda_height(params: CmcParams, rho: float, tol: float = QUAD_TOL) -> float:
    """Height of the generating curve at radius rho (0 at the neck)."""
    eta = necksize(params)
    if rho < eta:
        raise DomainError(f"rho must be >= neck = {eta}, got {rho}")
    return _integrate_substituted(params, eta, math.sqrt(rho - eta), False, tol)


def f_closed(params: CmcParams, rho: float, tol: float = 1e-12) -> float:
    """Closed-form part of the height decomposition.

    (2H / sqrt(1-4H^2)) * acosh(((1-4H^2) cosh rho - 2dH) / sqrt(d^2+1-4H^2)),
    with the acosh argument reaching exactly 1 at the neck.  Requires
    d > -2H.
    """
    if params.is_entire_graph:
        raise PreconditionError("closed-form decomposition needs d > -2H")
    eta = necksize(params)
    q = params.q
    scale = 2.0 * params.H / math.sqrt(q)
    s = math.sqrt(params.d * params.d + q)
    if rho >= _LARGE_R:
        # acosh(x) = log(2x) up to O(x^-2); x ~ q e^rho / (2 s)
        z = math.exp(-rho)
        corr = math.log1p(z * z - 4.0 * params.d * params.H * z / q)
        return scale * (rho + math.log(q / s) + corr)
    # arg - 1 = q (cosh rho - cosh eta) / s, via the cosh-difference identity
    y = q * 2.0 * math.sinh(0.5 * (rho + eta)) * math.sinh(0.5 * (rho - eta)) / s
    if y < -tol:
        raise DomainError(f"acosh argument below 1 at rho = {rho}")
    return scale * _stable_acosh1p(max(y, 0.0))


def f_asymptote(params: CmcParams, rho: float) -> float:
    """Linear large-rho asymptote of the closed-form part."""
    q = params.q
    s = math.sqrt(params.d * params.d + q)
    return 2.0 * params.H / math.sqrt(q) * (rho + math.log(q / s))


def g_residual(params: CmcParams, rho: float) -> float:
    """Closed-form part minus its linear asymptote; decays to 0 at infinity."""
    return f_closed(params, rho) - f_asymptote(params, rho)


def j_remainder(params: CmcParams, rho: float, tol: float = QUAD_TOL) -> float:
    """Remainder integral of the height decomposition (numerator d + 2H e^{-r})."""
    if params.is_entire_graph:
        raise PreconditionError("remainder decomposition needs d > -2H")
    eta = necksize(params)
    if rho < eta:
        raise DomainError(f"rho must be >= neck = {eta}, got {rho}")
    return _integrate_substituted(params, eta, math.sqrt(rho - eta), True, tol)


@dataclass(frozen=True)
class JBoundWitness:
    """Quantities witnessing the uniform bound on the remainder integral for d > 2."""

    alpha: float
    beta: float
    omega: float
    bound: float


def j_bound_witness(params: CmcParams) -> JBoundWitness:
    """Roots and margin data behind the d > 2 remainder bound 2*pi*sqrt(1-2H)."""
    if not params.d > 2.0:
        raise PreconditionError(f"bound witness requires d > 2, got d = {params.d}")
    alpha, beta = _roots(params)
    witness = JBoundWitness(
        alpha=alpha,
        beta=beta,
        omega=alpha - 1.0,
        bound=2.0 * math.pi * math.sqrt(1.0 - 2.0 * params.H),
    )
    cosh_eta = math.cosh(necksize(params))
    if abs(alpha - cosh_eta) > 1e-10 * max(1.0, alpha):
        raise ConvergenceError("root alpha does not match cosh(necksize)")
    return witness


def b_inverse(
    params: CmcParams,
    t: float,
    tol: float = ROOT_TOL,
    rho_max: float = RHO_MAX_DEFAULT,
    quad_tol: float = QUAD_TOL,
    rho_hint: float | None = None,
) -> float:
    """Radius of the profile at height t (even in t).

    Inverts the strictly increasing height function by bracketed Brent
    iteration carried out in u = sqrt(rho - neck), where the function
    has bounded slope all the way down to the neck.  `rho_hint` seeds
    the bracket (useful when scanning a monotone grid of heights).
    """
    if params.is_entire_graph:
        raise PreconditionError("profile inversion needs d > -2H")
    t = abs(t)
    eta = necksize(params)
    if t == 0.0:
        return eta

    def h(u: float) -> float:
        return _integrate_substituted(params, eta, u, False, quad_tol) - t

    u_cap = math.sqrt(max(rho_max - eta, 0.0))

    if rho_hint is not None and rho_hint > eta:
        u0 = math.sqrt(rho_hint - eta)
        w = max(0.05, 0.01 * u0)
        lo, hi = max(u0 - w, 0.0), min(u0 + w, u_cap)
        flo, fhi = h(lo), h(hi)
        while flo > 0.0 and lo > 0.0:
            hi, fhi = lo, flo
            lo = max(lo - w, 0.0)
            w *= 4.0
            flo = h(lo)
        while fhi < 0.0:
            if hi >= u_cap:
                raise ConvergenceError(f"no bracket below rho_max = {rho_max}")
            lo, flo = hi, fhi
            hi = min(hi + w, u_cap)
            w *= 4.0
            fhi = h(hi)
    else:
        lo, flo = 0.0, -t
        hi = min(1.0, u_cap) if u_cap > 0.0 else 0.0
        fhi = h(hi)
        while fhi < 0.0:
            if hi >= u_cap:
                raise ConvergenceError(f"no bracket below rho_max = {rho_max}")
            lo, flo = hi, fhi
            hi = min(2.0 * hi, u_cap)
            fhi = h(hi)

    if flo == 0.0:
        u = lo
    elif fhi == 0.0:
        u = hi
    else:
        u = brentq(h, lo, hi, xtol=tol, rtol=4.0 * math.ulp(1.0))
    return eta + u * u


@dataclass(frozen=True)
class ProfileSample:
    rho: float
    t: float


@dataclass(frozen=True)
class ProfileCurve:
    """Sampled generating curve with strictly increasing rho and t.

    Interpolation between samples is monotone cubic (PCHIP), so the
    interpolant inherits strict monotonicity from the samples.
    """

    params: CmcParams
    samples: tuple[ProfileSample, ...]
    quad_tol: float = QUAD_TOL
    _interp: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if len(self.samples) < 2:
            raise PreconditionError("a profile needs at least 2 samples")
        rhos = [s.rho for s in self.samples]
        ts = [s.t for s in self.samples]
        if any(b <= a for a, b in zip(rhos, rhos[1:])):
            raise PreconditionError("profile rho values must be strictly increasing")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise PreconditionError("profile heights must be strictly increasing")

    def height_at(self, rho: float) -> float:
        """Monotone-cubic interpolated height at rho within the sampled range."""
        interp = self._interp
        if interp is None:
            from scipy.interpolate import PchipInterpolator

            interp = PchipInterpolator(
                [s.rho for s in self.samples], [s.t for s in self.samples]
            )
            object.__setattr__(self, "_interp", interp)
        lo, hi = self.samples[0].rho, self.samples[-1].rho
        if not (lo <= rho <= hi):
            raise DomainError(f"rho = {rho} outside sampled range [{lo}, {hi}]")
        return float(interp(rho))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("rho,t\n")
        for s in self.samples:
            buf.write(f"{s.rho:.17g},{s.t:.17g}\n")
        return buf.getvalue()

    def to_json_dict(self) -> dict:
        return {
            "params": {"H": self.params.H, "d": self.params.d},
            "quad_tol": self.quad_tol,
            "samples": [{"rho": s.rho, "t": s.t} for s in self.samples],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)


def _graded_rhos(eta: float, rho_max: float, n: int) -> list[float]:
    # uniform in sqrt(rho - eta): matches the singularity-removing substitution
    span = math.sqrt(rho_max - eta)
    return [eta + (span * i / (n - 1)) ** 2 for i in range(n)]


def profile(
    params: CmcParams, rho_max: float, n: int, tol: float = QUAD_TOL
) -> ProfileCurve:
    """Sample the generating curve on a neck-graded grid up to rho_max."""
    eta = necksize(params)
    if not rho_max > eta:
        raise PreconditionError(f"rho_max must exceed the neck radius {eta}")
    if n < 2:
        raise PreconditionError("n must be >= 2")
    samples = [ProfileSample(eta, 0.0)]
    for rho in _graded_rhos(eta, rho_max, n)[1:]:
        samples.append(ProfileSample(rho, lambda_height(params, rho, tol)))
    return ProfileCurve(params=params, samples=tuple(samples), quad_tol=tol)


def entire_graph_profile(
    H: float, rho_max: float, n: int, tol: float = QUAD_TOL
) -> ProfileCurve:
    """Profile of the d = -2H member, a graph over the whole plane from rho = 0."""
    params = CmcParams(H, -2.0 * H)
    return profile(params, rho_max, n, tol)
