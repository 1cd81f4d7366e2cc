"""Numeric disjointness certificates for pairs of family members.

A certificate establishes a positive lower bound delta0 for the radial
gap b_{d2}(t) - b_{d1}(t) over all heights t, by combining a finite
scan on [0, t_max] (even in t), a finite-difference monotonicity check
for t > 0, and the closed-form asymptotic separation bound valid for
large t.  Disjointness of the two surfaces of revolution follows.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict

from scipy.optimize import brentq

from . import __version__
from .core import CmcParams, QUAD_TOL, ROOT_TOL, b_inverse, necksize
from .errors import CertificationFailure, PreconditionError

#: tolerance for the monotone-decrease finite-difference check
MONOTONE_TOL = 1e-9
#: default scan resolution in t
GRID_STEP_DEFAULT = 0.05


def _require_d1(d1: float) -> None:
    if not d1 > 2.0:
        raise PreconditionError(f"d1 must exceed 2, got {d1}")


def d0_equation_lhs(H: float, d1: float, d0_candidate: float) -> float:
    """Left-hand side of the threshold equation fixing d0 for a given d1 > 2.

    (sqrt(1-4H^2)/(4H)) * (ln sqrt((d0^2+1-4H^2)/(d1^2+1-4H^2))
                           - 4 pi sqrt(1-2H));
    the threshold d0 is its unique root at value 1.
    """
    _require_d1(d1)
    q = 1.0 - 4.0 * H * H
    ratio_log = 0.5 * (math.log(d0_candidate * d0_candidate + q) - math.log(d1 * d1 + q))
    return math.sqrt(q) / (4.0 * H) * (ratio_log - 4.0 * math.pi * math.sqrt(1.0 - 2.0 * H))


def solve_d0(H: float, d1: float, residual_tol: float = 1e-10) -> float:
    """Unique d0 > d1 with d0_equation_lhs(H, d1, d0) = 1.

    Bracket-doubling then Brent; the closed-form rearrangement of the
    equation exists but is kept out of the solver so it can serve as an
    independent oracle.
    """
    _require_d1(d1)
    lo, hi = d1, 2.0 * d1
    while d0_equation_lhs(H, d1, hi) < 1.0:
        lo = hi
        hi *= 2.0
        if hi > 1e300:
            raise PreconditionError("threshold equation has no finite root")
    d0 = brentq(
        lambda x: d0_equation_lhs(H, d1, x) - 1.0,
        lo,
        hi,
        xtol=1e-12,
        rtol=4.0 * math.ulp(1.0),
    )
    if abs(d0_equation_lhs(H, d1, d0) - 1.0) > residual_tol:
        raise CertificationFailure("threshold equation residual above tolerance")
    return d0


def gap(
    H: float,
    d1: float,
    d2: float,
    t: float,
    rho_hints: tuple[float, float] | None = None,
    quad_tol: float = QUAD_TOL,
) -> float:
    """Radial gap b_{d2}(t) - b_{d1}(t); even in t."""
    p1, p2 = CmcParams(H, d1), CmcParams(H, d2)
    if not d1 < d2:
        raise PreconditionError(f"need d1 < d2, got {d1} >= {d2}")
    h1, h2 = rho_hints if rho_hints is not None else (None, None)
    return b_inverse(p2, t, rho_hint=h2, quad_tol=quad_tol) - b_inverse(
        p1, t, rho_hint=h1, quad_tol=quad_tol
    )


def separation_lower_bound(H: float, d1: float, d2: float) -> float:
    """Asymptotic (large t) lower bound for the radial gap.

    (sqrt(1-4H^2)/(2H)) * (1/2 * ln sqrt((d2^2+1-4H^2)/(d1^2+1-4H^2))
                           - 2 pi sqrt(1-2H)).
    May be negative, in which case it certifies nothing by itself.
    """
    _require_d1(d1)
    q = 1.0 - 4.0 * H * H
    ratio_log = 0.5 * (math.log(d2 * d2 + q) - math.log(d1 * d1 + q))
    return math.sqrt(q) / (2.0 * H) * (
        0.5 * ratio_log - 2.0 * math.pi * math.sqrt(1.0 - 2.0 * H)
    )


@dataclass(frozen=True)
class DisjointnessCertificate:
    """Full numeric record certifying a positive radial gap for one pair."""

    H: float
    d1: float
    d2: float
    delta0: float
    sup_gap: float
    t_max: float
    grid_step: float
    min_gap_observed: float
    min_gap_t: float
    asymptotic_bound: float
    monotone_decreasing: bool
    beyond_lemma: bool
    d0: float | None = None
    quad_tol: float = QUAD_TOL
    root_tol: float = ROOT_TOL
    monotone_tol: float = MONOTONE_TOL
    version: str = __version__

    def to_json_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)

    @staticmethod
    def from_json_dict(data: dict) -> "DisjointnessCertificate":
        fields = {k: data[k] for k in (
            "H", "d1", "d2", "delta0", "sup_gap", "t_max", "grid_step",
            "min_gap_observed", "min_gap_t", "asymptotic_bound",
            "monotone_decreasing", "beyond_lemma",
        )}
        for opt in ("d0", "quad_tol", "root_tol", "monotone_tol", "version"):
            if opt in data and data[opt] is not None:
                fields[opt] = data[opt]
        return DisjointnessCertificate(**fields)


def _scan_gaps(
    H: float, d1: float, d2: float, ts: list[float], quad_tol: float
) -> list[float]:
    p1, p2 = CmcParams(H, d1), CmcParams(H, d2)
    gaps = []
    h1 = h2 = None
    for t in ts:
        b1 = b_inverse(p1, t, rho_hint=h1, quad_tol=quad_tol)
        b2 = b_inverse(p2, t, rho_hint=h2, quad_tol=quad_tol)
        h1, h2 = b1, b2
        gaps.append(b2 - b1)
    return gaps


def certify(
    H: float,
    d1: float,
    d2: float,
    t_max: float,
    grid_step: float = GRID_STEP_DEFAULT,
    quad_tol: float = QUAD_TOL,
    monotone_tol: float = MONOTONE_TOL,
    d0: float | None = None,
) -> DisjointnessCertificate:
    """Scan the radial gap on [0, t_max] and assemble a certificate.

    Fails (raises CertificationFailure) if any scanned gap is <= 0 or
    the gap increases beyond `monotone_tol` somewhere on t > 0.  The
    certified infimum combines the scanned minimum with the asymptotic
    bound when the latter is positive; the observed minimum region gets
    one 10x grid refinement.
    """
    _require_d1(d1)
    if not d1 < d2:
        raise PreconditionError(f"need d1 < d2, got {d1} >= {d2}")
    if not t_max > 0.0:
        raise PreconditionError(f"t_max must be positive, got {t_max}")

    n = int(math.floor(t_max / grid_step + 0.5)) + 1
    ts = [min(i * grid_step, t_max) for i in range(n)]
    if ts[-1] < t_max:
        ts.append(t_max)
    gaps = _scan_gaps(H, d1, d2, ts, quad_tol)

    for t, g in zip(ts, gaps):
        if not g > 0.0:
            raise CertificationFailure(
                f"gap non-positive at t = {t}", t=t, values={"gap": g}
            )
    for (ta, ga), (tb, gb) in zip(zip(ts, gaps), zip(ts[1:], gaps[1:])):
        if gb - ga > monotone_tol:
            raise CertificationFailure(
                f"gap increased between t = {ta} and t = {tb}",
                t=tb,
                values={"gap_before": ga, "gap_after": gb},
            )

    i_min = min(range(len(gaps)), key=gaps.__getitem__)
    # refine 10x around the observed minimum
    lo = max(ts[i_min] - grid_step, 0.0)
    hi = min(ts[i_min] + grid_step, t_max)
    fine_step = grid_step / 10.0
    m = int(round((hi - lo) / fine_step))
    fine_ts = [lo + k * fine_step for k in range(m + 1)]
    fine_gaps = _scan_gaps(H, d1, d2, fine_ts, quad_tol)
    j_min = min(range(len(fine_gaps)), key=fine_gaps.__getitem__)
    if fine_gaps[j_min] < gaps[i_min]:
        min_gap, min_t = fine_gaps[j_min], fine_ts[j_min]
    else:
        min_gap, min_t = gaps[i_min], ts[i_min]
    if not min_gap > 0.0:
        raise CertificationFailure(
            f"gap non-positive at t = {min_t}", t=min_t, values={"gap": min_gap}
        )

    asym = separation_lower_bound(H, d1, d2)
    delta0 = min(min_gap, asym) if asym > 0.0 else min_gap
    threshold = d0 if d0 is not None else solve_d0(H, d1)

    return DisjointnessCertificate(
        H=H,
        d1=d1,
        d2=d2,
        delta0=delta0,
        sup_gap=gaps[0],
        t_max=t_max,
        grid_step=grid_step,
        min_gap_observed=min_gap,
        min_gap_t=min_t,
        asymptotic_bound=asym,
        monotone_decreasing=True,
        beyond_lemma=d2 < threshold,
        d0=d0,
        quad_tol=quad_tol,
        monotone_tol=monotone_tol,
    )
