"""Admissibility conditions and perturbation bounds for the three
decomposition methods, and checkers that compare aligned decompositions
against them.

The guarantees all have the same shape: if the noise operator norm
``eps`` is small enough (the *admissibility* precondition), then after
permutation/sign alignment every component satisfies a value bound and a
vector bound.

================  =============================  ==============================
method            value bound                    vector bound (component j)
================  =============================  ==============================
rd  (deflation)   2 eps                          20 eps / |lambda_pi(j)|
cd  (constrained) eps                            (6.2 + 4 kappa) eps / |lambda_pi(j)|
ada (adaptive)    eps                            (6.2 + 4 kappa) eps / |lambda_pi(j)|
rank1 (single)    eps                            10 (eps/|l| + (eps/l)^2)
================  =============================  ==============================

Admissibility: rd needs ``eps <= c lambda_min / n^(1/(p-1))`` with an
unspecified constant (``c`` is configurable, default 1/20, and flagged as
heuristic); cd needs ``theta <= 1/(2 kappa)`` and
``eps <= theta^2 lambda_min / 12.5``; ada needs
``eps <= lambda_min / (70 kappa^2)`` and additionally guarantees the
recorded theta chain satisfies ``1/2 = theta_1 >= ... >= theta_n >
0.96/(2 kappa)``.
"""

from dataclasses import dataclass

import numpy as np

from .decompose import (
    Decomposition,
    MatchReport,
    match_components,
    match_components_exhaustive,
)
from .errors import DataError

__all__ = [
    "SpectralSummary",
    "ComponentCheck",
    "BoundReport",
    "AdmissibleParams",
    "admissible_params",
    "check_rd_bounds",
    "check_cd_bounds",
    "check_ada_invariants",
    "check_rank_one_bounds",
    "rank_one_perturbation_bound",
    "check_with_alignment",
]

RD_DEFAULT_C = 0.05
THETA_CHAIN_START = 0.5
THETA_CHAIN_SHRINK = 0.96


@dataclass(frozen=True)
class SpectralSummary:
    """Spectrum facts of the ground truth: extreme absolute eigenvalues,
    their ratio kappa, and the problem size."""

    lambda_min: float
    lambda_max: float
    kappa: float
    n: int
    p: int

    def __post_init__(self):
        if not self.lambda_min > 0:
            raise DataError("lambda_min must be positive")
        if self.lambda_max < self.lambda_min:
            raise DataError("lambda_max must be >= lambda_min")
        if not self.kappa >= 1 - 1e-12:
            raise DataError("kappa must be >= 1")
        if self.n < 1 or self.p < 2:
            raise DataError("need n >= 1 and p >= 2")

    @classmethod
    def from_values(cls, values, p):
        vals = np.abs(np.asarray(values, dtype=np.float64))
        if vals.ndim != 1 or vals.size == 0:
            raise DataError("values must be a nonempty vector")
        if np.any(vals == 0):
            raise DataError("eigenvalues must be nonzero")
        lo, hi = float(vals.min()), float(vals.max())
        return cls(lambda_min=lo, lambda_max=hi, kappa=hi / lo, n=vals.size, p=int(p))


@dataclass(frozen=True)
class AdmissibleParams:
    """Parameter thresholds under which the guarantees apply."""

    theta_max: float
    eps_max_ada: float
    eps_max_rd: float
    lambda_min: float
    rd_constant: float

    def eps_max_cd(self, theta):
        """Largest admissible noise for constrained deflation at ``theta``."""
        return theta**2 * self.lambda_min / 12.5


def admissible_params(s, c=RD_DEFAULT_C):
    """Thresholds from a spectral summary: ``theta_max = 1/(2 kappa)``,
    ``eps_max_cd(theta) = theta^2 lambda_min / 12.5``,
    ``eps_max_ada = lambda_min / (70 kappa^2)``, and the heuristic
    ``eps_max_rd = c lambda_min / n^(1/(p-1))``."""
    return AdmissibleParams(
        theta_max=1.0 / (2.0 * s.kappa),
        eps_max_ada=s.lambda_min / (70.0 * s.kappa**2),
        eps_max_rd=c * s.lambda_min / s.n ** (1.0 / (s.p - 1)),
        lambda_min=s.lambda_min,
        rd_constant=c,
    )


@dataclass(frozen=True)
class ComponentCheck:
    value_bound: float
    value_ok: bool
    vector_bound: float
    vector_ok: bool

    def to_dict(self):
        return {
            "value_bound": self.value_bound,
            "value_ok": self.value_ok,
            "vector_bound": self.vector_bound,
            "vector_ok": self.vector_ok,
        }


@dataclass(frozen=True, eq=False)
class BoundReport:
    """Per-component pass/fail against one method's bounds.

    ``admissible`` states whether the preconditions hold; ``flags`` holds
    the individual preconditions (and, for ada, the theta-chain facts);
    margins are worst-case error/bound ratios (0 when both vanish, inf
    when a bound is 0 but the error is not).
    """

    theorem: str
    admissible: bool
    flags: dict
    per_component: tuple
    value_margin: float
    vector_margin: float
    notes: tuple = ()

    @property
    def components_ok(self):
        return all(c.value_ok and c.vector_ok for c in self.per_component)

    @property
    def passed(self):
        return self.admissible and self.components_ok and all(self.flags.values())

    def to_dict(self):
        return {
            "theorem": self.theorem,
            "admissible": self.admissible,
            "flags": dict(self.flags),
            "per_component": [c.to_dict() for c in self.per_component],
            "margins": {"value": self.value_margin, "vector": self.vector_margin},
            "components_ok": self.components_ok,
            "passed": self.passed,
            "notes": list(self.notes),
        }


def _ratio(err, bound):
    if bound > 0:
        return err / bound
    return 0.0 if err == 0 else float("inf")


def _components(report, truth_values, value_bound_fn, vector_bound_fn):
    checks = []
    vals = [abs(float(v)) for v in truth_values]
    for j, i in enumerate(report.permutation):
        vb = value_bound_fn(vals[i])
        wb = vector_bound_fn(vals[i])
        checks.append(
            ComponentCheck(
                value_bound=vb,
                value_ok=bool(report.value_errors[j] <= vb),
                vector_bound=wb,
                vector_ok=bool(report.vector_errors[j] <= wb),
            )
        )
    value_margin = max(
        (_ratio(report.value_errors[j], c.value_bound) for j, c in enumerate(checks)),
        default=0.0,
    )
    vector_margin = max(
        (_ratio(report.vector_errors[j], c.vector_bound) for j, c in enumerate(checks)),
        default=0.0,
    )
    return tuple(checks), value_margin, vector_margin


def _check_inputs(report, eps, truth_values):
    if not isinstance(report, MatchReport):
        raise TypeError("report must be a MatchReport")
    if eps < 0:
        raise DataError("eps must be nonnegative")
    if len(truth_values) != len(report.permutation):
        raise DataError(
            f"truth_values length {len(truth_values)} does not match "
            f"report size {len(report.permutation)}"
        )


def check_rd_bounds(report, eps, s, truth_values, c=RD_DEFAULT_C):
    """Residual-deflation bounds: value <= 2 eps, vector <= 20 eps/|l|.

    The admissibility constant is unspecified upstream, so the threshold
    ``eps <= c lambda_min / n^(1/(p-1))`` is heuristic (noted in the
    report).
    """
    _check_inputs(report, eps, truth_values)
    params = admissible_params(s, c=c)
    eps_ok = bool(eps <= params.eps_max_rd)
    checks, vm, wm = _components(
        report,
        truth_values,
        lambda lam: 2.0 * eps,
        lambda lam: 20.0 * eps / lam,
    )
    return BoundReport(
        theorem="rd",
        admissible=eps_ok,
        flags={"eps_within_rd_threshold": eps_ok},
        per_component=checks,
        value_margin=vm,
        vector_margin=wm,
        notes=(
            f"admissibility constant c={c} is heuristic; the guarantee only "
            "asserts existence of some positive c",
        ),
    )


def check_cd_bounds(report, eps, s, truth_values, theta=None):
    """Constrained-deflation bounds: value <= eps, vector <=
    (6.2 + 4 kappa) eps / |l|.

    ``theta`` is the slab width the run used; when omitted, admissibility
    is evaluated at the largest allowed width ``1/(2 kappa)`` (noted).
    """
    _check_inputs(report, eps, truth_values)
    params = admissible_params(s)
    notes = ()
    if theta is None:
        theta = params.theta_max
        notes = ("theta not supplied; admissibility evaluated at theta_max",)
    theta_ok = bool(0 < theta <= params.theta_max + 1e-15)
    eps_ok = bool(eps <= params.eps_max_cd(theta))
    coeff = 6.2 + 4.0 * s.kappa
    checks, vm, wm = _components(
        report,
        truth_values,
        lambda lam: eps,
        lambda lam: coeff * eps / lam,
    )
    return BoundReport(
        theorem="cd",
        admissible=theta_ok and eps_ok,
        flags={"theta_within_max": theta_ok, "eps_within_cd_threshold": eps_ok},
        per_component=checks,
        value_margin=vm,
        vector_margin=wm,
        notes=notes,
    )


def rank_one_perturbation_bound(eps, lam):
    """Vector bound for the single best rank-one approximation:
    ``10 (eps/|l| + (eps/l)^2)``; the value bound is eps itself."""
    if lam == 0:
        raise DataError("lambda must be nonzero")
    if eps < 0:
        raise DataError("eps must be nonnegative")
    r = eps / abs(lam)
    return 10.0 * (r + r * r)


def check_rank_one_bounds(report, eps, s, truth_values):
    """Single-solve bounds: value <= eps, vector <=
    10 (eps/|l| + (eps/l)^2), applied per matched component."""
    _check_inputs(report, eps, truth_values)
    checks, vm, wm = _components(
        report,
        truth_values,
        lambda lam: eps,
        lambda lam: rank_one_perturbation_bound(eps, lam),
    )
    small = bool(eps <= s.lambda_min / 50.0)
    return BoundReport(
        theorem="rank1",
        admissible=True,
        flags={"eps_ratio_within_1_over_50": small},
        per_component=checks,
        value_margin=vm,
        vector_margin=wm,
        notes=(
            "no admissibility precondition; when eps/lambda <= 1/50 the "
            "vector bound simplifies to 10.2 eps/lambda",
        ),
    )


def check_ada_invariants(d, s, eps, report=None, truth_values=None):
    """Adaptive-method checks: theta chain monotone from 1/2 with final
    value above ``0.96/(2 kappa)``, admissibility
    ``eps <= lambda_min/(70 kappa^2)``, plus the constrained-deflation
    component bounds when an aligned MatchReport is supplied.
    """
    if not isinstance(d, Decomposition):
        raise TypeError("d must be a Decomposition")
    if d.thetas is None:
        raise TypeError("decomposition has no theta chain (not an adaptive run)")
    if eps < 0:
        raise DataError("eps must be nonnegative")
    thetas = d.thetas
    starts_ok = bool(abs(thetas[0] - THETA_CHAIN_START) <= 1e-15)
    monotone = bool(
        all(thetas[i + 1] <= thetas[i] + 1e-15 for i in range(len(thetas) - 1))
    )
    floor = THETA_CHAIN_SHRINK / (2.0 * s.kappa)
    floor_ok = bool(thetas[-1] > floor)
    params = admissible_params(s)
    eps_ok = bool(eps <= params.eps_max_ada)
    if report is not None:
        if truth_values is None:
            raise DataError("truth_values required when a report is supplied")
        _check_inputs(report, eps, truth_values)
        coeff = 6.2 + 4.0 * s.kappa
        checks, vm, wm = _components(
            report,
            truth_values,
            lambda lam: eps,
            lambda lam: coeff * eps / lam,
        )
    else:
        checks, vm, wm = (), 0.0, 0.0
    return BoundReport(
        theorem="ada",
        admissible=eps_ok,
        flags={
            "eps_within_ada_threshold": eps_ok,
            "theta_starts_at_half": starts_ok,
            "theta_monotone": monotone,
            "theta_above_floor": floor_ok,
        },
        per_component=checks,
        value_margin=vm,
        vector_margin=wm,
    )


_CHECKERS = {
    "rd": check_rd_bounds,
    "cd": check_cd_bounds,
    "rank1": check_rank_one_bounds,
}


def check_with_alignment(truth, est, eps, s, theorem, theta=None, c=RD_DEFAULT_C):
    """Align ``est`` against ``truth`` and check one method's bounds.

    Starts from the greedy alignment; because the guarantees only assert
    that *some* permutation works, a failed check retries with the
    exhaustive alignment (n <= 8) before reporting failure.  Returns
    ``(MatchReport, BoundReport)``.
    """
    truth = tuple(truth.pairs) if isinstance(truth, Decomposition) else tuple(truth)
    truth_values = [p.value for p in truth]

    def run(report):
        if theorem == "ada":
            return check_ada_invariants(
                est, s, eps, report=report, truth_values=truth_values
            )
        if theorem == "cd":
            return check_cd_bounds(report, eps, s, truth_values, theta=theta)
        if theorem == "rd":
            return check_rd_bounds(report, eps, s, truth_values, c=c)
        if theorem == "rank1":
            return check_rank_one_bounds(report, eps, s, truth_values)
        raise ValueError(f"unknown theorem {theorem!r}")

    report = match_components(truth, est)
    bound = run(report)
    if not bound.components_ok and len(truth) <= 8:
        alt_report = match_components_exhaustive(truth, est)
        alt_bound = run(alt_report)
        if alt_bound.components_ok or (
            max(alt_bound.value_margin, alt_bound.vector_margin)
            < max(bound.value_margin, bound.vector_margin)
        ):
            return alt_report, alt_bound
    return report, bound
