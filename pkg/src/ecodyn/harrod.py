"""Capital-income growth models: exponential, corrected, and discrete forms.

The classical model equates capital to the income flow through a constant
ratio and yields exponential growth Y0*exp(mu*t/nu).  Relating capital to
the integral of income instead yields Y0/(1 - sigma*t)^2 with
sigma = mu/nu_star: finite forecast horizon, pole at sigma^-1.  The yearly
discrete recursion produces a geometric partial sum whose mismatch with
the exponential is quantified by the adequacy residuals.

Time is the dimensionless year count t_hat = t/t_star throughout; physical
rendering is a presentation concern of the CLI.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CrossCheckError, PoleError, ValidationError
from .odelin import TimeGrid, Trajectory, rk4_integrate, sup_rel_diff

POLE_GUARD_REL = 1e-6


@dataclass(frozen=True)
class HarrodParams:
    """Accumulation share mu in (0,1), base capital/income ratio nu_star
    (years), year length t_star, initial income intensity Y0 (money/time)
    and initial capital K0 (money)."""

    mu: float
    nu_star: float
    t_star: float = 1.0
    Y0: float = 1.0
    K0: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.mu < 1.0:
            raise ValidationError("mu must lie in [0, 1)", key="mu")
        if self.nu_star <= 0.0:
            raise ValidationError("nu_star must be positive", key="nu-star")
        if self.t_star <= 0.0:
            raise ValidationError("t_star must be positive", key="t-star")
        if self.Y0 <= 0.0:
            raise ValidationError("Y0 must be positive", key="y0")
        if self.K0 <= 0.0:
            raise ValidationError("K0 must be positive", key="k0")

    @property
    def sigma(self) -> float:
        return self.mu / self.nu_star


@dataclass(frozen=True)
class FlowDecomposition:
    """Income split Y = C + S with S = I = mu*Y at every node."""

    Y: np.ndarray
    C: np.ndarray
    S: np.ndarray
    I: np.ndarray

    def validate(self, rtol: float = 1e-12) -> None:
        scale = max(float(np.max(np.abs(self.Y))), 1e-300)
        for name, resid in (
            ("Y = C + S", self.Y - (self.C + self.S)),
            ("S = I", self.S - self.I),
        ):
            if float(np.max(np.abs(resid))) / scale > rtol:
                raise ValidationError(f"flow identity violated: {name}")


def _flows(mu: float, Y: np.ndarray) -> FlowDecomposition:
    S = mu * Y
    flows = FlowDecomposition(Y=Y, C=(1.0 - mu) * Y, S=S, I=S.copy())
    flows.validate()
    return flows


def classical_trajectory(
    params: HarrodParams,
    nu: float,
    grid: TimeGrid,
    cross_check: bool = True,
) -> Trajectory:
    """Exponential-growth income path Y(t_hat) = Y0 * exp(mu*t_hat/nu).

    Emits Y together with its consumption/accumulation/investment split.
    When ``cross_check`` is set the closed form is validated against an
    independent RK4 integration of Ydot = (mu/nu) Y to 1e-8 relative.
    """
    if nu <= 0.0:
        raise ValidationError("nu must be positive", key="nu")
    t = grid.nodes
    rate = params.mu / nu
    Y = params.Y0 * np.exp(rate * t)
    if cross_check:
        numeric = rk4_integrate(
            lambda _, x: rate * x,
            [params.Y0 * math.exp(rate * t[0])],
            grid,
            substeps=_substeps_for(abs(rate), grid.h),
        )
        dev = sup_rel_diff(Y, numeric.values[:, 0])
        if dev > 1e-8:
            raise CrossCheckError(
                f"closed form vs RK4 deviation {dev:.3e} exceeds 1e-8"
            )
    flows = _flows(params.mu, Y)
    values = np.column_stack([flows.Y, flows.C, flows.S, flows.I])
    return Trajectory(grid, values, ("Y", "C", "S", "I"))


@dataclass(frozen=True)
class CorrectedHarrodResult:
    trajectory: Trajectory
    blowup_time: float
    forecast_horizon: float


def corrected_trajectory(
    params: HarrodParams,
    grid: TimeGrid,
    cross_check: bool = True,
) -> CorrectedHarrodResult:
    """Income path Y(t_hat) = Y0 / (1 - sigma*t_hat)^2, sigma = mu/nu_star.

    The solution loses meaning at t_hat = 1/sigma, so grids reaching
    (1 - 1e-6)/sigma are rejected with a PoleError.  Returns the pole
    location and the conditional forecast horizon 0.5/sigma alongside the
    trajectory.  ``cross_check`` validates against RK4 of
    Ydot = 2*sigma/(1 - sigma*t_hat) * Y to 1e-6 relative.
    """
    sigma = params.sigma
    blowup = math.inf if sigma == 0.0 else 1.0 / sigma
    horizon = math.inf if sigma == 0.0 else 0.5 / sigma
    guard = blowup * (1.0 - POLE_GUARD_REL)
    if grid.t_start < 0.0:
        raise ValidationError("grid must start at t_hat >= 0", key="t-start")
    if grid.t_end >= guard:
        raise PoleError(
            f"grid reaches t_hat={grid.t_end!r}, inside the guard of the pole "
            f"at t_hat = {blowup!r}",
            pole_location=blowup,
        )
    t = grid.nodes
    Y = params.Y0 / (1.0 - sigma * t) ** 2
    if cross_check and sigma > 0.0:
        rate_max = 2.0 * sigma / (1.0 - sigma * grid.t_end)
        numeric = rk4_integrate(
            lambda s, x: (2.0 * sigma / (1.0 - sigma * s)) * x,
            [params.Y0 / (1.0 - sigma * t[0]) ** 2],
            grid,
            substeps=_substeps_for(rate_max, grid.h),
        )
        dev = sup_rel_diff(Y, numeric.values[:, 0])
        if dev > 1e-6:
            raise CrossCheckError(
                f"closed form vs RK4 deviation {dev:.3e} exceeds 1e-6"
            )
    traj = Trajectory(grid, Y, ("Y",))
    return CorrectedHarrodResult(traj, blowup_time=blowup, forecast_horizon=horizon)


def _substeps_for(rate: float, h: float, target: float = 0.02, cap: int = 64) -> int:
    """Substeps keeping rate*h_eff below ``target`` so RK4 meets the check tolerances."""
    if rate <= 0.0:
        return 1
    return min(cap, max(1, math.ceil(rate * h / target)))


@dataclass(frozen=True)
class DiscretePath:
    """Yearly capital/income/investment volumes of the discrete recursion.

    ``impulses`` lists (year, jump K_i - K_{i-1}) for years 1..n: the data
    representation of the distributional derivative of the piecewise-
    constant capital.
    """

    years: np.ndarray
    K: np.ndarray
    Y_tilde: np.ndarray
    I_tilde: np.ndarray
    impulses: tuple[tuple[int, float], ...]

    @property
    def impulse_total(self) -> float:
        return float(sum(w for _, w in self.impulses))


def discrete_path(params: HarrodParams, nu: float, n: int) -> DiscretePath:
    """Yearly path K_n = K0 * sum_{i<=n} alpha^i with alpha = mu/nu.

    Y_tilde_n = K_n/nu and I_tilde_n = K_n*mu/nu.  The iterative
    recursion is asserted against the closed geometric-sum form (or the
    linear (n+1)*Y_tilde_0 branch at alpha = 1) to 1e-12 relative.
    """
    if nu <= 0.0:
        raise ValidationError("nu must be positive", key="nu")
    if n < 0:
        raise ValidationError("n must be >= 0", key="n")
    alpha = params.mu / nu
    if alpha > 1.0:
        raise ValidationError(
            f"alpha = mu/nu = {alpha!r} exceeds 1, outside the model's range",
            key="nu",
        )
    K = np.empty(n + 1)
    K[0] = params.K0
    for i in range(1, n + 1):
        K[i] = params.K0 + alpha * K[i - 1]
    # closed form check
    if alpha == 1.0:
        K_closed = params.K0 * (np.arange(n + 1) + 1.0)
    else:
        powers = np.arange(1, n + 2)
        K_closed = params.K0 * (1.0 - alpha**powers) / (1.0 - alpha)
    dev = sup_rel_diff(K_closed, K)
    if dev > 1e-12:
        raise ValidationError(f"recursion vs closed form deviation {dev:.3e}")
    Y_tilde = K / nu
    I_tilde = K * (params.mu / nu)
    impulses = tuple((i, float(K[i] - K[i - 1])) for i in range(1, n + 1))
    return DiscretePath(
        years=np.arange(n + 1),
        K=K,
        Y_tilde=Y_tilde,
        I_tilde=I_tilde,
        impulses=impulses,
    )


@dataclass(frozen=True)
class AdequacyResidual:
    """How far the exponential yearly path is from the geometric one.

    ``residual_154`` = |alpha*n - ln((1-alpha^(n+1))/(1-alpha))|,
    ``residual_155`` = |alpha - ln((1-alpha^(n+1))/(1-alpha^n))|;
    both strictly positive for alpha in (0,1), n >= 1.
    """

    alpha: float
    n: int
    lhs_exp: float
    rhs_rational: float
    residual_154: float
    residual_155: float

    @property
    def mismatch_ratio(self) -> float:
        return self.lhs_exp / self.rhs_rational


def adequacy_residual(alpha: float, n: int) -> AdequacyResidual:
    """Evaluate both inadequacy residuals at (alpha, n).

    alpha in {0, 1} is rejected as a trivial case, as is n < 1.
    """
    if alpha in (0.0, 1.0):
        raise ValidationError("alpha = 0 and alpha = 1 are trivial cases", key="alpha")
    if not 0.0 < alpha < 1.0:
        raise ValidationError("alpha must lie in (0, 1)", key="alpha")
    if n < 1:
        raise ValidationError("n must be >= 1 (n = 0 is trivial)", key="n")
    lhs_exp = math.exp(alpha * n)
    rhs_rational = (1.0 - alpha ** (n + 1)) / (1.0 - alpha)
    residual_154 = abs(alpha * n - math.log(rhs_rational))
    residual_155 = abs(
        alpha - math.log((1.0 - alpha ** (n + 1)) / (1.0 - alpha**n))
    )
    return AdequacyResidual(
        alpha=alpha,
        n=n,
        lhs_exp=lhs_exp,
        rhs_rational=rhs_rational,
        residual_154=residual_154,
        residual_155=residual_155,
    )
