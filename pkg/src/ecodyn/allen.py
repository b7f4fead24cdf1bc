"""Flow-form growth and multiplier-accelerator models plus the
time-scale-invariance diagnostic.

All models here are stated in normalized time and re-dimensionalized
through an arbitrary scale t0.  A reliable model cannot depend on that
choice; ``scale_invariance_check`` runs a model under two scales and
measures the deviation of the physical trajectories, which is the
operational form of that criticism.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CrossCheckError, ValidationError
from .odelin import (
    OdeSpec,
    TimeGrid,
    Trajectory,
    analytic_solution,
    char_roots,
    rk4_integrate,
    sup_rel_diff,
)

SCALE_DEVIATION_THRESHOLD = 1e-6


@dataclass(frozen=True)
class AllenScaling:
    """Arbitrary time scale t0, year length t_star, and the reference flow
    intensities that normalize Y, C, I and Z."""

    t0: float
    t_star: float = 1.0
    Y0: float = 1.0
    C0: float = 1.0
    I0: float = 1.0
    Z0: float = 1.0

    def __post_init__(self):
        for key in ("t0", "t_star", "Y0", "C0", "I0", "Z0"):
            if getattr(self, key) <= 0.0:
                raise ValidationError(f"{key} must be positive", key=key)

    @property
    def k1(self) -> float:
        return self.Y0 / self.C0

    @property
    def k2(self) -> float:
        return self.Y0 / self.I0

    @property
    def k3(self) -> float:
        return self.Y0 / self.Z0

    @property
    def rho(self) -> float:
        return self.t0 / self.t_star


@dataclass(frozen=True)
class PhillipsParams:
    """Reaction rate kappa, accelerator power nu, multiplier mu, demand
    reaction rate lam.  The reduced second-order coefficients a1, b1 are
    derived, never stored."""

    kappa: float
    nu: float
    mu: float
    lam: float

    def __post_init__(self):
        if self.kappa <= 0.0:
            raise ValidationError("kappa must be positive", key="kappa")
        if self.nu < 0.0:
            raise ValidationError("nu must be nonnegative", key="nu")
        if not 0.0 < self.mu < 1.0:
            raise ValidationError("mu must lie in (0, 1)", key="mu")
        if self.lam <= 0.0:
            raise ValidationError("lam must be positive", key="lam")

    @property
    def a1(self) -> float:
        return self.kappa + self.mu * self.lam - self.kappa * self.nu * self.lam

    @property
    def b1(self) -> float:
        return self.kappa * self.nu * self.lam


def harrod_domar_trajectory(
    scaling: AllenScaling,
    mu: float,
    nu: float,
    grid: TimeGrid,
    cross_check: bool = True,
) -> Trajectory:
    """Y(t) = Y0 * exp(mu*t/(nu*t0)) on a physical-time grid, with C and I
    recovered from the flow identities k1*C = (1-mu)*Y and k2*I = mu*Y.

    The exponent carries the arbitrary scale t0: doubling t0 halves the
    exponent, which is the model's structural defect.
    """
    if not 0.0 < mu < 1.0:
        raise ValidationError("mu must lie in (0, 1)", key="mu")
    if nu <= 0.0:
        raise ValidationError("nu must be positive", key="nu")
    t = grid.nodes
    rate = mu / (nu * scaling.t0)
    Y = scaling.Y0 * np.exp(rate * t)
    if cross_check:
        numeric = rk4_integrate(
            lambda _, x: rate * x,
            [scaling.Y0 * math.exp(rate * t[0])],
            grid,
            substeps=max(1, min(64, math.ceil(rate * grid.h / 0.02))),
        )
        dev = sup_rel_diff(Y, numeric.values[:, 0])
        if dev > 1e-8:
            raise CrossCheckError(f"closed form vs RK4 deviation {dev:.3e} exceeds 1e-8")
    C = (1.0 - mu) * Y / scaling.k1
    I = mu * Y / scaling.k2
    return Trajectory(grid, np.column_stack([Y, C, I]), ("Y", "C", "I"))


@dataclass(frozen=True)
class PhillipsSolution:
    """Income path of the accelerator-multiplier model plus its roots."""

    trajectory: Trajectory  # columns Y, Ydot (derivative w.r.t. t_hat)
    roots: tuple[complex, ...]
    a: float
    b: float
    period_t_hat: float | None


def phillips_solve(
    params: PhillipsParams,
    scaling: AllenScaling,
    init: tuple[float, float],
    grid: TimeGrid,
) -> PhillipsSolution:
    """Solve Yddot + a*Ydot + b*Y = 0 in year time t_hat, with a = a1/rho
    and b = b1/rho^2.

    Roots are computed with the standard quadratic-root convention
    (-a1 +/- sqrt(a1^2 - 4 b1))/(2 rho); some printings show +a1 in this
    place, which is not used here.  When the roots are complex the
    oscillation period in t_hat, 2*pi/|Im p|, is reported; it scales
    linearly with rho, so the physical period depends on the arbitrary
    scale t0.
    """
    rho = scaling.rho
    a = params.a1 / rho
    b = params.b1 / rho**2
    spec = OdeSpec((1.0, a, b))
    traj = analytic_solution(spec, list(init), grid, derivatives=1)
    traj = Trajectory(traj.grid, traj.values, ("Y", "Ydot"))
    roots = tuple(r for r, _ in char_roots(spec))
    period = None
    im = max(abs(r.imag) for r in roots)
    if im > 0.0:
        period = 2.0 * math.pi / im
    return PhillipsSolution(trajectory=traj, roots=roots, a=a, b=b, period_t_hat=period)


def phillips_system_residuals(
    solution: PhillipsSolution,
    params: PhillipsParams,
    scaling: AllenScaling,
) -> dict[str, float]:
    """Sup-norm residuals of the three original flow equations.

    I and Z are reconstructed from Y through the algebraic relations
    k2*I = mu*Y + (rho/lam)*Ydot and k3*Z = Y + (rho/lam)*Ydot; the
    investment equation rho*(k2*I)' = -kappa*(k2*I - nu*rho*Ydot) is then
    checked with fourth-order finite differences at interior nodes.  Its
    residual vanishes only where the second-order reduction with
    b1 = kappa*nu*lam is consistent with the flow system, i.e. at
    mu = nu; elsewhere the residual exposes the printed coefficient.
    """
    traj = solution.trajectory
    t = traj.times
    h = traj.grid.h
    Y = traj.column("Y")
    Yd = traj.column("Ydot")
    rho = scaling.rho
    k3Z = Y + (rho / params.lam) * Yd
    k2I = params.mu * Y + (rho / params.lam) * Yd

    def d_dt4(f: np.ndarray) -> np.ndarray:
        # 4th-order central differences on interior nodes 2..-2
        return (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / (12.0 * h)

    interior = slice(2, -2)
    scale = max(float(np.max(np.abs(Y))), 1e-300)
    res_income = rho * d_dt4(Y) + params.lam * (Y[interior] - k3Z[interior])
    res_demand = k3Z - ((1.0 - params.mu) * Y + k2I)
    res_invest = rho * d_dt4(k2I) + params.kappa * (
        k2I[interior] - params.nu * rho * Yd[interior]
    )
    return {
        "income": float(np.max(np.abs(res_income))) / scale,
        "demand": float(np.max(np.abs(res_demand))) / scale,
        "investment": float(np.max(np.abs(res_invest))) / scale,
    }


def phillips_capital_roots(
    params: PhillipsParams,
    t0: float,
    t_star: float = 1.0,
) -> list[complex]:
    """Roots of the capital cubic t0^2 p^3 + t0*a1 p^2 + b1 p = 0.

    The root p = 0 is always present; the two nonzero roots equal the
    second-order income roots when t0 = t_star, which is asserted to
    1e-10.  Scaling t0 -> c*t0 divides the nonzero roots by c.
    """
    if t0 <= 0.0:
        raise ValidationError("t0 must be positive", key="t0")
    spec = OdeSpec((t0**2, t0 * params.a1, params.b1, 0.0))
    roots = [r for r, m in char_roots(spec) for _ in range(m)]
    if math.isclose(t0, t_star, rel_tol=1e-12):
        quad = [r for r, _ in char_roots(OdeSpec((1.0, params.a1, params.b1)))]
        nonzero = sorted(
            (r for r in roots if abs(r) > 1e-12), key=lambda z: (z.real, z.imag)
        )
        quad = sorted(quad, key=lambda z: (z.real, z.imag))
        for rc, rq in zip(nonzero, quad):
            if abs(rc - rq) > 1e-10 * max(1.0, abs(rq)):
                raise CrossCheckError(
                    f"cubic root {rc!r} differs from quadratic root {rq!r}"
                )
    return sorted(roots, key=lambda z: (z.real, z.imag))


@dataclass(frozen=True)
class BergstromResult:
    trajectory: Trajectory  # columns K, Kdot
    roots: tuple[complex, ...]
    damping: float
    stiffness: float
    kappa_equivalent: float


def bergstrom_capital_solve(
    mu: float,
    nu: float,
    gamma: float,
    lam: float,
    init: tuple[float, float],
    grid: TimeGrid,
) -> BergstromResult:
    """Solve the capital form Kddot + (gamma + mu*lam - nu*gamma*lam)*Kdot
    + mu*gamma*lam*K = 0.

    The damping coefficient matches the income-form a1 under gamma =
    kappa, which is reported as ``kappa_equivalent``.
    """
    if not 0.0 < mu < 1.0:
        raise ValidationError("mu must lie in (0, 1)", key="mu")
    if nu < 0.0 or gamma < 0.0 or lam <= 0.0:
        raise ValidationError("nu, gamma must be >= 0 and lam > 0", key="gamma")
    damping = gamma + mu * lam - nu * gamma * lam
    stiffness = mu * gamma * lam
    spec = OdeSpec((1.0, damping, stiffness))
    traj = analytic_solution(spec, list(init), grid, derivatives=1)
    traj = Trajectory(traj.grid, traj.values, ("K", "Kdot"))
    roots = tuple(r for r, _ in char_roots(spec))
    return BergstromResult(
        trajectory=traj,
        roots=roots,
        damping=damping,
        stiffness=stiffness,
        kappa_equivalent=gamma,
    )


def multiplier_trajectory(
    mu: float,
    lam: float,
    Y0: float,
    grid: TimeGrid,
) -> Trajectory:
    """Pure multiplier decay Y(t_hat) = Y0 * exp(-lam*mu*t_hat) with the
    demand component Z = (1 - mu) * Y."""
    if not 0.0 < mu < 1.0:
        raise ValidationError("mu must lie in (0, 1)", key="mu")
    if lam <= 0.0:
        raise ValidationError("lam must be positive", key="lam")
    if Y0 <= 0.0:
        raise ValidationError("Y0 must be positive", key="y0")
    Y = Y0 * np.exp(-lam * mu * grid.nodes)
    Z = (1.0 - mu) * Y
    return Trajectory(grid, np.column_stack([Y, Z]), ("Y", "Z"))


@dataclass(frozen=True)
class ScaleInvarianceReport:
    model: str
    t0_a: float
    t0_b: float
    max_rel_deviation: float
    verdict: str  # "scale_dependent" | "scale_invariant"
    trivially_invariant: bool = False


SCALE_CHECK_MODELS = ("harrod_domar", "phillips", "multiplier", "corrected_harrod")


def _physical_income(model: str, params: dict, t0: float, t_phys: np.ndarray) -> np.ndarray:
    t_star = float(params.get("t_star", 1.0))
    Y0 = float(params.get("Y0", 1.0))
    if model == "harrod_domar":
        rate = params["mu"] / (params["nu"] * t0)
        return Y0 * np.exp(rate * t_phys)
    if model == "multiplier":
        return Y0 * np.exp(-params["lam"] * params["mu"] * t_phys / t0)
    if model == "corrected_harrod":
        sigma = params["mu"] / params["nu_star"]
        return Y0 / (1.0 - sigma * t_phys / t_star) ** 2
    if model == "phillips":
        pp = PhillipsParams(
            kappa=params["kappa"], nu=params["nu"], mu=params["mu"], lam=params["lam"]
        )
        scaling = AllenScaling(t0=t0, t_star=t_star)
        grid = TimeGrid(t_phys[0] / t_star, t_phys[-1] / t_star, len(t_phys) - 1)
        sol = phillips_solve(
            pp, scaling, (Y0, float(params.get("Ydot0", 0.0))), grid
        )
        return sol.trajectory.column("Y")
    raise ValidationError(f"unknown model {model!r}", key="model")


def scale_invariance_check(
    model: str,
    params: dict,
    t0_a: float,
    t0_b: float,
    grid: TimeGrid,
) -> ScaleInvarianceReport:
    """Run ``model`` under the scales t0_a and t0_b on one physical grid
    and report the sup deviation relative to the sup of the first run.

    A deviation above 1e-6 is structural scale dependence (noise in the
    models at hand sits many orders below, structural deviations above
    1e-2).  Models with no t0 parameter are trivially scale invariant and
    flagged as such.
    """
    if t0_a <= 0.0 or t0_b <= 0.0:
        raise ValidationError("time scales must be positive", key="t0-a")
    if t0_a == t0_b:
        raise ValidationError("t0_a and t0_b must differ", key="t0-b")
    if model not in SCALE_CHECK_MODELS:
        raise ValidationError(f"unknown model {model!r}", key="model")
    t_phys = grid.nodes
    Ya = _physical_income(model, params, t0_a, t_phys)
    Yb = _physical_income(model, params, t0_b, t_phys)
    deviation = sup_rel_diff(Ya, Yb)
    trivial = model == "corrected_harrod"
    verdict = (
        "scale_dependent" if deviation > SCALE_DEVIATION_THRESHOLD else "scale_invariant"
    )
    return ScaleInvarianceReport(
        model=model,
        t0_a=t0_a,
        t0_b=t0_b,
        max_rel_deviation=deviation,
        verdict=verdict,
        trivially_invariant=trivial,
    )
