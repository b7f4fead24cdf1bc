"""Second-kind integral equation machinery on [0, 1].

Nystrom discretization (composite Simpson by default, Gauss-Legendre as
an alternative rule), direct solves of phi = lambda*K phi + q, the
resolvent, characteristic numbers with eigenfunctions, singularity sweeps
for kernels k0 + mu*k1, and the classic reduction of a constant-
coefficient ODE to a Volterra (initial data) or Fredholm (two-point data)
equation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DegenerateDataError,
    ResolutionError,
    SpectrumProximityError,
    ValidationError,
)
from .odelin import OdeSpec, TimeGrid, Trajectory

SPECTRUM_PROXIMITY_TOL = 1e-8
EIGEN_DISCARD_DEFAULT = 1e-10
SINGULARITY_FLAG_REL = 1e-6


@dataclass(frozen=True)
class KernelSpec:
    """Pure kernel evaluator k(t, eta) on [0, 1]^2.

    ``params`` records named constants baked into the evaluator (lambda
    is reserved for the equation multiplier, mu for an embedded kernel
    parameter).  When a separable form sum_i g_i(t) h_i(eta) is supplied
    it is verified against the evaluator on a sample lattice to 1e-12.
    """

    evaluator: Callable[[float, float], float]
    params: tuple[tuple[str, float], ...] = ()
    separable: tuple[tuple[Callable[[float], float], Callable[[float], float]], ...] | None = None
    name: str = "kernel"

    def __post_init__(self):
        probe = np.linspace(0.0, 1.0, 5)
        for t in probe:
            for e in probe:
                v = self.evaluator(float(t), float(e))
                if not math.isfinite(v):
                    raise ValidationError(
                        f"kernel {self.name!r} is not finite at ({t}, {e})"
                    )
                if self.separable is not None:
                    s = sum(g(float(t)) * h(float(e)) for g, h in self.separable)
                    if abs(s - v) > 1e-12 * max(1.0, abs(v)):
                        raise ValidationError(
                            f"separable form of {self.name!r} deviates from the "
                            f"evaluator at ({t}, {e}): {s!r} vs {v!r}"
                        )

    def __call__(self, t: float, eta: float) -> float:
        return self.evaluator(t, eta)


def kernel_t_plus_eta() -> KernelSpec:
    return KernelSpec(
        evaluator=lambda t, e: t + e,
        separable=((lambda t: t, lambda e: 1.0), (lambda t: 1.0, lambda e: e)),
        name="t-plus-eta",
    )


def kernel_exp_diff() -> KernelSpec:
    return KernelSpec(
        evaluator=lambda t, e: math.exp(t - e),
        separable=((math.exp, lambda e: math.exp(-e)),),
        name="exp-diff",
    )


def kernel_zero() -> KernelSpec:
    return KernelSpec(evaluator=lambda t, e: 0.0, name="zero")


def canonical_rho(t: float) -> float:
    """Unit-normalized profile: int_0^1 rho^2 = 1."""
    return 1.0


def canonical_sigma(t: float) -> float:
    """Profile orthogonal to canonical_rho: int_0^1 rho*sigma = 0."""
    return t - 0.5


def kernel_rho_rho(
    rho: Callable[[float], float] = canonical_rho,
) -> KernelSpec:
    return KernelSpec(
        evaluator=lambda t, e: rho(t) * rho(e),
        separable=((rho, rho),),
        name="rho-rho",
    )


def kernel_sigma_rho(
    sigma: Callable[[float], float] = canonical_sigma,
    rho: Callable[[float], float] = canonical_rho,
) -> KernelSpec:
    return KernelSpec(
        evaluator=lambda t, e: sigma(t) * rho(e),
        separable=((sigma, rho),),
        name="sigma-rho",
    )


def kernel_degenerate(
    mu: float,
    rho: Callable[[float], float] = canonical_rho,
    sigma: Callable[[float], float] = canonical_sigma,
) -> KernelSpec:
    """rho(t)rho(eta) + mu*sigma(t)rho(eta): carries rho + mu*sigma as a
    homogeneous solution for every mu once rho is unit-normalized and
    orthogonal to sigma."""
    return KernelSpec(
        evaluator=lambda t, e: (rho(t) + mu * sigma(t)) * rho(e),
        params=(("mu", mu),),
        separable=((rho, rho), (lambda t: mu * sigma(t), rho)),
        name="degenerate",
    )


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and positive weights for int_0^1; weights sum to one."""

    nodes: np.ndarray
    weights: np.ndarray
    name: str

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        if np.any(np.diff(nodes) <= 0.0):
            raise ValidationError("quadrature nodes must be strictly increasing")
        if np.any(weights <= 0.0):
            raise ValidationError("quadrature weights must be positive")
        if abs(float(np.sum(weights)) - 1.0) > 1e-14:
            raise ValidationError("quadrature weights must sum to 1 within 1e-14")

    @property
    def n(self) -> int:
        return len(self.nodes)


def simpson_rule(n_nodes: int = 201) -> QuadratureRule:
    """Composite Simpson on [0, 1]; requires an odd node count >= 3."""
    if n_nodes < 3 or n_nodes % 2 == 0:
        raise ValidationError("Simpson needs an odd node count >= 3", key="nodes")
    h = 1.0 / (n_nodes - 1)
    w = np.full(n_nodes, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    w *= h / 3.0
    w /= float(np.sum(w))  # remove rounding drift so the sum is exactly 1
    return QuadratureRule(np.linspace(0.0, 1.0, n_nodes), w, "simpson")


def gauss_legendre_rule(n_nodes: int = 64) -> QuadratureRule:
    if n_nodes < 2:
        raise ValidationError("need at least 2 Gauss nodes", key="nodes")
    x, w = np.polynomial.legendre.leggauss(n_nodes)
    nodes = 0.5 * (x + 1.0)
    weights = 0.5 * w
    weights = weights / float(np.sum(weights))
    return QuadratureRule(nodes, weights, "gauss-legendre")


@dataclass
class NystromDiscretization:
    """Kernel sampled on a quadrature rule: K[i, j] = k(t_i, eta_j)."""

    kernel: KernelSpec
    rule: QuadratureRule
    K: np.ndarray = field(init=False)
    _weighted_eigs: np.ndarray | None = field(init=False, default=None, repr=False)

    def __post_init__(self):
        t = self.rule.nodes
        self.K = np.array(
            [[self.kernel(float(ti), float(ej)) for ej in t] for ti in t]
        )

    @property
    def nodes(self) -> np.ndarray:
        return self.rule.nodes

    @property
    def weights(self) -> np.ndarray:
        return self.rule.weights

    def weighted(self) -> np.ndarray:
        return self.K * self.weights[None, :]

    def weighted_eigs(self) -> np.ndarray:
        if self._weighted_eigs is None:
            self._weighted_eigs = np.linalg.eigvals(self.weighted())
        return self._weighted_eigs

    def apply(self, phi: np.ndarray) -> np.ndarray:
        """Quadrature application of the kernel operator to node values."""
        return self.K @ (self.weights * phi)


def _guard_spectrum(disc: NystromDiscretization, lam: float) -> None:
    if lam == 0.0:
        return
    eigs = disc.weighted_eigs()
    dist = np.abs(1.0 / lam - eigs)
    j = int(np.argmin(dist))
    if dist[j] < SPECTRUM_PROXIMITY_TOL:
        mu = eigs[j]
        nearest = 1.0 / mu if mu != 0 else math.inf
        raise SpectrumProximityError(
            f"lambda = {lam!r} sits within {SPECTRUM_PROXIMITY_TOL} of the "
            f"characteristic number {nearest!r}",
            nearest_characteristic_number=complex(nearest),
        )


@dataclass
class NystromSolution:
    disc: NystromDiscretization
    lam: float
    q: Callable[[float], float]
    phi: np.ndarray

    def __call__(self, t: float) -> float:
        """Off-node value by the natural interpolation
        phi(t) = q(t) + lambda * sum_j w_j k(t, eta_j) phi_j."""
        disc = self.disc
        acc = 0.0
        for wj, ej, pj in zip(disc.weights, disc.nodes, self.phi):
            acc += wj * disc.kernel(float(t), float(ej)) * pj
        return self.q(t) + self.lam * acc


def nystrom_solve(
    disc: NystromDiscretization,
    lam: float,
    q: Callable[[float], float],
) -> NystromSolution:
    """Solve (Id - lambda*K*diag(w)) phi = q at the nodes.

    Rejects lambda whose reciprocal sits within 1e-8 of an eigenvalue of
    the weighted kernel matrix, naming the nearest characteristic number.
    """
    _guard_spectrum(disc, lam)
    qv = np.array([q(float(t)) for t in disc.nodes])
    n = disc.rule.n
    phi = np.linalg.solve(np.eye(n) - lam * disc.weighted(), qv)
    return NystromSolution(disc=disc, lam=lam, q=q, phi=phi)


def resolvent(disc: NystromDiscretization, lam: float) -> np.ndarray:
    """Node samples of H(t, eta, lambda) = (Id - lambda*K*W)^-1 K, so that
    phi = q + lambda * (quadrature apply of H to q)."""
    _guard_spectrum(disc, lam)
    n = disc.rule.n
    return np.linalg.solve(np.eye(n) - lam * disc.weighted(), disc.K)


def resolvent_apply(
    disc: NystromDiscretization, H: np.ndarray, lam: float, q_nodes: np.ndarray
) -> np.ndarray:
    return q_nodes + lam * (H @ (disc.weights * q_nodes))


@dataclass(frozen=True)
class SpectralReport:
    nodes: np.ndarray
    characteristic_numbers: tuple[complex, ...]
    eigenfunctions: np.ndarray  # shape (len(characteristic_numbers), n)
    discard_threshold: float


def char_numbers(
    disc: NystromDiscretization,
    discard_threshold: float = EIGEN_DISCARD_DEFAULT,
) -> SpectralReport:
    """Characteristic numbers lambda_i = 1/mu_i from the eigenvalues mu_i
    of K*diag(w) with |mu_i| above the discard threshold.

    Eigenfunctions are normalized to sup-norm 1 with the max-modulus
    entry made real positive; every reported pair satisfies
    ||phi - lambda * K_w phi||_inf <= 1e-6."""
    eigvals, eigvecs = np.linalg.eig(disc.weighted())
    pairs = []
    for mu, vec in zip(eigvals, eigvecs.T):
        if abs(mu) <= discard_threshold:
            continue
        lam = 1.0 / mu
        j = int(np.argmax(np.abs(vec)))
        phi = vec / vec[j]
        resid = float(np.max(np.abs(phi - lam * disc.apply(phi))))
        if resid > 1e-6:
            continue  # numerically spurious pair
        pairs.append((complex(lam), phi))
    pairs.sort(key=lambda p: (abs(p[0]), p[0].real, p[0].imag))
    lams = tuple(p[0] for p in pairs)
    if pairs:
        funcs = np.vstack([p[1] for p in pairs])
        if np.iscomplexobj(funcs) and np.all(np.abs(funcs.imag) < 1e-300):
            funcs = funcs.real
    else:
        funcs = np.empty((0, disc.rule.n))
    return SpectralReport(
        nodes=disc.nodes,
        characteristic_numbers=lams,
        eigenfunctions=funcs,
        discard_threshold=discard_threshold,
    )


@dataclass(frozen=True)
class SweepReport:
    mu_values: tuple[float, ...]
    smallest_singular_values: tuple[float, ...]
    flagged: tuple[bool, ...]
    classification: str  # "exceptional" | "non_exceptional"

    @property
    def flagged_mus(self) -> tuple[float, ...]:
        return tuple(m for m, f in zip(self.mu_values, self.flagged) if f)


def param_singularity_sweep(
    k0: KernelSpec,
    k1: KernelSpec,
    mu_grid: Sequence[float],
    rule: QuadratureRule | None = None,
) -> SweepReport:
    """Smallest singular value of Id - (K0 + mu*K1)*diag(w) over a mu grid.

    A value below 1e-6 times the matrix norm flags mu as numerically
    exceptional.  Isolated flags mirror the countable-set alternative
    ("non_exceptional" kernel); adjacent flags on the grid indicate the
    everywhere-singular alternative ("exceptional").
    """
    if len(mu_grid) == 0:
        raise ValidationError("mu grid must be nonempty", key="mu-grid")
    rule = rule or simpson_rule()
    d0 = NystromDiscretization(k0, rule)
    d1 = NystromDiscretization(k1, rule)
    w = rule.weights[None, :]
    eye = np.eye(rule.n)
    sigma_mins: list[float] = []
    flags: list[bool] = []
    for mu in mu_grid:
        M = eye - (d0.K + mu * d1.K) * w
        svals = np.linalg.svd(M, compute_uv=False)
        smin, smax = float(svals[-1]), float(svals[0])
        sigma_mins.append(smin)
        flags.append(smin < SINGULARITY_FLAG_REL * smax)
    adjacent = any(flags[i] and flags[i + 1] for i in range(len(flags) - 1))
    if len(flags) == 1:
        classification = "exceptional" if flags[0] else "non_exceptional"
    else:
        classification = "exceptional" if adjacent else "non_exceptional"
    return SweepReport(
        mu_values=tuple(float(m) for m in mu_grid),
        smallest_singular_values=tuple(sigma_mins),
        flagged=tuple(flags),
        classification=classification,
    )


@dataclass(frozen=True)
class DegenerateResidual:
    mu: float
    residual: float
    rho_square_integral: float
    rho_sigma_integral: float


def degenerate_residual(
    rho: Callable[[float], float],
    sigma: Callable[[float], float],
    mu: float,
    rule: QuadratureRule | None = None,
) -> DegenerateResidual:
    """Sup residual of phi = rho + mu*sigma in the homogeneous equation
    with kernel rho(t)rho(eta) + mu*sigma(t)rho(eta).

    Requires int rho^2 = 1 and int rho*sigma = 0 within 1e-8 (measured
    with the rule's weights); then the residual is at quadrature level
    for any mu.
    """
    rule = rule or simpson_rule()
    t = rule.nodes
    w = rule.weights
    rho_v = np.array([rho(float(x)) for x in t])
    sigma_v = np.array([sigma(float(x)) for x in t])
    rho_sq = float(np.sum(w * rho_v**2))
    rho_sig = float(np.sum(w * rho_v * sigma_v))
    if abs(rho_sq - 1.0) > 1e-8 or abs(rho_sig) > 1e-8:
        raise ValidationError(
            "side conditions violated: int rho^2 = "
            f"{rho_sq!r} (need 1), int rho*sigma = {rho_sig!r} (need 0)"
        )
    phi = rho_v + mu * sigma_v
    inner = float(np.sum(w * rho_v * phi))
    reproduced = (rho_v + mu * sigma_v) * inner
    residual = float(np.max(np.abs(phi - reproduced)))
    return DegenerateResidual(
        mu=mu,
        residual=residual,
        rho_square_integral=rho_sq,
        rho_sigma_integral=rho_sig,
    )


# ---------------------------------------------------------------------------
# Reduction of a constant-coefficient ODE to an integral equation
# ---------------------------------------------------------------------------

BoundaryCondition = tuple[int, float, float]  # (derivative order, location, value)


@dataclass(frozen=True)
class OdeReductionSolution:
    trajectory: Trajectory  # column z on the output grid
    phi: np.ndarray  # z^(n) at the output nodes
    constants: tuple[float, ...]  # c_i = z^(i)(0) implied by the data


def _volterra_kernel(a: tuple[float, ...], n: int) -> Callable[[float, float], float]:
    def kappa(t: float, eta: float) -> float:
        d = t - eta
        acc = 0.0
        for k, ak in enumerate(a):
            m = n - 1 - k
            acc -= ak * d**m / math.factorial(m)
        return acc

    return kappa


def _poly_part(a: tuple[float, ...], c: np.ndarray, n: int, t: np.ndarray) -> np.ndarray:
    """sum_k a_k P_k(t) with P_k(t) = sum_{i>=k} c_i t^(i-k)/(i-k)!."""
    total = np.zeros_like(t, dtype=float)
    for k, ak in enumerate(a):
        if ak == 0.0:
            continue
        pk = np.zeros_like(t, dtype=float)
        for i in range(k, n):
            pk += c[i] * t ** (i - k) / math.factorial(i - k)
        total += ak * pk
    return total


@dataclass(frozen=True)
class VolterraReduction:
    """Initial-data reduction: phi = z^(n) satisfies
    phi(t) = int_0^t kappa(t, eta) phi(eta) deta + q(t) with the
    convolution kernel kappa(t, eta) = -sum_k a_k (t-eta)^(n-1-k)/(n-1-k)!."""

    order: int
    a: tuple[float, ...]
    init: tuple[float, ...]
    forcing: Callable[[float], float] | None = None

    @property
    def is_convolution(self) -> bool:
        return True

    def kernel(self, t: float, eta: float) -> float:
        return _volterra_kernel(self.a, self.order)(t, eta)

    def free_term(self, t: float) -> float:
        f = self.forcing(t) if self.forcing is not None else 0.0
        return f - float(
            _poly_part(self.a, np.asarray(self.init), self.order, np.array([t]))[0]
        )

    def solve(self, steps: int = 200, t_end: float = 1.0, refine: int = 4) -> OdeReductionSolution:
        """March phi with trapezoidal quadrature on an internally refined
        grid, then reconstruct z(t) = J_n[phi](t) + sum c_i t^i/i! at the
        requested nodes."""
        if steps < 1 or refine < 1:
            raise ValidationError("steps and refine must be >= 1", key="steps")
        n = self.order
        a = self.a
        c = np.asarray(self.init, dtype=float)
        N = steps * refine
        t = np.linspace(0.0, t_end, N + 1)
        h = t_end / N
        q = np.array([self.free_term(float(x)) for x in t])
        # kernel at the moving node: kappa(t, t) = -a_{n-1}
        diag_gain = 1.0 + (h / 2.0) * a[n - 1]
        if abs(diag_gain) < 1e-12:
            raise ResolutionError("marching step resonates with the kernel; refine")
        phi = np.empty(N + 1)
        phi[0] = q[0]
        kappa = _volterra_kernel(a, n)
        for k in range(1, N + 1):
            row = np.array([kappa(float(t[k]), float(tj)) for tj in t[:k]])
            weights = np.full(k, h)
            weights[0] = h / 2.0
            phi[k] = (q[k] + float(row @ (weights * phi[:k]))) / diag_gain
        # reconstruct z at the coarse output nodes
        out_idx = np.arange(0, N + 1, refine)
        z = np.empty(steps + 1)
        fact = math.factorial(n - 1)
        for m, K in enumerate(out_idx):
            if K == 0:
                integral = 0.0
            else:
                kern = (t[K] - t[: K + 1]) ** (n - 1) / fact
                w = np.full(K + 1, h)
                w[0] = w[-1] = h / 2.0
                integral = float(np.sum(w * kern * phi[: K + 1]))
            z[m] = integral + float(
                sum(c[i] * t[K] ** i / math.factorial(i) for i in range(n))
            )
        grid = TimeGrid(0.0, t_end, steps)
        return OdeReductionSolution(
            trajectory=Trajectory(grid, z, ("z",)),
            phi=phi[out_idx],
            constants=tuple(float(x) for x in c),
        )


@dataclass(frozen=True)
class FredholmReduction:
    """Two-point reduction: conditions at t = 1 turn the integration
    constants into linear functionals of phi, producing a genuine
    Fredholm kernel on [0, 1]^2 with multiplier lambda = 1."""

    order: int
    a: tuple[float, ...]
    conditions: tuple[BoundaryCondition, ...]
    forcing: Callable[[float], float] | None = None
    _M: np.ndarray = field(repr=False, init=False, default=None)  # type: ignore[assignment]
    _c0: np.ndarray = field(repr=False, init=False, default=None)  # type: ignore[assignment]
    _Minv: np.ndarray = field(repr=False, init=False, default=None)  # type: ignore[assignment]

    def __post_init__(self):
        n = self.order
        M = np.zeros((n, n))
        v = np.zeros(n)
        for j, (d, loc, value) in enumerate(self.conditions):
            v[j] = value
            if loc == 0.0:
                M[j, d] = 1.0
            else:
                for i in range(d, n):
                    M[j, i] = 1.0 / math.factorial(i - d)
        try:
            Minv = np.linalg.inv(M)
        except np.linalg.LinAlgError:
            raise DegenerateDataError("boundary placement yields a singular system") from None
        object.__setattr__(self, "_M", M)
        object.__setattr__(self, "_Minv", Minv)
        object.__setattr__(self, "_c0", Minv @ v)

    def _beta(self, eta: float) -> np.ndarray:
        n = self.order
        out = np.zeros(n)
        for j, (d, loc, _) in enumerate(self.conditions):
            if loc == 1.0:
                m = n - 1 - d
                out[j] = (1.0 - eta) ** m / math.factorial(m)
        return out

    def kernel(self, t: float, eta: float) -> float:
        n = self.order
        base = _volterra_kernel(self.a, n)(t, eta) if eta <= t else 0.0
        coeff = self._Minv @ self._beta(eta)  # contribution of phi to c
        add = float(_poly_part(self.a, coeff, n, np.array([t]))[0])
        return base + add

    def kernel_spec(self) -> KernelSpec:
        return KernelSpec(evaluator=self.kernel, params=(("lambda", 1.0),), name="ode-reduced")

    def free_term(self, t: float) -> float:
        f = self.forcing(t) if self.forcing is not None else 0.0
        return f - float(_poly_part(self.a, self._c0, self.order, np.array([t]))[0])

    def solve(self, n_nodes: int = 201, steps: int = 200) -> OdeReductionSolution:
        """Nystrom-solve the Fredholm form at lambda = 1 and reconstruct z
        on a uniform output grid."""
        rule = simpson_rule(n_nodes)
        disc = NystromDiscretization(self.kernel_spec(), rule)
        sol = nystrom_solve(disc, 1.0, self.free_term)
        # constants implied by the computed phi
        w_phi = np.zeros(self.order)
        for j in range(self.order):
            beta_j = np.array([self._beta(float(e))[j] for e in rule.nodes])
            w_phi[j] = float(np.sum(rule.weights * beta_j * sol.phi))
        c = self._c0 - self._Minv @ w_phi
        # reconstruct z from phi on a fine uniform grid
        n = self.order
        fine = 4 * steps
        tf = np.linspace(0.0, 1.0, fine + 1)
        hf = 1.0 / fine
        phi_f = np.array([sol(float(x)) for x in tf])
        out_idx = np.arange(0, fine + 1, 4)
        z = np.empty(steps + 1)
        fact = math.factorial(n - 1)
        for m, K in enumerate(out_idx):
            if K == 0:
                integral = 0.0
            else:
                kern = (tf[K] - tf[: K + 1]) ** (n - 1) / fact
                w = np.full(K + 1, hf)
                w[0] = w[-1] = hf / 2.0
                integral = float(np.sum(w * kern * phi_f[: K + 1]))
            z[m] = integral + float(
                sum(c[i] * tf[K] ** i / math.factorial(i) for i in range(n))
            )
        grid = TimeGrid(0.0, 1.0, steps)
        return OdeReductionSolution(
            trajectory=Trajectory(grid, z, ("z",)),
            phi=phi_f[out_idx],
            constants=tuple(float(x) for x in c),
        )


def ode_to_integral(
    spec: OdeSpec,
    boundary: Sequence[float] | Sequence[BoundaryCondition],
) -> VolterraReduction | FredholmReduction:
    """Reduce the ODE to a second-kind integral equation for phi = z^(n).

    ``boundary`` is either n initial values (z(0), ..., z^(n-1)(0)),
    giving a Volterra problem with a convolution kernel, or n triples
    (derivative order, location in {0, 1}, value) splitting the data
    between the ends of [0, 1], giving a Fredholm problem.
    """
    n = spec.order
    if len(boundary) != n:
        raise ValidationError(f"need exactly {n} boundary data, got {len(boundary)}")
    a = spec.normalized()
    forcing = spec.forcing
    first = boundary[0]
    if not isinstance(first, (tuple, list)):
        init = tuple(float(b) for b in boundary)  # type: ignore[arg-type]
        return VolterraReduction(order=n, a=a, init=init, forcing=forcing)
    conditions: list[BoundaryCondition] = []
    seen: set[tuple[int, float]] = set()
    for item in boundary:  # type: ignore[assignment]
        d, loc, value = item
        d = int(d)
        loc = float(loc)
        if not 0 <= d < n:
            raise ValidationError(f"derivative order {d} outside 0..{n - 1}")
        if loc not in (0.0, 1.0):
            raise ValidationError(f"boundary location must be 0 or 1, got {loc!r}")
        if (d, loc) in seen:
            raise ValidationError(
                f"duplicate derivative order {d} at t = {loc:g} in the boundary set"
            )
        seen.add((d, loc))
        conditions.append((d, loc, float(value)))
    if all(loc == 0.0 for _, loc, _ in conditions):
        init_map = {d: value for d, _, value in conditions}
        init = tuple(init_map[i] for i in sorted(init_map))
        return VolterraReduction(order=n, a=a, init=init, forcing=forcing)
    return FredholmReduction(order=n, a=a, conditions=tuple(conditions), forcing=forcing)
