"""Core data types for a two-component reaction-diffusion model with a
strongly localized impurity.

The model on the real line is

    dU1/dt = U1_xx - mu*U1 + (alpha/eps^2) * I(x/eps^2) * G1(U1, U2)
    dU2/dt = D*U2_xx - b*U1 - mu*U2 + (beta/eps^2) * I(x/eps^2) * G2(U1, U2)

where I is a unit-mass Gaussian window of width O(eps^2).  Outside the
window the dynamics are linear, so stationary pulses and their
eigenfunctions are piecewise exponentials glued across the window; the
gluing conditions reduce every linear question about the model to small
algebraic systems in the mode amplitudes.  This module holds the shared
vocabulary: parameter bundles, polynomial reaction terms, the impurity
profile, and the piecewise-exponential solution container.
"""

from __future__ import annotations

import cmath
import dataclasses
import json
import math
from dataclasses import dataclass

import numpy as np

SQRT_PI = math.sqrt(math.pi)

# |D - 1| below this: the resonant (equal decay rates) formulas apply.
RESONANT_TOL = 1e-9
# |D - 1| in [RESONANT_TOL, NEAR_RESONANT_TOL): general-branch formulas are
# used but the coupling amplitude is evaluated in compensated form because
# the raw 1/(D-1) terms cancel catastrophically.
NEAR_RESONANT_TOL = 1e-4


class GridResolutionError(ValueError):
    """Grid too coarse (or too short) to resolve the impurity window."""


@dataclass(frozen=True)
class SystemParams:
    """Scalar parameters of the model.

    Attributes
    ----------
    mu : float
        Linear decay rate, > 0.  Also the distance of the essential
        spectrum (-inf, -mu] from the origin.
    alpha, beta : float
        Impurity strengths multiplying G1 and G2.
    b_coupling : float
        Linear cross-coupling coefficient (U1 feeding U2).
    D : float
        Diffusion coefficient of the second component, > 0.
    epsilon : float
        Impurity locality scale, 0 < epsilon < 1 (the window has width
        O(epsilon^2) and the profiles carry O(epsilon) corrections).
    """

    mu: float
    alpha: float
    beta: float
    b_coupling: float
    D: float
    epsilon: float

    def __post_init__(self) -> None:
        if not self.mu > 0:
            raise ValueError(f"mu must be positive, got {self.mu}")
        if not self.D > 0:
            raise ValueError(f"D must be positive, got {self.D}")
        if not 0 < self.epsilon < 1:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")


@dataclass(frozen=True)
class ImpurityProfile:
    """Unit-mass impurity window, I(xi) = exp(-xi^2)/sqrt(pi)."""

    kind: str = "gaussian"

    def __post_init__(self) -> None:
        if self.kind != "gaussian":
            raise ValueError(f"unknown impurity kind {self.kind!r}")

    def evaluate(self, xi):
        """Profile value at xi (scalar or array)."""
        return np.exp(-np.asarray(xi) ** 2) / SQRT_PI


@dataclass(frozen=True)
class BivariatePoly:
    """Polynomial in (u1, u2) stored as monomials (p, q, c) = c*u1^p*u2^q.

    Duplicate (p, q) pairs are rejected rather than merged so that a
    config file with conflicting entries fails loudly.
    """

    terms: tuple[tuple[int, int, float], ...]

    def __post_init__(self) -> None:
        seen: set[tuple[int, int]] = set()
        for p, q, _c in self.terms:
            if p < 0 or q < 0 or p != int(p) or q != int(q):
                raise ValueError(f"monomial exponents must be nonnegative integers, got ({p}, {q})")
            if (p, q) in seen:
                raise ValueError(f"duplicate monomial ({p}, {q})")
            seen.add((p, q))

    def eval(self, u1, u2):
        """Polynomial value at (u1, u2)."""
        total = 0.0
        for p, q, c in self.terms:
            total = total + c * u1**p * u2**q
        return total

    def diff(self, wrt_u1: int = 0, wrt_u2: int = 0) -> BivariatePoly:
        """Partial derivative d^(i+j) / du1^i du2^j, term by term."""
        out = []
        for p, q, c in self.terms:
            if p < wrt_u1 or q < wrt_u2:
                continue
            for k in range(wrt_u1):
                c *= p - k
            for k in range(wrt_u2):
                c *= q - k
            out.append((p - wrt_u1, q - wrt_u2, c))
        return BivariatePoly(tuple(out))

    def coeff(self, p: int, q: int) -> float:
        """Coefficient of u1^p u2^q (0.0 if absent)."""
        for pp, qq, c in self.terms:
            if pp == p and qq == q:
                return c
        return 0.0

    def nonzero_exponents(self) -> set[tuple[int, int]]:
        """Exponent pairs with coefficient != 0 (used for family matching)."""
        return {(p, q) for p, q, c in self.terms if c != 0.0}


def eval_poly(G: BivariatePoly, u1: float, u2: float) -> float:
    """Evaluate a reaction polynomial at (u1, u2)."""
    return G.eval(u1, u2)


@dataclass(frozen=True)
class ReactionSystem:
    """Full model: parameters plus the two reaction polynomials."""

    params: SystemParams
    G1: BivariatePoly
    G2: BivariatePoly

    @property
    def nonzero_at_origin(self) -> bool:
        """Whether G(0,0) != 0, the standing assumption that makes the
        trivial state non-stationary inside the window."""
        return self.G1.coeff(0, 0) != 0.0 or self.G2.coeff(0, 0) != 0.0

    def with_mu(self, mu: float) -> ReactionSystem:
        """Copy of the system with the decay rate replaced (parameter scans)."""
        return ReactionSystem(
            params=dataclasses.replace(self.params, mu=mu), G1=self.G1, G2=self.G2
        )

    def to_config_dict(self) -> dict:
        p = self.params
        return {
            "mu": p.mu,
            "alpha": p.alpha,
            "beta": p.beta,
            "b": p.b_coupling,
            "D": p.D,
            "epsilon": p.epsilon,
            "G1": [{"p": t[0], "q": t[1], "c": t[2]} for t in self.G1.terms],
            "G2": [{"p": t[0], "q": t[1], "c": t[2]} for t in self.G2.terms],
        }

    @classmethod
    def from_config_dict(cls, cfg: dict) -> ReactionSystem:
        try:
            params = SystemParams(
                mu=float(cfg["mu"]),
                alpha=float(cfg["alpha"]),
                beta=float(cfg["beta"]),
                b_coupling=float(cfg["b"]),
                D=float(cfg["D"]),
                epsilon=float(cfg["epsilon"]),
            )
            polys = []
            for key in ("G1", "G2"):
                terms = tuple(
                    (int(t["p"]), int(t["q"]), float(t["c"])) for t in cfg[key]
                )
                polys.append(BivariatePoly(terms))
        except KeyError as exc:
            raise ValueError(f"config missing required key {exc.args[0]!r}") from exc
        return cls(params=params, G1=polys[0], G2=polys[1])

    def to_json(self) -> str:
        return json.dumps(self.to_config_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> ReactionSystem:
        return cls.from_config_dict(json.loads(text))


@dataclass(frozen=True)
class CubicForm:
    """Coefficients of leading*t^3 + A*t^2 + B*t + E."""

    leading: float
    A: float
    B: float
    E: float

    def __post_init__(self) -> None:
        if self.leading == 0:
            raise ValueError("cubic leading coefficient must be nonzero")

    def eval(self, t):
        return ((self.leading * t + self.A) * t + self.B) * t + self.E

    def deriv(self, t):
        return (3 * self.leading * t + 2 * self.A) * t + self.B


def coupling_jump(b_coupling: float, sigma: complex, D: float) -> complex:
    """Derivative-jump coefficient contributed by the cross-coupling tail.

    In the second matching line the two terms carrying the coupling
    amplitude b/((D-1)*sigma) combine to

        2*b / (sqrt(sigma) * sqrt(D) * (sqrt(D) + 1)),

    which is free of the 1/(D-1) cancellation and remains valid at D = 1
    (where it reduces to b/sqrt(sigma), matching the resonant formulas).
    """
    s = cmath.sqrt(sigma)
    sD = math.sqrt(D)
    return 2.0 * b_coupling / (s * sD * (sD + 1.0))


def _expm1_stable(w):
    """exp(w) - 1 for complex w, accurate for small |w|."""
    w = complex(w)
    if abs(w) < 1e-3:
        # 4-term series; truncation below 1e-14 relative for |w| < 1e-3
        return w * (1.0 + w * (0.5 + w * (1.0 / 6.0 + w / 24.0)))
    return cmath.exp(w) - 1.0


@dataclass(frozen=True)
class PiecewiseExpSolution:
    """Two-component piecewise-exponential profile glued across the window.

    Covers stationary pulses (lambda_shift = mu, real amplitudes),
    eigenfunctions and resolvent modes (lambda_shift = mu + lambda), and
    adjoint eigenfunctions (coupling_sign = "adjoint": the cross-coupling
    tail then sits in the first component and decays at the slow rate).

    Attributes
    ----------
    lambda_shift : complex
        The shift sigma = mu + lambda that sets the decay rates
        sqrt(sigma) (first component) and sqrt(sigma/D) (second).
    fast_amp : complex
        Amplitude of the exp(-sqrt(sigma)|x|) mode in component 1
        (C1/C3/C5-type constants).
    slow_amp : complex
        Amplitude of the exp(-sqrt(sigma/D)|x|) mode in component 2
        (C2/C4/C6-type constants).
    branch : str
        "general" (D != 1) or "resonant" (D = 1, secular coupling term).
    coupling_sign : str
        "forward" (coupling tail in component 2) or "adjoint" (tail in
        component 1).
    coupled_core : complex or None
        Optional precomputed window value of the component carrying the
        coupling tail.  Solvers provide it when |D-1| is small enough
        that recomputing it from the amplitudes would cancel.
    """

    lambda_shift: complex
    fast_amp: complex
    slow_amp: complex
    branch: str = "general"
    coupling_sign: str = "forward"
    coupled_core: complex | None = None

    def __post_init__(self) -> None:
        if self.branch not in ("general", "resonant"):
            raise ValueError(f"unknown branch {self.branch!r}")
        if self.coupling_sign not in ("forward", "adjoint"):
            raise ValueError(f"unknown coupling_sign {self.coupling_sign!r}")
        s = cmath.sqrt(complex(self.lambda_shift))
        if not s.real > 0:
            raise ValueError(
                "decay rate Re sqrt(mu + lambda) must be positive; "
                f"lambda_shift={self.lambda_shift} sits on or beyond the essential spectrum"
            )

    def decay_rates(self, D: float) -> tuple[complex, complex]:
        """Principal decay rates (sqrt(sigma), sqrt(sigma/D))."""
        s = cmath.sqrt(complex(self.lambda_shift))
        return s, s / math.sqrt(D)

    def coupling_amp(self, params: SystemParams) -> complex:
        """Amplitude multiplying the cross-coupling exponential tail.

        General branch, forward:  b*fast/((D-1)*sigma)  (tail at the fast
        rate in component 2).  General branch, adjoint:
        b*D*slow/((1-D)*sigma) (tail at the slow rate in component 1).
        Resonant branch: the secular amplitude b*amp/(4*sigma).
        """
        sigma = complex(self.lambda_shift)
        b = params.b_coupling
        if self.branch == "resonant":
            amp = self.fast_amp if self.coupling_sign == "forward" else self.slow_amp
            return b * amp / (4.0 * sigma)
        if self.coupling_sign == "forward":
            return b * self.fast_amp / ((params.D - 1.0) * sigma)
        return b * params.D * self.slow_amp / ((1.0 - params.D) * sigma)

    def core_values(self, params: SystemParams) -> tuple[complex, complex]:
        """Leading-order values of both components inside the window."""
        if self.branch == "resonant":
            k = self.coupling_amp(params)
            if self.coupling_sign == "forward":
                return self.fast_amp, self.slow_amp - k
            return self.fast_amp - k, self.slow_amp
        if self.coupling_sign == "forward":
            if self.coupled_core is not None:
                return self.fast_amp, self.coupled_core
            return self.fast_amp, self.slow_amp + self.coupling_amp(params)
        if self.coupled_core is not None:
            return self.coupled_core, self.slow_amp
        return self.fast_amp + self.coupling_amp(params), self.slow_amp


def eval_piecewise(sol: PiecewiseExpSolution, sys: ReactionSystem, x, extend_tails: bool = False):
    """Evaluate both components of a piecewise-exponential solution.

    Inside the window (|x| < epsilon) the leading-order core constants
    are returned; outside, the decaying tails.  Accepts scalar or array
    x and returns a pair of like-shaped complex arrays (real parts are
    the profile for stationary pulses).

    With extend_tails=True the tail formulas are used for every x, so
    the profile is continuous with a single derivative kink at the
    origin (the tail limits at 0 equal the core constants).  Grid-based
    consumers sample this form: the default plateau has an O(eps) value
    jump at |x| = eps that a discrete Laplacian turns into an O(1/dx)
    spike.

    Near D = 1 (RESONANT_TOL <= |D-1| < NEAR_RESONANT_TOL) the coupled
    component is evaluated in compensated form: the raw formula is the
    sum of two exponentials with amplitudes ~1/(D-1) of opposite sign,
    so it is rewritten around the finite core value with the exponential
    difference computed by a stable expm1.
    """
    params = sys.params
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    outer = np.ones_like(ax, dtype=bool) if extend_tails else (ax >= params.epsilon)
    sigma = complex(sol.lambda_shift)
    s, s_D = sol.decay_rates(params.D)
    core1, core2 = sol.core_values(params)

    u1 = np.full(x.shape, complex(core1))
    u2 = np.full(x.shape, complex(core2))
    axo = ax[outer]

    if sol.branch == "resonant":
        k = sol.coupling_amp(params)
        fast_tail = np.exp(-s * axo)
        secular = k * fast_tail * (-1.0 - 2.0 * s * axo)
        if sol.coupling_sign == "forward":
            u1[outer] = sol.fast_amp * fast_tail
            u2[outer] = sol.slow_amp * fast_tail + secular
        else:
            u1[outer] = sol.fast_amp * fast_tail + secular
            u2[outer] = sol.slow_amp * fast_tail
        return _match_shape(u1, x), _match_shape(u2, x)

    near_resonant = abs(params.D - 1.0) < NEAR_RESONANT_TOL
    fast_tail = np.exp(-s * axo)
    slow_tail = np.exp(-s_D * axo)
    if sol.coupling_sign == "forward":
        u1[outer] = sol.fast_amp * fast_tail
        if near_resonant:
            # u2 = core2*slow_tail + kappa*fast*(fast_tail - slow_tail)
            kappa = sol.coupling_amp(params)
            diff = slow_tail * np.array([_expm1_stable((s_D - s) * a) for a in axo])
            u2[outer] = core2 * slow_tail + kappa * diff
        else:
            u2[outer] = sol.slow_amp * slow_tail + sol.coupling_amp(params) * fast_tail
    else:
        u2[outer] = sol.slow_amp * slow_tail
        if near_resonant:
            kappa = sol.coupling_amp(params)
            diff = fast_tail * np.array([_expm1_stable((s - s_D) * a) for a in axo])
            u1[outer] = core1 * fast_tail + kappa * diff
        else:
            u1[outer] = sol.fast_amp * fast_tail + sol.coupling_amp(params) * slow_tail
    return _match_shape(u1, x), _match_shape(u2, x)


def _match_shape(values: np.ndarray, x: np.ndarray):
    """Return a scalar when the input x was scalar."""
    if x.shape == ():
        return complex(values[()])
    return values


def impurity_on_grid(profile: ImpurityProfile, eps: float, grid: np.ndarray) -> np.ndarray:
    """Nodal values of (1/eps^2)*I(x/eps^2), renormalized to unit mass.

    The trapezoid-rule mass over the supplied grid is rescaled to exactly
    1 so the discrete gluing conditions see the same total impurity
    strength as the continuum.  Raises GridResolutionError when the grid
    does not span [-10*eps^2, 10*eps^2] or has fewer than 20 nodes there.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2 or not np.all(np.diff(grid) > 0):
        raise ValueError("grid must be a strictly increasing 1-d array")
    core = 10.0 * eps**2
    if grid[0] > -core or grid[-1] < core:
        raise GridResolutionError(
            f"grid [{grid[0]}, {grid[-1]}] does not span the impurity window [{-core}, {core}]"
        )
    n_core = int(np.count_nonzero(np.abs(grid) <= core))
    if n_core < 20:
        raise GridResolutionError(
            f"only {n_core} grid nodes resolve the impurity window (need >= 20); refine dx"
        )
    vals = profile.evaluate(grid / eps**2) / eps**2
    mass = np.trapezoid(vals, grid)
    return vals / mass
