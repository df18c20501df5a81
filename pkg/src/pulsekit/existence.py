"""Stationary pinned pulses: gluing conditions and a damped Newton solver.

A stationary pulse is a pair of even exponential tails glued across the
impurity window.  Matching the derivative jumps against the impurity
integrals gives two scalar equations for the mode amplitudes (C1, C2):

    2*sqrt(mu)*C1                          = alpha * G1(C1, Gamma)
    2*(sqrt(mu/D)*C2 + b*C1/((D-1)*sqrt(mu))) = (beta/D) * G2(C1, Gamma)

with Gamma = C2 + b*C1/((D-1)*mu) the window value of the second
component.  At D = 1 the coupling tail turns secular and the same system
holds with Gamma = C2 - b*C1/(4*mu) and the jump term b*C1/(2*sqrt(mu)).

Internally the solver works in the variables (C1, Gamma), in which the
two 1/(D-1) terms of the second line combine into the cancellation-free
jump coefficient 2*b/(sqrt(mu*D)*(sqrt(D)+1)) and the resonant system is
the D -> 1 limit of the general one.  The substitution (C1, C2) ->
(C1, Gamma) has unit Jacobian determinant, so root sets, residual scale
and degeneracy verdicts are unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    RESONANT_TOL,
    PiecewiseExpSolution,
    ReactionSystem,
    coupling_jump,
    eval_piecewise,
)

_NEWTON_MAX_ITER = 40
_NEWTON_TOL = 1e-12
_DEDUPE_TOL = 1e-8
_DEGENERACY_TOL = 1e-8


@dataclass(frozen=True)
class PinnedPulse:
    """A stationary pulse found by the gluing solver.

    C1, C2 are the mode amplitudes, residual is the max-norm of the
    gluing system at the root (core-variable form), and degenerate flags
    a near-singular Jacobian (smallest singular value <= 1e-8), i.e. a
    pulse at a fold of the existence system.
    """

    C1: float
    C2: float
    mu: float
    profile: PiecewiseExpSolution
    residual: float
    degenerate: bool

    def __post_init__(self) -> None:
        if not self.residual < 1e-10:
            raise ValueError(f"pulse residual {self.residual} exceeds 1e-10")

    def core_values(self, sys: ReactionSystem) -> tuple[float, float]:
        """Window values (C1, Gamma) of both components."""
        c1, gamma = self.profile.core_values(sys.params)
        return float(c1.real), float(gamma.real)


def _is_resonant(D: float) -> bool:
    return abs(D - 1.0) < RESONANT_TOL


def _gamma_from_c2(sys: ReactionSystem, C1: float, C2: float) -> float:
    p = sys.params
    if _is_resonant(p.D):
        return C2 - p.b_coupling * C1 / (4.0 * p.mu)
    return C2 + p.b_coupling * C1 / ((p.D - 1.0) * p.mu)


def _c2_from_gamma(sys: ReactionSystem, C1: float, gamma: float) -> float:
    p = sys.params
    if _is_resonant(p.D):
        return gamma + p.b_coupling * C1 / (4.0 * p.mu)
    return gamma - p.b_coupling * C1 / ((p.D - 1.0) * p.mu)


def matching_residual(sys: ReactionSystem, C1: float, C2: float) -> tuple[float, float]:
    """LHS - RHS of both gluing conditions at amplitudes (C1, C2).

    Uses the general-branch lines for D != 1 and the resonant lines
    (secular coupling) when |D - 1| < 1e-9.  Note that for D extremely
    close to (but not at) 1 the raw lines cancel catastrophically; the
    solver avoids this internally by working in (C1, Gamma).
    """
    p = sys.params
    rmu = math.sqrt(p.mu)
    gamma = _gamma_from_c2(sys, C1, C2)
    r1 = 2.0 * rmu * C1 - p.alpha * sys.G1.eval(C1, gamma)
    if _is_resonant(p.D):
        lhs2 = 2.0 * (rmu * C2 + p.b_coupling * C1 / (4.0 * rmu))
        r2 = lhs2 - p.beta * sys.G2.eval(C1, gamma)
    else:
        lhs2 = 2.0 * (
            math.sqrt(p.mu / p.D) * C2 + p.b_coupling * C1 / ((p.D - 1.0) * rmu)
        )
        r2 = lhs2 - (p.beta / p.D) * sys.G2.eval(C1, gamma)
    return r1, r2


def _core_residual(sys: ReactionSystem, C1: float, gamma: float) -> np.ndarray:
    """Gluing residual in the stable core variables (C1, Gamma)."""
    p = sys.params
    jump = coupling_jump(p.b_coupling, p.mu, p.D).real
    r1 = 2.0 * math.sqrt(p.mu) * C1 - p.alpha * sys.G1.eval(C1, gamma)
    r2 = (
        2.0 * math.sqrt(p.mu / p.D) * gamma
        + jump * C1
        - (p.beta / p.D) * sys.G2.eval(C1, gamma)
    )
    return np.array([r1, r2])


def _core_jacobian(sys: ReactionSystem, C1: float, gamma: float) -> np.ndarray:
    p = sys.params
    jump = coupling_jump(p.b_coupling, p.mu, p.D).real
    g1_u1 = sys.G1.diff(1, 0).eval(C1, gamma)
    g1_u2 = sys.G1.diff(0, 1).eval(C1, gamma)
    g2_u1 = sys.G2.diff(1, 0).eval(C1, gamma)
    g2_u2 = sys.G2.diff(0, 1).eval(C1, gamma)
    return np.array(
        [
            [2.0 * math.sqrt(p.mu) - p.alpha * g1_u1, -p.alpha * g1_u2],
            [
                jump - (p.beta / p.D) * g2_u1,
                2.0 * math.sqrt(p.mu / p.D) - (p.beta / p.D) * g2_u2,
            ],
        ]
    )


def _newton(sys: ReactionSystem, z0: np.ndarray) -> np.ndarray | None:
    """Damped Newton on the core-variable residual; None if no convergence."""
    z = np.asarray(z0, dtype=float)
    f = _core_residual(sys, z[0], z[1])
    for _ in range(_NEWTON_MAX_ITER):
        # accept on residual alone: at the rounding floor the Armijo
        # decrease below can no longer be satisfied.  One last undamped
        # step recovers the digits the early exit would leave behind.
        if np.linalg.norm(f) < _NEWTON_TOL:
            try:
                polish = np.linalg.solve(_core_jacobian(sys, z[0], z[1]), -f)
            except np.linalg.LinAlgError:
                return z
            z_pol = z + polish
            f_pol = _core_residual(sys, z_pol[0], z_pol[1])
            if np.all(np.isfinite(f_pol)) and np.linalg.norm(f_pol) <= np.linalg.norm(f):
                return z_pol
            return z
        jac = _core_jacobian(sys, z[0], z[1])
        try:
            step = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(step)):
            return None
        # Armijo backtracking with halving, at most 20 halvings
        t = 1.0
        norm_f = np.linalg.norm(f)
        for _ in range(20):
            z_new = z + t * step
            f_new = _core_residual(sys, z_new[0], z_new[1])
            if np.all(np.isfinite(f_new)) and np.linalg.norm(f_new) < (1.0 - 1e-4 * t) * norm_f:
                break
            t *= 0.5
        else:
            return None
        z, f = z_new, f_new
        if np.linalg.norm(t * step) < _NEWTON_TOL and np.linalg.norm(f) < _NEWTON_TOL:
            return z
    return None


def _degeneracy(sys: ReactionSystem, C1: float, gamma: float) -> tuple[float, bool]:
    """Smallest singular value of the (C1, C2) Jacobian and the flag.

    The core-variable Jacobian is multiplied by the unimodular change of
    variables d(C1, Gamma)/d(C1, C2) so the verdict refers to the system
    as stated in (C1, C2).
    """
    p = sys.params
    if _is_resonant(p.D):
        kappa = -p.b_coupling / (4.0 * p.mu)
    else:
        kappa = p.b_coupling / ((p.D - 1.0) * p.mu)
    jac = _core_jacobian(sys, C1, gamma) @ np.array([[1.0, 0.0], [kappa, 1.0]])
    smin = float(np.linalg.svd(jac, compute_uv=False)[-1])
    return smin, smin <= _DEGENERACY_TOL


def _build_pulse(sys: ReactionSystem, c1: float, gamma: float) -> PinnedPulse:
    p = sys.params
    resonant = _is_resonant(p.D)
    residual = float(np.max(np.abs(_core_residual(sys, c1, gamma))))
    _smin, degenerate = _degeneracy(sys, c1, gamma)
    c2 = _c2_from_gamma(sys, c1, gamma)
    profile = PiecewiseExpSolution(
        lambda_shift=p.mu,
        fast_amp=c1,
        slow_amp=c2,
        branch="resonant" if resonant else "general",
        coupling_sign="forward",
        coupled_core=None if resonant else gamma,
    )
    return PinnedPulse(
        C1=float(c1),
        C2=float(c2),
        mu=p.mu,
        profile=profile,
        residual=residual,
        degenerate=degenerate,
    )


def solve_pulse(
    sys: ReactionSystem, seeds: list[tuple[float, float]] | None = None
) -> list[PinnedPulse]:
    """Find stationary pulses by damped Newton from a coarse seed grid.

    Seeds are (C1, C2) pairs; a default 21x21 grid over [-R, R]^2 in the
    core variables is always scanned, with R = 10*max(1, |alpha|+|beta|)
    * (1 + 1/mu).  Roots are deduplicated at distance 1e-8.  An empty
    list means no root was found (not an error); a root with a
    near-singular Jacobian is returned with degenerate=True.
    """
    p = sys.params
    R = 10.0 * max(1.0, abs(p.alpha) + abs(p.beta)) * (1.0 + 1.0 / p.mu)
    axis = np.linspace(-R, R, 21)
    seed_pts = [np.array([c1, g]) for c1 in axis for g in axis]
    if seeds is not None:
        for c1, c2 in seeds:
            seed_pts.insert(0, np.array([c1, _gamma_from_c2(sys, c1, c2)]))

    roots: list[np.ndarray] = []
    for z0 in seed_pts:
        z = _newton(sys, z0)
        if z is None:
            continue
        if any(np.linalg.norm(z - r) < _DEDUPE_TOL for r in roots):
            continue
        roots.append(z)

    pulses = [_build_pulse(sys, c1, gamma) for c1, gamma in roots]
    pulses.sort(key=lambda pulse: pulse.C1)
    return pulses


def refine_pulse(sys: ReactionSystem, C1: float, gamma: float) -> PinnedPulse | None:
    """Newton-polish a pulse from a single core seed (C1, Gamma).

    Continuation fast path: re-converges a known branch after a small
    parameter change without rescanning the seed grid.  None when the
    iteration fails (branch folded away or seed too far off).
    """
    z = _newton(sys, np.array([C1, gamma], dtype=float))
    if z is None:
        return None
    return _build_pulse(sys, float(z[0]), float(z[1]))


def continue_pulse(
    sys: ReactionSystem,
    near_C1: float | None = None,
    seeds: list[tuple[float, float]] | None = None,
) -> PinnedPulse | None:
    """Solve and pick one pulse branch.

    With near_C1 given, the root closest to it is returned (parameter
    continuation); otherwise the root with the smallest |C1|, which is
    the branch that perturbs off the weakest-nonlinearity solution.
    None when no pulse exists.
    """
    pulses = solve_pulse(sys, seeds=seeds)
    if not pulses:
        return None
    if near_C1 is None:
        return min(pulses, key=lambda p: abs(p.C1))
    return min(pulses, key=lambda p: abs(p.C1 - near_C1))


def pulse_profile_csv(
    pulse: PinnedPulse, sys: ReactionSystem, grid: np.ndarray
) -> np.ndarray:
    """Rows (x, U1, U2) of the pulse profile on the given grid."""
    u1, u2 = eval_piecewise(pulse.profile, sys, np.asarray(grid, dtype=float))
    return np.column_stack([grid, np.real(u1), np.real(u2)])
