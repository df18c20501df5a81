"""Time integration of the full model on a finite grid.

Marches the two-component system

    dU1/dt =   U1_xx - mu*U1 + (alpha/eps^2) I(x/eps^2) G1(U1, U2)
    dU2/dt = D*U2_xx - b*U1  - mu*U2 + (beta/eps^2) I(x/eps^2) G2(U1, U2)

with second-order central differences in space.  Two steppers are
provided: Strang splitting (Crank-Nicolson in the diffusion-decay part,
Heun in the impurity reaction and the linear cross-coupling) and a
fully implicit trapezoid rule solved by a chord Newton iteration with a
reused sparse factorization.  Diagnostics record the center traces,
the oscillation envelope, an estimated period, and a coarse outcome
label with fixed documented thresholds.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve_banded, cholesky_banded
from scipy.sparse import bmat, diags, identity
from scipy.sparse.linalg import splu

from .existence import PinnedPulse, continue_pulse
from .model import (
    GridResolutionError,
    ImpurityProfile,
    ReactionSystem,
    eval_piecewise,
    impurity_on_grid,
)
from .spectral import find_eigenvalues

BOUNDARIES = ("neumann", "dirichlet")
INITIALS = ("pinned-pulse", "kicked-pulse", "zero")
STEPPERS = ("splitting", "implicit")
OUTCOMES = (
    "decay to pulse",
    "sustained oscillation",
    "growing oscillation",
    "blow-up",
    "indeterminate",
)

BLOWUP_SUP = 1.0e6
DECAY_FRACTION = 1.0e-4
SUSTAIN_DRIFT = 0.01
SUSTAIN_FLOOR = 1.0e-3
GROWTH_FACTOR = 10.0
MIN_EXTREMA = 6

_NEWTON_TOL = 1.0e-10
_NEWTON_STALL = 1.0e-7
_NEWTON_MAXITER = 12
_OSCILLATORY_IM = 1.0e-8


class StepperError(RuntimeError):
    """Time step rejected; carries the last time that was still finite."""

    def __init__(self, message: str, last_stable_time: float) -> None:
        super().__init__(f"{message} (last stable time t={last_stable_time:.6g})")
        self.last_stable_time = last_stable_time


@dataclass(frozen=True)
class SimConfig:
    """Grid, stepper, and initial-data choices for one run.

    Attributes
    ----------
    domain_half_width : float
        Half width L of the computational interval [-L, L].  Values
        below 20/sqrt(mu) trigger a truncation warning at run time
        (the slow tail exp(-sqrt(mu/D)|x|) is then cut at more than
        exp(-20/sqrt(D))); the published regime figures use L = 30
        deliberately, so this is a warning rather than an error.
    dx : float
        Target grid spacing; snapped so that x = 0 is a node.  Must
        resolve the impurity: at least 20 nodes across
        [-3 eps^2, 3 eps^2], i.e. dx <= 6 eps^2 / 19.
    dt : float
        Time step.  The splitting stepper must stay below the
        composition threshold 2/sqrt(rho*lam_max), with rho the
        spectral radius of the window reaction Jacobian at the initial
        state and lam_max the grid-scale diffusion stiffness; see
        stable_dt for the rationale and a suggested value.  The
        implicit stepper has no stability limit (accuracy still wants
        omega*dt small).
    t_end : float
        Final time (the run may stop earlier on blow-up).
    boundary : str
        "neumann" or "dirichlet", both homogeneous.
    initial : str
        "pinned-pulse" (stationary profile), "kicked-pulse" (profile
        plus an eigenfunction perturbation of relative sup-norm size
        ``kick``), or "zero".
    kick : float
        Relative kick amplitude; the perturbation sup-norm is kick
        times the sup-norm of the pulse first component.
    stepper : str
        "splitting" or "implicit".
    sample_interval : float
        Target spacing of the recorded center samples (clamped to dt).
    """

    domain_half_width: float
    dx: float
    dt: float
    t_end: float
    boundary: str = "neumann"
    initial: str = "kicked-pulse"
    kick: float = 1.0e-2
    stepper: str = "splitting"
    sample_interval: float = 0.1

    def __post_init__(self) -> None:
        for name in ("domain_half_width", "dx", "dt", "t_end", "sample_interval"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.kick < 0.0:
            raise ValueError(f"kick must be nonnegative, got {self.kick}")
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"boundary must be one of {BOUNDARIES}, got {self.boundary!r}")
        if self.initial not in INITIALS:
            raise ValueError(f"initial must be one of {INITIALS}, got {self.initial!r}")
        if self.stepper not in STEPPERS:
            raise ValueError(f"stepper must be one of {STEPPERS}, got {self.stepper!r}")


@dataclass(frozen=True)
class SimDiagnostics:
    """Recorded traces and the outcome classification of one run.

    center_series has rows (t, U1(0,t), U2(0,t)); amplitude_envelope
    has rows (t, amplitude) where amplitude is half the swing between
    consecutive extrema of the centered trace U1(0,t) - ref (ref is
    the pulse center value, or the late-time mean for pulse-free
    runs); consecutive-extrema differences cancel the slow baseline
    drift of a profile that starts O(eps) off the discrete
    equilibrium.  outcome is one of OUTCOMES; the
    thresholds are the module constants BLOWUP_SUP (sup-norm above
    which the run stops as "blow-up"), DECAY_FRACTION (terminal
    envelope below this fraction of the initial deviation is "decay to
    pulse"; the value sits above the chord solver's long-run noise
    floor of roughly 1e-6 absolute), SUSTAIN_DRIFT (peak-amplitude
    drift across the last quarter below this relative size, with at
    least MIN_EXTREMA extrema and a tail above SUSTAIN_FLOOR times the
    kick, is "sustained oscillation"), and GROWTH_FACTOR (last-quarter
    amplitude at least this multiple of the first-quarter amplitude,
    and still increasing, is "growing oscillation").
    """

    center_series: np.ndarray
    amplitude_envelope: np.ndarray
    estimated_period: float | None
    outcome: str
    x: np.ndarray
    u1_final: np.ndarray
    u2_final: np.ndarray
    final_time: float
    kick_scale: float


def _grid(cfg: SimConfig) -> np.ndarray:
    """Uniform grid on [-L, L] with an odd node count so x = 0 is a node."""
    half = int(round(cfg.domain_half_width / cfg.dx))
    if half < 2:
        raise ValueError("dx larger than half the domain")
    return np.linspace(-cfg.domain_half_width, cfg.domain_half_width, 2 * half + 1)


def _check_grid(sys: ReactionSystem, cfg: SimConfig) -> None:
    eps2 = sys.params.epsilon**2
    if cfg.dx > 6.0 * eps2 / 19.0:
        raise GridResolutionError(
            f"dx={cfg.dx} puts fewer than 20 nodes across the impurity core "
            f"[-3 eps^2, 3 eps^2]; need dx <= {6.0 * eps2 / 19.0:.3e}"
        )
    floor = 20.0 / math.sqrt(sys.params.mu)
    if cfg.domain_half_width < floor:
        warnings.warn(
            f"domain_half_width={cfg.domain_half_width} is below 20/sqrt(mu)="
            f"{floor:.3g}; the slow tail is truncated and eigenvalues shift "
            "by the corresponding boundary terms",
            stacklevel=3,
        )


def _window_rho(sys: ReactionSystem, u1c: np.ndarray, u2c: np.ndarray) -> float:
    """Spectral radius bound of the window reaction Jacobian on the core."""
    p = sys.params
    ivmax = 1.0 / (math.sqrt(math.pi) * p.epsilon**2)
    a11 = abs(p.alpha) * np.abs(sys.G1.diff(1, 0).eval(u1c, u2c)).max()
    a12 = abs(p.alpha) * np.abs(sys.G1.diff(0, 1).eval(u1c, u2c)).max()
    a21 = abs(p.beta) * np.abs(sys.G2.diff(1, 0).eval(u1c, u2c)).max()
    a22 = abs(p.beta) * np.abs(sys.G2.diff(0, 1).eval(u1c, u2c)).max()
    m = ivmax * np.array([[a11, a12], [a21, a22]]) + np.array(
        [[0.0, 0.0], [abs(p.b_coupling), 0.0]]
    )
    return float(max(np.abs(np.linalg.eigvals(m)).max(), 1e-300))


def _splitting_dt_limit(sys: ReactionSystem, dx: float, rho: float) -> float:
    """Stability threshold 2/sqrt(rho*lam_max) of the split composition.

    The window reaction substep is locally hyperbolic (the pulse
    balances window growth against the profile kink, and the splitting
    breaks that cancellation), feeding every spatial mode at rate rho;
    Crank-Nicolson damps a mode of stiffness lam only by ~4/(dt*lam)
    per step, so the composition contracts at the grid scale
    lam_max = 4*max(1, D)/dx^2 only when rho*dt < 4/(dt*lam_max).
    Verified empirically: at the threshold the trace matches a
    half-step run to three digits, at 2x it saturates at a spurious
    O(10) sawtooth.
    """
    lam_max = 4.0 * max(1.0, sys.params.D) / dx**2 + sys.params.mu
    return 2.0 / math.sqrt(rho * lam_max)


def stable_dt(sys: ReactionSystem, dx: float, pulse: PinnedPulse | None = None) -> float:
    """Suggested splitting step, half the composition threshold.

    See _splitting_dt_limit for the bound; rho is evaluated at the
    pulse core (at the origin when no pulse exists).  The scaling
    dt ~ dx*eps means the splitting stepper is only practical for
    short horizons or coarse grids; the fully implicit stepper has no
    stability limit and is the workhorse for long runs.
    """
    if pulse is None:
        pulse = continue_pulse(sys)
    if pulse is None:
        u1c = np.array([0.0])
        u2c = np.array([0.0])
    else:
        c1, c2 = pulse.profile.core_values(sys.params)
        u1c = np.array([c1.real])
        u2c = np.array([c2.real])
    return 0.5 * _splitting_dt_limit(sys, dx, _window_rho(sys, u1c, u2c))


def _cn_factors(n: int, dx: float, diff: float, mu: float, dt: float, boundary: str):
    """Banded Cholesky factor of the CN left side plus right-side bands.

    The Neumann rows are symmetrized with half-cell weights so the CN
    matrix stays symmetric positive definite (row 0 of the weighted
    Laplacian is diff/dx^2 * [-1, 1]); Dirichlet eliminates the pinned
    end nodes and works on the interior block.
    """
    c = diff / dx**2
    if boundary == "neumann":
        w = np.ones(n)
        w[0] = w[-1] = 0.5
        main = -2.0 * c * w
        m = n
    else:
        m = n - 2
        w = np.ones(m)
        main = np.full(m, -2.0 * c)
    off = c
    minus_diag = w * (1.0 + 0.5 * mu * dt) - 0.5 * dt * main
    minus_off = -0.5 * dt * off
    plus_diag = w * (1.0 - 0.5 * mu * dt) + 0.5 * dt * main
    plus_off = 0.5 * dt * off
    ab = np.zeros((2, m))
    ab[0, 1:] = minus_off
    ab[1, :] = minus_diag
    return cholesky_banded(ab, lower=False), plus_diag, plus_off


def _cn_apply(factor, plus_diag: np.ndarray, plus_off: float, u: np.ndarray) -> np.ndarray:
    rhs = plus_diag * u
    rhs[:-1] += plus_off * u[1:]
    rhs[1:] += plus_off * u[:-1]
    return cho_solve_banded((factor, False), rhs)


def _reaction_rhs(sys, iv, sl, u1, u2):
    """Window reaction plus the linear cross-coupling, full-grid arrays."""
    p = sys.params
    f1 = np.zeros_like(u1)
    f1[sl] = p.alpha * iv[sl] * sys.G1.eval(u1[sl], u2[sl])
    f2 = -p.b_coupling * u1
    f2[sl] += p.beta * iv[sl] * sys.G2.eval(u1[sl], u2[sl])
    return f1, f2


def _heun(sys, iv, sl, u1, u2, h):
    k1a, k1b = _reaction_rhs(sys, iv, sl, u1, u2)
    k2a, k2b = _reaction_rhs(sys, iv, sl, u1 + h * k1a, u2 + h * k1b)
    return u1 + 0.5 * h * (k1a + k2a), u2 + 0.5 * h * (k1b + k2b)


def _laplacian(u: np.ndarray, dx: float, boundary: str) -> np.ndarray:
    out = np.empty_like(u)
    out[1:-1] = u[2:] - 2.0 * u[1:-1] + u[:-2]
    if boundary == "neumann":
        out[0] = 2.0 * u[1] - 2.0 * u[0]
        out[-1] = 2.0 * u[-2] - 2.0 * u[-1]
    else:
        out[0] = 0.0
        out[-1] = 0.0
    return out / dx**2


def discrete_rhs(sys: ReactionSystem, iv: np.ndarray, u1, u2, dx: float, boundary: str):
    """Full semidiscrete right-hand side (both components).

    Dirichlet end nodes are pinned, so their entries are zero.
    """
    p = sys.params
    f1 = _laplacian(u1, dx, boundary) - p.mu * u1 + p.alpha * iv * sys.G1.eval(u1, u2)
    f2 = (
        p.D * _laplacian(u2, dx, boundary)
        - p.b_coupling * u1
        - p.mu * u2
        + p.beta * iv * sys.G2.eval(u1, u2)
    )
    if boundary == "dirichlet":
        f1[0] = f1[-1] = 0.0
        f2[0] = f2[-1] = 0.0
    return f1, f2


class _ImplicitStepper:
    """Theta-weighted implicit step with a chord Newton iteration.

    theta = 0.5 is the trapezoid rule (the workhorse); theta = 1 is
    backward Euler, used for the damped startup steps.  The Jacobian
    factorization is reused across steps and rebuilt when the chord
    iteration needs more than five corrections or stalls.
    """

    def __init__(self, sys, iv, dx, dt, boundary):
        self.sys = sys
        self.iv = iv
        self.dx = dx
        self.dt = dt
        self.boundary = boundary
        core = np.nonzero(iv > iv.max() * 1e-18)[0]
        self.sl = slice(int(core[0]), int(core[-1]) + 1)
        n = iv.size
        c1 = 1.0 / dx**2
        c2 = sys.params.D / dx**2
        main1 = np.full(n, -2.0 * c1)
        main2 = np.full(n, -2.0 * c2)
        off1_lo = np.full(n - 1, c1)
        off1_hi = np.full(n - 1, c1)
        off2_lo = np.full(n - 1, c2)
        off2_hi = np.full(n - 1, c2)
        if boundary == "neumann":
            off1_hi[0] = 2.0 * c1
            off1_lo[-1] = 2.0 * c1
            off2_hi[0] = 2.0 * c2
            off2_lo[-1] = 2.0 * c2
        else:
            main1[0] = main1[-1] = 0.0
            main2[0] = main2[-1] = 0.0
            off1_hi[0] = off1_lo[-1] = 0.0
            off2_hi[0] = off2_lo[-1] = 0.0
        self._lap1 = diags([off1_lo, main1, off1_hi], [-1, 0, 1], format="csr")
        self._lap2 = diags([off2_lo, main2, off2_hi], [-1, 0, 1], format="csr")
        self._g11 = sys.G1.diff(1, 0)
        self._g12 = sys.G1.diff(0, 1)
        self._g21 = sys.G2.diff(1, 0)
        self._g22 = sys.G2.diff(0, 1)
        self.theta = 0.5
        self._lu = None
        self._age = 0

    def _factor(self, u1, u2):
        p = self.sys.params
        n = u1.size
        sl = self.sl
        a11 = np.full(n, -p.mu)
        a12 = np.zeros(n)
        a21 = np.full(n, -p.b_coupling)
        a22 = np.full(n, -p.mu)
        a11[sl] += p.alpha * self.iv[sl] * self._g11.eval(u1[sl], u2[sl])
        a12[sl] += p.alpha * self.iv[sl] * self._g12.eval(u1[sl], u2[sl])
        a21[sl] += p.beta * self.iv[sl] * self._g21.eval(u1[sl], u2[sl])
        a22[sl] += p.beta * self.iv[sl] * self._g22.eval(u1[sl], u2[sl])
        if self.boundary == "dirichlet":
            for arr in (a11, a12, a21, a22):
                arr[0] = arr[-1] = 0.0
        jac = bmat(
            [
                [self._lap1 + diags(a11), diags(a12)],
                [diags(a21), self._lap2 + diags(a22)],
            ],
            format="csc",
        )
        self._lu = splu(identity(2 * n, format="csc") - self.theta * self.dt * jac)
        self._age = 0

    def _rhs(self, u1, u2):
        p = self.sys.params
        sl = self.sl
        f1 = _laplacian(u1, self.dx, self.boundary) - p.mu * u1
        f2 = p.D * _laplacian(u2, self.dx, self.boundary) - p.b_coupling * u1 - p.mu * u2
        f1[sl] += p.alpha * self.iv[sl] * self.sys.G1.eval(u1[sl], u2[sl])
        f2[sl] += p.beta * self.iv[sl] * self.sys.G2.eval(u1[sl], u2[sl])
        if self.boundary == "dirichlet":
            f1[0] = f1[-1] = 0.0
            f2[0] = f2[-1] = 0.0
        return f1, f2

    def retime(self, dt, theta=None):
        """Change step size or scheme weight, invalidating the factorization."""
        if theta is None:
            theta = self.theta
        if dt != self.dt or theta != self.theta:
            self.dt = dt
            self.theta = theta
            self._lu = None

    def step(self, u1, u2, t):
        if self._lu is None or self._age >= 100:
            try:
                self._factor(u1, u2)
            except RuntimeError as exc:
                raise StepperError(f"jacobian factorization failed ({exc})", t) from exc
        self._age += 1
        w = (1.0 - self.theta) * self.dt
        f1, f2 = self._rhs(u1, u2)
        base = np.concatenate([u1 + w * f1, u2 + w * f2])
        n = u1.size
        v = np.concatenate([u1, u2])
        for attempt in range(2):
            trial = v.copy()
            prev = math.inf
            for it in range(_NEWTON_MAXITER):
                g1, g2 = self._rhs(trial[:n], trial[n:])
                residual = trial - base - self.theta * self.dt * np.concatenate([g1, g2])
                delta = self._lu.solve(-residual)
                trial += delta
                if not np.all(np.isfinite(trial)):
                    break
                scale = max(1.0, float(np.abs(trial).max()))
                step_size = float(np.abs(delta).max())
                # accept on tolerance, or on a stall at the roundoff
                # floor of the factored solve (deltas stop contracting)
                done = step_size <= _NEWTON_TOL * scale or (
                    step_size > 0.5 * prev and step_size <= _NEWTON_STALL * scale
                )
                if done:
                    if it >= 5:
                        try:
                            self._factor(trial[:n], trial[n:])
                        except RuntimeError:
                            self._lu = None
                    return trial[:n], trial[n:]
                prev = step_size
            if attempt == 0:
                try:
                    self._factor(u1, u2)
                except RuntimeError:
                    break
        raise StepperError("implicit trapezoid Newton iteration failed", t)


def _finish_step_adaptive(st, u1, u2, t, dt):
    """Complete one macro step by recursive halving after a Newton failure.

    Near a finite-time blow-up the trapezoid equation stops being
    solvable at the macro step size while the state is still finite
    (the window reaction grows superlinearly, so the time left to the
    singularity shrinks below dt).  Halving chases the growing solution
    until either the macro step is covered, in which case the run
    continues normally, or the sup norm passes BLOWUP_SUP and the
    caller's blow-up check records the outcome.
    """
    covered = 0.0
    local = 0.5 * dt
    floor = dt * 2.0**-40
    streak = 0
    try:
        while covered < dt * (1.0 - 1e-12):
            local = min(local, dt - covered)
            st.retime(local)
            try:
                u1, u2 = st.step(u1, u2, t + covered)
            except StepperError:
                local *= 0.5
                streak = 0
                if local < floor:
                    raise StepperError(
                        "implicit trapezoid Newton iteration failed at the "
                        "minimum step size",
                        t + covered,
                    )
                continue
            covered += local
            sup = max(float(np.abs(u1).max()), float(np.abs(u2).max()))
            if sup > BLOWUP_SUP:
                break
            streak += 1
            if streak >= 3:
                local *= 2.0
                streak = 0
    finally:
        st.retime(dt)
    return u1, u2


def _kick_field(sys: ReactionSystem, pulse: PinnedPulse, x: np.ndarray):
    """Real part of the leading eigenfunction, preferring oscillatory modes."""
    mu = sys.params.mu
    rect = (-mu + 1e-6, mu + 10.0, -10.0 * (1.0 + mu), 10.0 * (1.0 + mu))
    eigs = find_eigenvalues(sys, pulse, rect)
    if not eigs:
        raise ValueError(
            "no point eigenvalue available to shape the kick; use initial='pinned-pulse'"
        )
    oscillatory = [e for e in eigs if abs(e.lam.imag) > _OSCILLATORY_IM]
    chosen = max(oscillatory or eigs, key=lambda e: e.lam.real)
    p1, p2 = eval_piecewise(chosen.eigfun, sys, x, extend_tails=True)
    k1 = p1.real
    k2 = p2.real
    norm = max(np.abs(k1).max(), np.abs(k2).max())
    return k1 / norm, k2 / norm


def _initial_state(sys, cfg, pulse, x):
    """Initial fields, the applied kick amplitude, and the center reference."""
    if cfg.initial == "zero":
        return np.zeros_like(x), np.zeros_like(x), 0.0, None
    if pulse is None:
        pulse = continue_pulse(sys)
        if pulse is None:
            raise ValueError(
                "no pinned pulse found for this system; pass one explicitly "
                "(for example a neighbouring system's profile) or use initial='zero'"
            )
    v1, v2 = eval_piecewise(pulse.profile, sys, x, extend_tails=True)
    u1 = v1.real.copy()
    u2 = v2.real.copy()
    ref = float(u1[x.size // 2])
    amp = 0.0
    if cfg.initial == "kicked-pulse" and cfg.kick > 0.0:
        k1, k2 = _kick_field(sys, pulse, x)
        amp = cfg.kick * float(np.abs(u1).max())
        u1 += amp * k1
        u2 += amp * k2
    return u1, u2, amp, ref


def _extrema(d: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Indices of interior local maxima and minima of the trace."""
    if d.size < 3:
        empty = np.empty(0, dtype=int)
        return empty, empty
    left = np.diff(d[:-1])
    right = np.diff(d[1:])
    maxima = np.nonzero((left > 0) & (right <= 0))[0] + 1
    minima = np.nonzero((left < 0) & (right >= 0))[0] + 1
    return maxima, minima


def _amplitude_series(t: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Half the swing between consecutive extrema, at the midpoint time.

    Differencing consecutive extrema cancels the slow baseline drift of
    the center trace (the sampled analytic profile is O(eps) off the
    discrete equilibrium, so the mean moves while the oscillation
    evolves); |d| itself would floor at the drift size.
    """
    maxima, minima = _extrema(d)
    idx = np.sort(np.concatenate([maxima, minima]))
    if idx.size < 2:
        return np.empty((0, 2))
    amps = 0.5 * np.abs(np.diff(d[idx]))
    mids = 0.5 * (t[idx[:-1]] + t[idx[1:]])
    return np.column_stack([mids, amps])


def measure_period(center_series: np.ndarray) -> float | None:
    """Mean oscillation period of the center trace, or None.

    Drops the first 20% of the run as transient and averages the
    spacings between consecutive maxima and between consecutive minima
    of U1(0, t) (curvature-classified, so a slow baseline drift does
    not mislabel them).  Returns None when fewer than MIN_EXTREMA
    extrema survive.
    """
    series = np.asarray(center_series, dtype=float)
    if series.ndim != 2 or series.shape[0] < 5:
        return None
    t = series[:, 0]
    keep = t >= t[0] + 0.2 * (t[-1] - t[0])
    t = t[keep]
    d = series[keep, 1]
    maxima, minima = _extrema(d)
    if maxima.size + minima.size < MIN_EXTREMA:
        return None
    spacings = []
    for idx in (maxima, minima):
        if idx.size >= 2:
            spacings.extend(np.diff(t[idx]))
    if not spacings:
        return None
    return float(np.mean(spacings))


def _window_max(t: np.ndarray, a: np.ndarray, lo: float, hi: float, span: tuple[float, float]) -> float:
    """Max amplitude in the relative window, falling back to the last point."""
    t0, t1 = span
    mask = (t >= t0 + lo * (t1 - t0)) & (t <= t0 + hi * (t1 - t0))
    if mask.any():
        return float(a[mask].max())
    return float(a[-1]) if a.size else 0.0


def _classify(t, d, envelope, amp0, blew_up, n_extrema) -> str:
    if blew_up:
        return "blow-up"
    # oscillatory runs are judged on the drift-immune swing amplitudes,
    # monotone ones on the raw deviation
    if envelope.shape[0] >= 4:
        ta, aa = envelope[:, 0], envelope[:, 1]
    else:
        ta, aa = t, np.abs(d)
    if not aa.size:
        return "indeterminate"
    span = (float(t[0]), float(t[-1]))
    if amp0 > 0.0 and _window_max(ta, aa, 0.95, 1.0, span) < DECAY_FRACTION * amp0:
        return "decay to pulse"
    head = _window_max(ta, aa, 0.75, 0.875, span)
    tail = _window_max(ta, aa, 0.875, 1.0, span)
    significant = amp0 <= 0.0 or tail >= SUSTAIN_FLOOR * amp0
    if (
        n_extrema >= MIN_EXTREMA
        and head > 0.0
        and significant
        and abs(tail / head - 1.0) < SUSTAIN_DRIFT
    ):
        return "sustained oscillation"
    first = _window_max(ta, aa, 0.0, 0.25, span)
    last = _window_max(ta, aa, 0.75, 1.0, span)
    third = _window_max(ta, aa, 0.5, 0.75, span)
    if first > 0.0 and last >= GROWTH_FACTOR * first and last > third:
        return "growing oscillation"
    return "indeterminate"


def run_simulation(
    sys: ReactionSystem, cfg: SimConfig, pulse: PinnedPulse | None = None
) -> SimDiagnostics:
    """Integrate the system and classify the outcome.

    The optional pulse overrides the initial profile (useful when the
    system itself has none, e.g. past an existence fold, and the run
    starts from a neighbouring system's pulse).  Raises
    GridResolutionError when dx does not resolve the impurity,
    ValueError when dt exceeds the Heun limit of the splitting
    stepper, and StepperError when a step produces non-finite values
    before the blow-up threshold is reached.
    """
    _check_grid(sys, cfg)
    x = _grid(cfg)
    dx = float(x[1] - x[0])
    p = sys.params
    iv = impurity_on_grid(ImpurityProfile(), p.epsilon, x)
    core_idx = np.nonzero(iv > iv.max() * 1e-18)[0]
    sl = slice(int(core_idx[0]), int(core_idx[-1]) + 1)

    u1, u2, amp0, ref = _initial_state(sys, cfg, pulse, x)

    nsteps = max(1, int(math.ceil(cfg.t_end / cfg.dt)))
    dt = cfg.t_end / nsteps
    if cfg.stepper == "splitting":
        rho = _window_rho(sys, u1[sl], u2[sl])
        limit = _splitting_dt_limit(sys, dx, rho)
        if dt > limit:
            raise ValueError(
                f"dt={dt:.3g} exceeds the splitting stability limit "
                f"{limit:.3g} at the initial state (see stable_dt); reduce "
                "dt or use stepper='implicit'"
            )
        fac1 = _cn_factors(x.size, dx, 1.0, p.mu, dt, cfg.boundary)
        fac2 = _cn_factors(x.size, dx, p.D, p.mu, dt, cfg.boundary)
        implicit = None
    else:
        implicit = _ImplicitStepper(sys, iv, dx, dt, cfg.boundary)

    stride = max(1, int(round(cfg.sample_interval / dt)))
    mid = x.size // 2
    times = [0.0]
    c1_series = [float(u1[mid])]
    c2_series = [float(u2[mid])]
    blew_up = False
    t = 0.0

    for step in range(nsteps):
        if cfg.stepper == "splitting":
            u1, u2 = _heun(sys, iv, sl, u1, u2, 0.5 * dt)
            if cfg.boundary == "neumann":
                u1 = _cn_apply(*fac1, u1)
                u2 = _cn_apply(*fac2, u2)
            else:
                u1[1:-1] = _cn_apply(*fac1, u1[1:-1])
                u2[1:-1] = _cn_apply(*fac2, u2[1:-1])
                u1[0] = u1[-1] = 0.0
                u2[0] = u2[-1] = 0.0
            u1, u2 = _heun(sys, iv, sl, u1, u2, 0.5 * dt)
        else:
            try:
                if step < 2:
                    # damped startup: two backward Euler half steps kill
                    # the trapezoid's undamped ringing of the stiff modes
                    # excited by the O(eps) roughness of the initial data
                    implicit.retime(0.5 * dt, theta=1.0)
                    u1, u2 = implicit.step(u1, u2, t)
                    u1, u2 = implicit.step(u1, u2, t + 0.5 * dt)
                    implicit.retime(dt, theta=0.5)
                else:
                    u1, u2 = implicit.step(u1, u2, t)
            except StepperError:
                implicit.retime(dt, theta=0.5)
                u1, u2 = _finish_step_adaptive(implicit, u1, u2, t, dt)
        t = (step + 1) * dt
        sup = max(float(np.abs(u1).max()), float(np.abs(u2).max()))
        if not math.isfinite(sup):
            raise StepperError("state became non-finite", t - dt)
        record = (step + 1) % stride == 0 or step == nsteps - 1
        if sup > BLOWUP_SUP:
            blew_up = True
            record = True
        if record:
            times.append(t)
            c1_series.append(float(u1[mid]))
            c2_series.append(float(u2[mid]))
        if blew_up:
            break

    series = np.column_stack([times, c1_series, c2_series])
    if ref is None:
        tail = series[:, 1][series[:, 0] >= 0.75 * series[-1, 0]]
        ref = float(tail.mean()) if tail.size else 0.0
    d = series[:, 1] - ref
    envelope = _amplitude_series(series[:, 0], d)
    if amp0 == 0.0:
        if envelope.shape[0]:
            amp0 = float(envelope[0, 1])
        else:
            amp0 = float(np.abs(d[: max(2, d.size // 50)]).max())
    maxima, minima = _extrema(d)
    outcome = _classify(series[:, 0], d, envelope, amp0, blew_up, maxima.size + minima.size)
    period = measure_period(series)
    return SimDiagnostics(
        center_series=series,
        amplitude_envelope=envelope,
        estimated_period=period,
        outcome=outcome,
        x=x,
        u1_final=u1,
        u2_final=u2,
        final_time=t,
        kick_scale=amp0,
    )


def stationarity_residual(sys: ReactionSystem, pulse: PinnedPulse, cfg: SimConfig) -> float:
    """Off-window sup-norm of the cumulative integral of the discrete
    right-hand side at the analytic pulse profile.

    The pointwise right-hand side of the glued profile has a
    delta-against-kink mismatch of size O(1/dx) at the origin, so the
    residual is measured in integrated (flux) form.  The sup is taken
    over |x| >= epsilon: inside the window the profile idealizes the
    spread impurity as a point kink, and the partially accumulated
    flux differs by O(1) there by construction.  Outside, the residual
    is O(eps) + O(dx^2).
    """
    _check_grid(sys, cfg)
    x = _grid(cfg)
    dx = float(x[1] - x[0])
    iv = impurity_on_grid(ImpurityProfile(), sys.params.epsilon, x)
    v1, v2 = eval_piecewise(pulse.profile, sys, x, extend_tails=True)
    f1, f2 = discrete_rhs(sys, iv, v1.real, v2.real, dx, cfg.boundary)
    outside = np.abs(x) >= sys.params.epsilon
    sup = 0.0
    for f in (f1, f2):
        cum = np.concatenate([[0.0], np.cumsum(0.5 * (f[1:] + f[:-1]) * dx)])
        sup = max(sup, float(np.abs(cum[outside]).max()))
    return sup
