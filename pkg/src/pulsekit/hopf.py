"""Hopf point location and bifurcation-assumption audits.

Two independent roads to the critical parameter value:

* ``locate_hopf_closed_form`` reads the conjugate root pair t = n_r +
  i*n_i off a family cubic and solves mu = n_r^2 - n_i^2, re-solving the
  pulse self-consistently when the cubic coefficients depend on it.
* ``locate_hopf_scan`` walks a mu grid with pulse continuation, tracks
  the leading oscillatory eigenvalue of the gluing determinant, and
  bisects sign changes of its real part.

Both return HopfPoint records that certify the crossing: the eigenvalue
is re-polished at mu_hat and the transversality d Re(lambda)/d mu is
measured by a central difference.

``audit_assumptions`` evaluates the published sufficient conditions for
each recognized nonlinear family (entries A1 through A17) with signed
slacks.  Root-condition entries (A5, A9, A13, A17) assert that a
defining scalar equation admits a positive root; they are checked by
sign-change bracketing over mu in (0, 10] with the pulse re-solved at
every node, since the coefficients depend on mu through the pulse core.
"""

from __future__ import annotations

import cmath
import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .existence import PinnedPulse, continue_pulse, refine_pulse
from .model import BivariatePoly, ReactionSystem
from .spectral import (
    CubicReduction,
    EigenSolution,
    _cbrt,
    eigensolution_at,
    find_eigenvalues,
    polish_eigenvalue,
    reduce_to_cubic,
)

_FIXED_POINT_MAX_ITER = 200
_FIXED_POINT_TOL = 1e-12
_BISECT_TOL = 1e-12
_OSCILLATORY_TOL = 1e-8
_TRANSVERSALITY_STEP = 1e-6
_ROOT_SCAN_NODES = 512
_ROOT_SCAN_UPPER = 10.0

_AUDITED_FAMILIES = ("G15-G22", "G15-G23", "G13-G24", "G13-G25")
_UNCONDITIONAL_FAMILIES = ("linear", "G13-G26", "example-3.5")


class ContinuationError(RuntimeError):
    """A tracked pulse or eigenvalue branch was lost during continuation."""


@dataclass(frozen=True)
class AuditEntry:
    """One audited condition: its name, verdict, and signed slack.

    For inequality entries the value is positive exactly when the
    condition holds.  For root-condition entries the value is the
    closest approach of the defining equation over the scanned mu
    interval, positive when a sign change (hence a root) was bracketed,
    and NaN when the formula was undefined at every node.
    """

    name: str
    satisfied: bool
    value: float


@dataclass(frozen=True)
class AssumptionAudit:
    family: str
    entries: tuple[AuditEntry, ...]

    @property
    def all_satisfied(self) -> bool:
        return all(entry.satisfied for entry in self.entries)


@dataclass(frozen=True)
class HopfPoint:
    """A certified oscillatory instability threshold.

    n_r + i*n_i is the decay-rate root sqrt(mu_hat + i*omega_H), so the
    identities mu_hat = n_r^2 - n_i^2 and omega_H = 2*n_r*n_i hold by
    construction; they are enforced here as a consistency guard.
    transversality is d Re(lambda)/d mu at the crossing.
    """

    mu_hat: float
    omega_H: float
    n_r: float
    n_i: float
    eigen: EigenSolution
    transversality: float

    def __post_init__(self) -> None:
        if not (self.mu_hat > 0.0 and self.omega_H > 0.0):
            raise ValueError(
                f"mu_hat={self.mu_hat} and omega_H={self.omega_H} must both be positive"
            )
        if not (self.n_r > 0.0 and self.n_i > 0.0):
            raise ValueError(f"n_r={self.n_r} and n_i={self.n_i} must both be positive")
        if abs(self.omega_H - 2.0 * self.n_r * self.n_i) > 1e-10:
            raise ValueError("omega_H does not equal 2*n_r*n_i")
        if abs(self.mu_hat - (self.n_r**2 - self.n_i**2)) > 1e-10:
            raise ValueError("mu_hat does not equal n_r^2 - n_i^2")
        if not abs(self.transversality) > 1e-6:
            raise ValueError(
                f"transversality {self.transversality} is degenerate (|.| <= 1e-6)"
            )


# ---------------------------------------------------------------------------
# pulse continuation helpers


def _pulse_at(
    sys_mu: ReactionSystem, core: tuple[float, float] | None
) -> PinnedPulse | None:
    """Pulse at sys_mu, preferring the fast Newton path from a known core."""
    if core is not None:
        pulse = refine_pulse(sys_mu, core[0], core[1])
        if pulse is not None:
            return pulse
        return continue_pulse(sys_mu, near_C1=core[0])
    return continue_pulse(sys_mu)


def _strip_cubic_self_term(sys: ReactionSystem) -> ReactionSystem:
    """Drop the U1^3 monomial of G1 (the leading-order sibling system)."""
    terms = tuple(t for t in sys.G1.terms if (t[0], t[1]) != (3, 0))
    return dataclasses.replace(sys, G1=BivariatePoly(terms=terms))


# ---------------------------------------------------------------------------
# Hopf locators


def _conjugate_pair_candidate(red: CubicReduction) -> tuple[float, float] | None:
    """(mu_hat, omega) from the conjugate root pair with Re t > 0, if any."""
    for t in red.t_roots:
        if t.imag > 1e-12 and t.real > 0.0:
            mu_hat = t.real * t.real - t.imag * t.imag
            omega = 2.0 * t.real * t.imag
            if mu_hat > 0.0:
                return mu_hat, omega
    return None


def _continued_eigenvalue(
    base: ReactionSystem,
    mu: float,
    core: tuple[float, float],
    lam_guess: complex,
) -> complex | None:
    sys_mu = base.with_mu(mu)
    pulse = _pulse_at(sys_mu, core)
    if pulse is None:
        return None
    return polish_eigenvalue(sys_mu, pulse, lam_guess)


def _certify(
    base: ReactionSystem,
    mu_hat: float,
    omega_guess: float,
    core: tuple[float, float] | None,
) -> HopfPoint | None:
    """Re-polish the eigenvalue at mu_hat and attach the transversality."""
    sys_hat = base.with_mu(mu_hat)
    pulse = _pulse_at(sys_hat, core)
    if pulse is None:
        return None
    lam = polish_eigenvalue(sys_hat, pulse, complex(0.0, omega_guess))
    if lam is None or abs(lam.imag) < _OSCILLATORY_TOL:
        return None
    omega = abs(lam.imag)
    eigen = eigensolution_at(sys_hat, pulse, complex(0.0, omega))
    core_hat = pulse.core_values(sys_hat)
    h = _TRANSVERSALITY_STEP
    lam_plus = _continued_eigenvalue(base, mu_hat + h, core_hat, lam)
    lam_minus = _continued_eigenvalue(base, mu_hat - h, core_hat, lam)
    if lam_plus is None or lam_minus is None:
        return None
    transversality = float((lam_plus.real - lam_minus.real) / (2.0 * h))
    if not abs(transversality) > 1e-6:
        return None
    t_hat = cmath.sqrt(complex(mu_hat, omega))
    return HopfPoint(
        mu_hat=float(mu_hat),
        omega_H=float(omega),
        n_r=t_hat.real,
        n_i=t_hat.imag,
        eigen=eigen,
        transversality=transversality,
    )


def locate_hopf_closed_form(
    red: CubicReduction, sys: ReactionSystem
) -> HopfPoint | None:
    """Hopf point from the family cubic of an already-reduced system.

    The conjugate root pair t = n_r + i*n_i with Re t > 0 fixes the
    candidate mu = n_r^2 - n_i^2.  Cubic coefficients that depend on the
    pulse core are re-solved self-consistently at the candidate (fixed
    point iteration, pulse continued along the branch).  For the
    cubic-self-term family the U1^3 monomial is dropped first; the
    returned point is the leading-order threshold of that sibling
    system.  None when no admissible conjugate pair exists, the
    candidate mu is not positive, or the iteration loses the pulse.
    """
    candidate = _conjugate_pair_candidate(red)
    if candidate is None:
        return None
    mu, omega = candidate
    base = _strip_cubic_self_term(sys) if red.family == "example-3.5" else sys
    core: tuple[float, float] | None = None
    for _ in range(_FIXED_POINT_MAX_ITER):
        sys_mu = base.with_mu(mu)
        pulse = _pulse_at(sys_mu, core)
        if pulse is None:
            return None
        core = pulse.core_values(sys_mu)
        candidate = _conjugate_pair_candidate(reduce_to_cubic(sys_mu, pulse))
        if candidate is None:
            return None
        mu_next, omega = candidate
        converged = abs(mu_next - mu) < _FIXED_POINT_TOL
        mu = mu_next
        if converged:
            return _certify(base, mu, omega, core)
    return None


def _leading_oscillatory(
    sys_mu: ReactionSystem, pulse: PinnedPulse
) -> complex | None:
    """Largest-real-part eigenvalue off the real axis, upper half-plane."""
    mu = sys_mu.params.mu
    rect = (-mu + 1e-6, mu + 10.0, -10.0 * (1.0 + mu), 10.0 * (1.0 + mu))
    oscillatory = [
        e.lam for e in find_eigenvalues(sys_mu, pulse, rect)
        if abs(e.lam.imag) > _OSCILLATORY_TOL
    ]
    if not oscillatory:
        return None
    lam = max(oscillatory, key=lambda z: z.real)
    return complex(lam.real, abs(lam.imag))


def locate_hopf_scan(
    sys: ReactionSystem, mu_range: tuple[float, float], steps: int
) -> list[HopfPoint]:
    """Hopf points from a mu sweep of the gluing determinant.

    At each grid value the pulse is continued from its neighbor and the
    leading oscillatory eigenvalue recomputed by the full search; sign
    changes of its real part are bisected to 1e-12 in mu.  Grid points
    without a pulse (or without oscillatory eigenvalues) break the
    tracking but are not an error; losing the pulse inside a bracket
    raises ContinuationError naming the mu subinterval.
    """
    lo, hi = mu_range
    if not (0.0 < lo < hi):
        raise ValueError(f"mu_range {mu_range} must satisfy 0 < lo < hi")
    if steps < 2:
        raise ValueError("steps must be at least 2")

    found: list[HopfPoint] = []
    core: tuple[float, float] | None = None
    prev: tuple[float, complex, tuple[float, float]] | None = None
    for mu in np.linspace(lo, hi, steps):
        mu = float(mu)
        sys_mu = sys.with_mu(mu)
        pulse = _pulse_at(sys_mu, core)
        if pulse is None:
            core = None
            prev = None
            continue
        core = pulse.core_values(sys_mu)
        lam = _leading_oscillatory(sys_mu, pulse)
        if lam is None:
            prev = None
            continue
        if lam.real == 0.0:
            point = _certify(sys, mu, abs(lam.imag), core)
            if point is not None:
                found.append(point)
            prev = None
            continue
        if prev is not None:
            mu_prev, lam_prev, core_prev = prev
            if (lam_prev.real > 0.0) != (lam.real > 0.0):
                point = _bisect_hopf(sys, mu_prev, mu, core_prev, lam_prev, lam)
                if point is not None:
                    found.append(point)
        prev = (mu, lam, core)
    return found


def _bisect_hopf(
    base: ReactionSystem,
    mu_lo: float,
    mu_hi: float,
    core: tuple[float, float],
    lam_lo: complex,
    lam_hi: complex,
) -> HopfPoint | None:
    hi_sign = lam_hi.real > 0.0
    while mu_hi - mu_lo > _BISECT_TOL:
        mid = 0.5 * (mu_lo + mu_hi)
        sys_mid = base.with_mu(mid)
        pulse = _pulse_at(sys_mid, core)
        if pulse is None:
            raise ContinuationError(
                f"pulse branch lost inside the Hopf bracket mu in [{mu_lo}, {mu_hi}]"
            )
        core = pulse.core_values(sys_mid)
        lam = polish_eigenvalue(sys_mid, pulse, 0.5 * (lam_lo + lam_hi))
        if lam is None or abs(lam.imag) <= _OSCILLATORY_TOL:
            lam = _leading_oscillatory(sys_mid, pulse)
            if lam is None:
                raise ContinuationError(
                    "oscillatory eigenvalue pair lost inside the Hopf bracket "
                    f"mu in [{mu_lo}, {mu_hi}]"
                )
        lam = complex(lam.real, abs(lam.imag))
        if (lam.real > 0.0) == hi_sign:
            mu_hi, lam_hi = mid, lam
        else:
            mu_lo, lam_lo = mid, lam
    mu_hat = 0.5 * (mu_lo + mu_hi)
    omega = abs(0.5 * (lam_lo.imag + lam_hi.imag))
    return _certify(base, mu_hat, omega, core)


# ---------------------------------------------------------------------------
# assumption audits


def _entry(name: str, slack: float, allow_zero: bool = False) -> AuditEntry:
    ok = math.isfinite(slack) and (slack >= 0.0 if allow_zero else slack > 0.0)
    return AuditEntry(name=name, satisfied=bool(ok), value=float(slack))


def _root_entry(name: str, sys: ReactionSystem, gap) -> AuditEntry:
    """Bracket gap(mu) = 0 over mu in (0, 10] with pulse continuation.

    Nodes where the pulse is missing or the gap formula is undefined
    (negative discriminant under a square root) reset the bracketing.
    The entry value is +/- the closest approach |gap| seen.
    """
    nodes = np.linspace(
        _ROOT_SCAN_UPPER / _ROOT_SCAN_NODES, _ROOT_SCAN_UPPER, _ROOT_SCAN_NODES
    )
    best = math.inf
    prev_gap: float | None = None
    core: tuple[float, float] | None = None
    bracketed = False
    for mu in nodes:
        sys_mu = sys.with_mu(float(mu))
        pulse = _pulse_at(sys_mu, core)
        if pulse is None:
            prev_gap = None
            core = None
            continue
        core = pulse.core_values(sys_mu)
        g = gap(sys_mu, pulse)
        if not math.isfinite(g):
            prev_gap = None
            continue
        best = min(best, abs(g))
        if prev_gap is not None and (g == 0.0 or (g > 0.0) != (prev_gap > 0.0)):
            bracketed = True
        prev_gap = g
    if not math.isfinite(best):
        return AuditEntry(name=name, satisfied=False, value=math.nan)
    return AuditEntry(name=name, satisfied=bracketed, value=best if bracketed else -best)


def _gap_quadratic_forward(sys: ReactionSystem, pulse: PinnedPulse) -> float:
    """A5 gap: root condition of the U2^2-with-U1-feedback family."""
    p = sys.params
    rD = math.sqrt(p.D)
    g15 = sys.G1.coeff(0, 2)
    g22 = sys.G2.coeff(1, 0)
    _c1, gam = pulse.core_values(sys)
    B1 = -p.alpha * p.beta * g15 * g22 * gam / (2.0 * rD)
    E1 = p.alpha * p.b_coupling * g15 * gam / (1.0 + rD)
    disc = 81.0 * E1 * E1 + 12.0 * B1**3
    if disc < 0.0:
        return math.nan
    root = math.sqrt(disc)
    u = _cbrt(1.5 * (-9.0 * E1 + root))
    v = _cbrt(1.5 * (-9.0 * E1 - root))
    return (2.0 * u * v - 0.5 * u * u - 0.5 * v * v) - 9.0 * p.mu


def _gap_quadratic_cross(sys: ReactionSystem, pulse: PinnedPulse) -> float:
    """A9 gap: root condition of the U2^2-with-U2-feedback family."""
    p = sys.params
    rD = math.sqrt(p.D)
    g15 = sys.G1.coeff(0, 2)
    g23 = sys.G2.coeff(0, 1)
    _c1, gam = pulse.core_values(sys)
    q = p.alpha * p.b_coupling * g15 * gam / (1.0 + rD)
    bg = p.beta * g23
    disc = (-2.0 * rD * q) * (324.0 * p.D * (-2.0 * rD * q) + 12.0 * bg**3)
    if disc < 0.0:
        return math.nan
    root = math.sqrt(disc)
    u = _cbrt(-(bg**3) + 3.0 * rD * (36.0 * p.D * q + root))
    v = _cbrt(-(bg**3) + 3.0 * rD * (36.0 * p.D * q - root))
    return (
        -0.5 * u * u - 0.5 * v * v + bg * bg + bg * (u + v) + 2.0 * u * v
    ) - 36.0 * p.D * p.mu


def _gap_square_forward(sys: ReactionSystem, pulse: PinnedPulse) -> float:
    """A13 gap: root condition of the U1^2-feedback family."""
    p = sys.params
    rD = math.sqrt(p.D)
    g13 = sys.G1.coeff(0, 1)
    g24 = sys.G2.coeff(2, 0)
    c1, _gam = pulse.core_values(sys)
    T = 18.0 * p.alpha * p.D * p.b_coupling * g13 / (1.0 + rD)
    disc = T * T - 24.0 * rD * (p.alpha * p.beta * g13 * g24 * c1) ** 3
    if disc < 0.0:
        return math.nan
    root = math.sqrt(disc)
    u = _cbrt(-3.0 * rD * (T + root))
    v = _cbrt(-3.0 * rD * (T - root))
    return (-(u * u) - v * v + 4.0 * u * v) - 72.0 * p.D * p.mu


def _gap_square_cross(sys: ReactionSystem, pulse: PinnedPulse) -> float:
    """A17 gap: root condition of the U2^2-feedback family."""
    p = sys.params
    rD = math.sqrt(p.D)
    g13 = sys.G1.coeff(0, 1)
    g25 = sys.G2.coeff(0, 2)
    _c1, gam = pulse.core_values(sys)
    ag = p.alpha * g13
    g = 2.0 * p.beta * g25 * gam / ag
    T = 18.0 * p.b_coupling * p.D / (ag * (rD + 1.0))
    disc = T * T - (96.0 * p.b_coupling * rD / (rD + 1.0)) * (
        p.beta * g25 * gam / ag
    ) ** 3
    if disc < 0.0:
        return math.nan
    root = math.sqrt(disc)
    x = _cbrt(-(g**3) + (3.0 * rD / ag) * (T + root))
    y = _cbrt(-(g**3) + (3.0 * rD / ag) * (T - root))
    return (
        g * g + g * (x + y) + 2.0 * x * y - 0.5 * (x * x + y * y)
    ) - 36.0 * p.D * p.mu / (ag * ag)


def _entries_G15_G22(sys: ReactionSystem, pulse: PinnedPulse) -> list[AuditEntry]:
    p = sys.params
    mu = p.mu
    rD = math.sqrt(p.D)
    g11 = sys.G1.coeff(0, 0)
    g15 = sys.G1.coeff(0, 2)
    g22 = sys.G2.coeff(1, 0)
    _c1, gam = pulse.core_values(sys)
    W = p.beta * g22 / (2.0 * math.sqrt(mu * p.D)) - p.b_coupling / (mu * (1.0 + rD))
    a1 = 4.0 * mu - 4.0 * p.alpha**2 * g15 * g11 * W * W
    a2 = p.alpha * p.b_coupling * g15 * gam / (1.0 + rD)
    a3 = p.alpha * p.beta * g15 * g22 * gam
    X = a3
    if X > 0.0:
        a4 = (X / 3.0) ** 1.5 + a2 - X * math.sqrt(X / 3.0)
    else:
        a4 = math.nan
    return [
        _entry("A1", a1),
        _entry("A2", a2),
        _entry("A3", a3),
        _entry("A4", a4),
        _root_entry("A5", sys, _gap_quadratic_forward),
    ]


def _entries_G15_G23(sys: ReactionSystem, pulse: PinnedPulse) -> list[AuditEntry]:
    p = sys.params
    mu = p.mu
    rD = math.sqrt(p.D)
    g11 = sys.G1.coeff(0, 0)
    g15 = sys.G1.coeff(0, 2)
    g23 = sys.G2.coeff(0, 1)
    _c1, gam = pulse.core_values(sys)
    # (sqrt(D) - D)/(D - 1) written as -sqrt(D)/(1 + sqrt(D)): identical
    # away from D = 1 and finite in the resonant limit
    W = (
        (2.0 * p.b_coupling / math.sqrt(mu))
        * (-rD / (1.0 + rD))
        / (2.0 * math.sqrt(mu * p.D) - p.beta * g23)
    )
    a6 = 4.0 * mu - 4.0 * p.alpha**2 * g11 * g15 * W * W
    q = p.alpha * p.b_coupling * g15 * gam / (1.0 + rD)
    bg = p.beta * g23
    a7 = (-2.0 * rD * q) * (324.0 * p.D * (-2.0 * rD * q) + 12.0 * bg**3)
    if a7 >= 0.0:
        root = math.sqrt(a7)
        u = _cbrt(-(bg**3) + 3.0 * rD * (36.0 * p.D * q + root))
        v = _cbrt(-(bg**3) + 3.0 * rD * (36.0 * p.D * q - root))
        a8 = (u + v) - bg
    else:
        a8 = math.nan
    return [
        _entry("A6", a6),
        _entry("A7", a7),
        _entry("A8", a8, allow_zero=True),
        _root_entry("A9", sys, _gap_quadratic_cross),
    ]


def _entries_G13_G24(sys: ReactionSystem, pulse: PinnedPulse) -> list[AuditEntry]:
    p = sys.params
    mu = p.mu
    rD = math.sqrt(p.D)
    g11 = sys.G1.coeff(0, 0)
    g13 = sys.G1.coeff(0, 1)
    g24 = sys.G2.coeff(2, 0)
    c1, _gam = pulse.core_values(sys)
    a10 = (
        math.sqrt(p.D / mu)
        * (2.0 * mu + p.alpha * g13 * p.b_coupling / ((rD + 1.0) * math.sqrt(mu))) ** 2
        - 2.0 * p.alpha**2 * p.beta * g11 * g13 * g24
    )
    a11 = (
        27.0 * p.D * rD * p.b_coupling**2
        - 2.0 * p.alpha * g13 * (p.beta * g24 * c1) ** 3 * (1.0 + rD) ** 2
    )
    a12 = p.alpha * p.b_coupling * g13
    return [
        _entry("A10", a10),
        _entry("A11", a11),
        _entry("A12", a12),
        _root_entry("A13", sys, _gap_square_forward),
    ]


def _entries_G13_G25(sys: ReactionSystem, pulse: PinnedPulse) -> list[AuditEntry]:
    p = sys.params
    mu = p.mu
    rD = math.sqrt(p.D)
    g11 = sys.G1.coeff(0, 0)
    g13 = sys.G1.coeff(0, 1)
    g25 = sys.G2.coeff(0, 2)
    _c1, gam = pulse.core_values(sys)
    # (D - sqrt(D))/(D - 1) written as sqrt(D)/(1 + sqrt(D))
    ratio = rD / (1.0 + rD)
    lhs14 = (
        4.0 * math.sqrt(mu) * g11 / p.alpha
        + 4.0 * rD * g13 * mu / (p.alpha * p.beta * g25)
        + 2.0 * p.b_coupling * g13**2 * ratio / (p.beta * math.sqrt(mu) * g25)
    ) ** 2
    rhs14 = (16.0 * mu / p.alpha**2) * (
        g11**2 + 2.0 * math.sqrt(p.D * mu) * g11 * g13 / (p.beta * g25)
    )
    a14 = lhs14 - rhs14
    a15 = 27.0 * p.D * (p.b_coupling * ratio) ** 2 - (
        8.0 * p.b_coupling * ratio / (p.alpha * g13)
    ) * (p.beta * g25 * gam) ** 3
    ag = p.alpha * g13
    g = 2.0 * p.beta * g25 * gam / ag
    T = 18.0 * p.b_coupling * p.D / (ag * (rD + 1.0))
    disc = T * T - (96.0 * p.b_coupling * rD / (rD + 1.0)) * (
        p.beta * g25 * gam / ag
    ) ** 3
    if disc >= 0.0:
        root = math.sqrt(disc)
        x = _cbrt(-(g**3) + (3.0 * rD / ag) * (T + root))
        y = _cbrt(-(g**3) + (3.0 * rD / ag) * (T - root))
        a16 = ag * (x + y) - 2.0 * p.beta * g25 * gam
    else:
        a16 = math.nan
    return [
        _entry("A14", a14),
        _entry("A15", a15),
        _entry("A16", a16, allow_zero=True),
        _root_entry("A17", sys, _gap_square_cross),
    ]


_AUDIT_BUILDERS = {
    "G15-G22": _entries_G15_G22,
    "G15-G23": _entries_G15_G23,
    "G13-G24": _entries_G13_G24,
    "G13-G25": _entries_G13_G25,
}


def audit_assumptions(
    sys: ReactionSystem,
    family: str,
    mu: float,
    pulse: PinnedPulse | None = None,
) -> AssumptionAudit:
    """Evaluate the sufficient bifurcation conditions of a family at mu.

    The system must actually reduce to the stated family (ValueError
    otherwise).  Inequalities are evaluated on the given pulse, or on
    the smallest-amplitude pulse at mu when none is passed.  Families
    whose theorems carry no named side conditions (linear, the mixed
    U1*U2 family, and the cubic-self-term example) return empty audits.
    """
    known = _AUDITED_FAMILIES + _UNCONDITIONAL_FAMILIES
    if family not in known:
        raise ValueError(f"unknown family {family!r}; expected one of {known}")
    sys_mu = sys.with_mu(float(mu))
    if pulse is None:
        pulse = continue_pulse(sys_mu)
        if pulse is None:
            raise ValueError(f"no stationary pulse at mu={mu} to audit")
    elif abs(pulse.mu - float(mu)) > 1e-12:
        raise ValueError(f"pulse was solved at mu={pulse.mu}, not at mu={mu}")
    red = reduce_to_cubic(sys_mu, pulse)
    if red.family != family:
        raise ValueError(f"system reduces to family {red.family!r}, not {family!r}")
    if family in _UNCONDITIONAL_FAMILIES:
        return AssumptionAudit(family=family, entries=())
    entries = _AUDIT_BUILDERS[family](sys_mu, pulse)
    return AssumptionAudit(family=family, entries=tuple(entries))
