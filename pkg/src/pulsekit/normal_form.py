"""Hopf normal form on the center manifold of a pinned pulse.

Near a Hopf point the dynamics transverse to the pulse reduce to the
amplitude equation

    dA/dt = i*omega_H*A + a*mu_tilde*A + b*|A|^2*A,

whose coefficients are pairings of the critical eigenfunction P against
the adjoint eigenfunction P*, together with two forced resolvent modes
at shifts 0 and 2i*omega_H.  Every object involved is a piecewise
exponential glued across the impurity window, so the slow-interval
inner products reduce to closed-form sums of c/(s1 + conj(s2)) terms
and the fast-interval pairings to window constants times the unit
impurity mass.

Conventions fixed throughout: the eigenpair (P, P*) and every window
evaluation sit at the leading order of the matched expansion.  When G1
carries a cubic self-interaction the leading-order pulse is the one of
the sibling system with that monomial dropped; the cubic term then
enters only through the reaction derivatives (matrix diagonals and the
quadratic/cubic sources evaluated at the leading pulse), which is the
order at which it first contributes.  The coefficient a is -1
identically for this model class: the linear part depends on mu only
through -mu*Id, and the mu-derivative source vanishes once the
expansion is centered on the mu-dependent pulse family.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .existence import PinnedPulse, continue_pulse
from .hopf import HopfPoint, _strip_cubic_self_term
from .model import (
    RESONANT_TOL,
    PiecewiseExpSolution,
    ReactionSystem,
    SystemParams,
    coupling_jump,
    eval_piecewise,
)

# Pairings smaller than this cannot normalize the normal form coefficients.
_PAIRING_TOL = 1e-14
# Relative floor on the smallest singular value of a resolvent matching
# matrix; below it the shift sits on (or numerically too close to) the
# point spectrum and the forced mode is not uniquely determined.
_RESONANCE_TOL = 1e-10
# A quadratic-mode solve must reproduce its source to this relative level.
_MATCHING_TOL = 1e-10
# |b_r| below this: the cubic truncation does not decide the bifurcation.
_DEGENERATE_TOL = 1e-10

_ORDER_TAGS = ("Psi001", "Psi200", "Psi110")


class InconsistentHopfDataError(ValueError):
    """Adjoint matching determinant does not vanish at the supplied Hopf data."""


class ResonanceError(ValueError):
    """A resolvent shift collides with the point spectrum of the linearization."""


class DegeneratePairingError(ValueError):
    """The (P, P*) pairing is too small to normalize the reduced coefficients."""


@dataclass(frozen=True)
class AdjointEigenSolution:
    """Adjoint critical mode at lambda = -i*omega_H.

    The adjoint transposes the coupling: the -b*U1 feed moves into the
    first component, so the cross-coupling tail of P* sits in component
    1 and decays at the slow rate sqrt((mu_hat - i*omega_H)/D).
    Normalized like the forward eigenfunctions: max(|C5|, |C6|) = 1
    with the larger constant real positive.
    """

    C5: complex
    C6: complex
    eigfun: PiecewiseExpSolution
    lam: complex


@dataclass(frozen=True)
class ResolventSolution:
    """A forced mode (shift - L)Psi = source at quadratic order.

    constants are the amplitudes of the two decaying modes (the C7/C8
    and C9/C10 pattern); core holds the window values of both
    components, with the coupled component stored directly so the value
    stays finite through the D -> 1 resonance.
    """

    order_tag: str
    shift: complex
    constants: tuple[complex, complex]
    core: tuple[complex, complex]
    forcing: str

    def __post_init__(self) -> None:
        if self.order_tag not in _ORDER_TAGS:
            raise ValueError(f"unknown order_tag {self.order_tag!r}")


@dataclass(frozen=True)
class NormalFormData:
    """Reduced coefficients of the amplitude equation at a Hopf point."""

    a: complex
    b: complex
    classification: str
    I2: complex
    L1: complex

    def __post_init__(self) -> None:
        if self.classification not in ("supercritical", "subcritical", "degenerate"):
            raise ValueError(f"unknown classification {self.classification!r}")

    @property
    def a_r(self) -> float:
        return self.a.real

    @property
    def a_i(self) -> float:
        return self.a.imag

    @property
    def b_r(self) -> float:
        return self.b.real

    @property
    def b_i(self) -> float:
        return self.b.imag


@dataclass(frozen=True)
class BreathingPrediction:
    """Leading-order periodic orbit bifurcating from the pulse.

    The oscillation is pulse + amplitude*exp(i*frequency*t)*P + c.c.,
    so amplitude*P is the complex envelope of the breathing motion.
    exists is False on the side of mu_hat where no orbit bifurcates
    (with a_r = -1 the orbit sits where (mu - mu_hat)/b_r > 0).
    """

    exists: bool
    amplitude: float
    frequency: float
    mu: float
    pulse: PinnedPulse
    eigfun: PiecewiseExpSolution | None

    def envelope(self, sys: ReactionSystem, x):
        """Complex oscillation envelope of both components at x."""
        if not self.exists or self.eigfun is None:
            zero = np.zeros_like(np.asarray(x, dtype=float), dtype=complex)
            return zero, zero
        p1, p2 = eval_piecewise(self.eigfun, sys, x)
        return self.amplitude * np.asarray(p1), self.amplitude * np.asarray(p2)

    def profile(self, sys: ReactionSystem, x, t: float = 0.0):
        """Real fields of the predicted oscillation at time t."""
        u1, u2 = eval_piecewise(self.pulse.profile, sys, x)
        e1, e2 = self.envelope(sys, x)
        phase = cmath.exp(1j * self.frequency * t)
        out1 = np.asarray(u1).real + 2.0 * (phase * e1).real
        out2 = np.asarray(u2).real + 2.0 * (phase * e2).real
        return out1, out2


# ---------------------------------------------------------------------------
# window linearization and source assembly


def _window_point(sys: ReactionSystem, pulse: PinnedPulse) -> tuple[float, float]:
    """Window values (U1, U2) of the pulse, the linearization point."""
    c1, c2 = pulse.profile.core_values(sys.params)
    return c1.real, c2.real


def _leading_pulse(sys: ReactionSystem) -> PinnedPulse:
    """Leading-order pulse at sys's mu (cubic self-interaction dropped).

    The center-manifold expansion evaluates all window quantities at
    leading order, so a cubic self-term contributes through the
    reaction derivatives only, not through the pulse amplitudes.
    """
    pulse = continue_pulse(_strip_cubic_self_term(sys))
    if pulse is None:
        raise ValueError(
            f"no leading-order pinned pulse at mu={sys.params.mu}; "
            "cannot evaluate the window linearization"
        )
    return pulse


def _first_derivatives(sys: ReactionSystem, point: tuple[float, float]):
    u1, u2 = point
    g11 = sys.G1.diff(1, 0).eval(u1, u2)
    g12 = sys.G1.diff(0, 1).eval(u1, u2)
    g21 = sys.G2.diff(1, 0).eval(u1, u2)
    g22 = sys.G2.diff(0, 1).eval(u1, u2)
    return g11, g12, g21, g22


def _bilinear_source(
    sys: ReactionSystem, point: tuple[float, float], U, V
) -> tuple[complex, complex]:
    """Second-order Taylor source (both components) for window values U, V.

    Component i carries (coef_i/2) * D^2 G_i[U, V] with coef_1 = alpha,
    coef_2 = beta; the common (1/eps^2)*I window factor is stripped
    because the fast-interval pairings integrate it to unit mass.
    """
    u1, u2 = point
    out = []
    for G, coef in ((sys.G1, sys.params.alpha), (sys.G2, sys.params.beta)):
        h11 = G.diff(2, 0).eval(u1, u2)
        h12 = G.diff(1, 1).eval(u1, u2)
        h22 = G.diff(0, 2).eval(u1, u2)
        out.append(
            0.5
            * coef
            * (h11 * U[0] * V[0] + h12 * (U[0] * V[1] + U[1] * V[0]) + h22 * U[1] * V[1])
        )
    return out[0], out[1]


def _trilinear_source(
    sys: ReactionSystem, point: tuple[float, float], U, V, W
) -> tuple[complex, complex]:
    """Third-order Taylor source (coef_i/6) * D^3 G_i[U, V, W]."""
    u1, u2 = point
    out = []
    for G, coef in ((sys.G1, sys.params.alpha), (sys.G2, sys.params.beta)):
        t30 = G.diff(3, 0).eval(u1, u2)
        t21 = G.diff(2, 1).eval(u1, u2)
        t12 = G.diff(1, 2).eval(u1, u2)
        t03 = G.diff(0, 3).eval(u1, u2)
        sym21 = U[0] * V[0] * W[1] + U[0] * V[1] * W[0] + U[1] * V[0] * W[0]
        sym12 = U[0] * V[1] * W[1] + U[1] * V[0] * W[1] + U[1] * V[1] * W[0]
        out.append(
            (coef / 6.0)
            * (
                t30 * U[0] * V[0] * W[0]
                + t21 * sym21
                + t12 * sym12
                + t03 * U[1] * V[1] * W[1]
            )
        )
    return out[0], out[1]


# ---------------------------------------------------------------------------
# adjoint critical mode


def _adjoint_matrix(
    sys: ReactionSystem, pulse: PinnedPulse, sigma_star: complex
) -> np.ndarray:
    """Adjoint matching matrix in the stable variables (P1* window, C6).

    Writing the first-component window value W1 = C5 + kappa*C6 keeps
    every entry finite through D -> 1: the coupled tail's derivative
    jump combines into D times the same cancellation-free jump
    coefficient as in the forward problems.
    """
    p = sys.params
    point = _window_point(sys, pulse)
    g11, g12, g21, g22 = _first_derivatives(sys, point)
    s = cmath.sqrt(sigma_star)
    s_D = s / math.sqrt(p.D)
    jump = coupling_jump(p.b_coupling, sigma_star, p.D)
    return np.array(
        [
            [2.0 * s - p.alpha * g11, p.D * jump - p.beta * g21],
            [-p.alpha * g12, 2.0 * p.D * s_D - p.beta * g22],
        ],
        dtype=complex,
    )


def solve_adjoint(sys: ReactionSystem, hopf: HopfPoint) -> AdjointEigenSolution:
    """Adjoint critical mode (L* + i*omega_H)P* = 0 as matching constants.

    The matching matrix is built on the linearization the Hopf data
    certifies: when G1 carries a cubic self-interaction the certified
    eigenpair belongs to the leading-order sibling with that monomial
    dropped, so the stripped system is tried first and the full system
    kept as fallback (scan-located points on the full system).  A
    matrix that is singular for neither choice means the Hopf data does
    not belong to this system.

    Raises
    ------
    InconsistentHopfDataError
        If no pulse exists at mu_hat or the adjoint determinant stays
        away from zero for every admissible linearization.
    """
    p = sys.params
    sigma_star = complex(hopf.mu_hat, -hopf.omega_H)
    stripped = _strip_cubic_self_term(sys)
    candidates = [stripped] if stripped is sys or stripped.G1 == sys.G1 else [stripped, sys]

    best: tuple[float, np.ndarray] | None = None
    for base in candidates:
        base_mu = base.with_mu(hopf.mu_hat)
        pulse = continue_pulse(base_mu)
        if pulse is None:
            continue
        m = _adjoint_matrix(base_mu, pulse, sigma_star)
        scale = max(abs(v) for v in m.ravel())
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if abs(det) <= 1e-10 * scale * scale:
            best = (abs(det), m)
            break
    if best is None:
        raise InconsistentHopfDataError(
            "adjoint matching determinant does not vanish at mu_hat - i*omega_H; "
            "the Hopf data does not certify this system"
        )

    _, m = best
    _u, _s, vh = np.linalg.svd(m)
    w1, c6 = vh[-1].conjugate()
    resonant = abs(p.D - 1.0) < RESONANT_TOL
    if resonant:
        c5 = w1 + p.b_coupling * c6 / (4.0 * sigma_star)
    else:
        kappa_star = p.b_coupling * p.D / ((1.0 - p.D) * sigma_star)
        c5 = w1 - kappa_star * c6
    # normalize like the forward eigenfunctions
    if abs(c5) >= abs(c6):
        phase = c5 / abs(c5) if c5 != 0 else 1.0
    else:
        phase = c6 / abs(c6)
    scale = phase * max(abs(c5), abs(c6))
    c5, c6, w1 = c5 / scale, c6 / scale, w1 / scale
    eigfun = PiecewiseExpSolution(
        lambda_shift=sigma_star,
        fast_amp=c5,
        slow_amp=c6,
        branch="resonant" if resonant else "general",
        coupling_sign="adjoint",
        coupled_core=None if resonant else w1,
    )
    return AdjointEigenSolution(
        C5=complex(c5), C6=complex(c6), eigfun=eigfun, lam=complex(0.0, -hopf.omega_H)
    )


# ---------------------------------------------------------------------------
# forced quadratic modes


def _forced_matrix(
    sys: ReactionSystem, point: tuple[float, float], sigma_total: complex
) -> np.ndarray:
    """Forward matching matrix at total shift mu_hat + shift.

    Variables are (fast amplitude, window value of component 2); the
    second row uses the cancellation-free jump coefficient times D, so
    the system is valid straight through D = 1.
    """
    p = sys.params
    g11, g12, g21, g22 = _first_derivatives(sys, point)
    s = cmath.sqrt(sigma_total)
    s_D = s / math.sqrt(p.D)
    jump = coupling_jump(p.b_coupling, sigma_total, p.D)
    return np.array(
        [
            [2.0 * s - p.alpha * g11, -p.alpha * g12],
            [p.D * jump - p.beta * g21, 2.0 * p.D * s_D - p.beta * g22],
        ],
        dtype=complex,
    )


def solve_resolvent_quadratic(
    sys: ReactionSystem, hopf: HopfPoint, which: str
) -> ResolventSolution:
    """Forced piecewise-exponential mode at one quadratic order.

    which selects the mode: "Psi200" solves (2i*omega_H - L)Psi =
    R20(P, P), "Psi110" solves (0 - L)Psi = 2*R20(P, conj(P)), and
    "Psi001" is the mu-derivative mode, identically zero here because
    the expansion is centered on the mu-dependent pulse family.  The
    sources take the window values of the certified eigenfunction P;
    the matrices and sources use the full reaction derivatives of sys
    (a cubic self-interaction enters the diagonal and the sources)
    evaluated at the leading-order pulse of sys's mu.

    Raises
    ------
    ResonanceError
        If the matching matrix is numerically singular (the shift sits
        on the point spectrum).
    ValueError
        If which is not an order tag, or no leading-order pulse exists
        at sys's mu.
    """
    if which not in _ORDER_TAGS:
        raise ValueError(f"unknown order_tag {which!r}; expected one of {_ORDER_TAGS}")
    p = sys.params
    point = _window_point(sys, _leading_pulse(sys))

    shift = complex(0.0, 2.0 * hopf.omega_H) if which == "Psi200" else complex(0.0)
    sigma_total = hopf.mu_hat + shift
    m = _forced_matrix(sys, point, sigma_total)
    svals = np.linalg.svd(m, compute_uv=False)
    if svals[-1] < _RESONANCE_TOL * svals[0]:
        raise ResonanceError(
            f"matching matrix at shift {shift} is singular to working precision; "
            "the shift resonates with the point spectrum"
        )

    P = hopf.eigen.eigfun.core_values(p)
    if which == "Psi200":
        src = np.array(_bilinear_source(sys, point, P, P), dtype=complex)
        forcing = "R20(P, P) concentrated in the impurity window"
    elif which == "Psi110":
        Pbar = (P[0].conjugate(), P[1].conjugate())
        s1, s2 = _bilinear_source(sys, point, P, Pbar)
        src = np.array([2.0 * s1, 2.0 * s2], dtype=complex)
        forcing = "2*R20(P, conj(P)) concentrated in the impurity window"
    else:
        src = np.zeros(2, dtype=complex)
        forcing = "mu-derivative source (vanishes: expansion centered on the pulse family)"

    sol = np.linalg.solve(m, src)
    sol = sol + np.linalg.solve(m, src - m @ sol)  # one refinement step
    residual = np.linalg.norm(src - m @ sol)
    scale = max(1.0, float(np.linalg.norm(src)))
    if residual > _MATCHING_TOL * scale:
        raise RuntimeError(
            f"quadratic mode {which} solved to residual {residual:.3e} only"
        )
    ca, z2 = complex(sol[0]), complex(sol[1])
    if abs(p.D - 1.0) < RESONANT_TOL:
        cb = z2 + p.b_coupling * ca / (4.0 * sigma_total)
    else:
        kappa = p.b_coupling / ((p.D - 1.0) * sigma_total)
        cb = z2 - kappa * ca
    return ResolventSolution(
        order_tag=which,
        shift=shift,
        constants=(ca, cb),
        core=(ca, z2),
        forcing=forcing,
    )


# ---------------------------------------------------------------------------
# slow-interval pairing


def _tail_integral(rate: complex, eps: float, power: int) -> complex:
    """Closed form of the one-sided moment integral against exp(-rate*y).

    Integrates y^power * exp(-rate*y) over y in [eps, infinity) for
    power 0, 1 or 2 (products of at most singly secular profiles).
    """
    damp = cmath.exp(-rate * eps)
    if power == 0:
        return damp / rate
    if power == 1:
        return damp * (eps / rate + 1.0 / rate**2)
    if power == 2:
        return damp * (eps**2 / rate + 2.0 * eps / rate**2 + 2.0 / rate**3)
    raise ValueError(f"unsupported secular power {power}")


def _profile_terms(sol: PiecewiseExpSolution, params: SystemParams):
    """Both components as lists of (coefficient, decay rate, secular power).

    Each term stands for coeff * y^power * exp(-rate*y) in the distance
    y = |x| from the window; the resonant branch expands the secular
    (-1 - 2*s*y) factor into powers of y.
    """
    s, s_D = sol.decay_rates(params.D)
    if sol.branch == "resonant":
        k = sol.coupling_amp(params)
        secular = [(-k, s, 0), (-2.0 * s * k, s, 1)]
        if sol.coupling_sign == "forward":
            comp1 = [(sol.fast_amp, s, 0)]
            comp2 = [(sol.slow_amp, s, 0)] + secular
        else:
            comp1 = [(sol.fast_amp, s, 0)] + secular
            comp2 = [(sol.slow_amp, s, 0)]
        return comp1, comp2
    k = sol.coupling_amp(params)
    if sol.coupling_sign == "forward":
        comp1 = [(sol.fast_amp, s, 0)]
        comp2 = [(sol.slow_amp, s_D, 0), (k, s, 0)]
    else:
        comp1 = [(sol.fast_amp, s, 0), (k, s_D, 0)]
        comp2 = [(sol.slow_amp, s_D, 0)]
    return comp1, comp2


def pairing_l1(sys: ReactionSystem, hopf: HopfPoint, adjoint: AdjointEigenSolution) -> complex:
    """One-sided slow-interval inner product of P against P*.

    Integrates P1*conj(P1*) + P2*conj(P2*) over x <= -epsilon in closed
    form; by evenness the full slow-interval pairing is twice this.
    The decay rates of P* are the conjugates of those of P, so every
    term reduces to c/(s1 + conj(s2)) times the matching exponential
    damping at the window edge.
    """
    p = sys.params
    fwd1, fwd2 = _profile_terms(hopf.eigen.eigfun, p)
    adj1, adj2 = _profile_terms(adjoint.eigfun, p)
    total = 0.0 + 0.0j
    for fwd, adj in ((fwd1, adj1), (fwd2, adj2)):
        for cf, rf, pf in fwd:
            for ca, ra, pa in adj:
                rate = rf + ra.conjugate()
                total += cf * ca.conjugate() * _tail_integral(rate, p.epsilon, pf + pa)
    return complex(total)


# ---------------------------------------------------------------------------
# reduced coefficients


def coefficient_a(
    sys: ReactionSystem, hopf: HopfPoint, adjoint: AdjointEigenSolution
) -> complex:
    """Linear unfolding coefficient of the amplitude equation.

    Assembled as <R11(P) + 2*R20(P, Psi001), P*> / <P, P*>.  For this
    model class R11 = -identity (the linear part depends on mu only
    through -mu*Id) and Psi001 vanishes, so the quotient collapses to
    -1; the assembly is kept explicit so the degenerate pairing case
    still surfaces.

    Raises
    ------
    DegeneratePairingError
        If <P, P*> is numerically zero.
    """
    pairing = 2.0 * pairing_l1(sys, hopf, adjoint)
    if abs(pairing) < _PAIRING_TOL:
        raise DegeneratePairingError(
            f"<P, P*> = {pairing} is too small to normalize the coefficients"
        )
    psi001 = solve_resolvent_quadratic(sys, hopf, "Psi001")
    point = _window_point(sys, _leading_pulse(sys))
    P = hopf.eigen.eigfun.core_values(sys.params)
    Ps = adjoint.eigfun.core_values(sys.params)
    f1, f2 = _bilinear_source(sys, point, P, psi001.core)
    fast = 2.0 * (f1 * Ps[0].conjugate() + f2 * Ps[1].conjugate())
    return (-pairing + fast) / pairing


def coefficient_b(
    sys: ReactionSystem,
    hopf: HopfPoint,
    adjoint: AdjointEigenSolution,
    psi200: ResolventSolution,
    psi110: ResolventSolution,
) -> NormalFormData:
    """Cubic coefficient and classification of the Hopf bifurcation.

    The numerator I2 is the fast-interval pairing of
    2*R20(P, Psi110) + 2*R20(conj(P), Psi200) + 3*R30(P, P, conj(P))
    against P*: window constants times the unit impurity mass.  The
    denominator is the slow-interval pairing 2*L1 evaluated in closed
    form on |x| >= epsilon, so b = I2 / (2*L1).  Supercritical means
    b_r < 0: with a_r = -1 the periodic orbit then bifurcates onto the
    side mu < mu_hat where the pulse is unstable, and is stable there.

    Raises
    ------
    DegeneratePairingError
        If |L1| < 1e-14 (the pairing cannot normalize b).
    ValueError
        If the resolvent inputs carry the wrong order tags.
    """
    if psi200.order_tag != "Psi200" or psi110.order_tag != "Psi110":
        raise ValueError(
            f"expected (Psi200, Psi110) inputs, got ({psi200.order_tag!r}, {psi110.order_tag!r})"
        )
    p = sys.params
    point = _window_point(sys, _leading_pulse(sys))
    P = hopf.eigen.eigfun.core_values(p)
    Pbar = (P[0].conjugate(), P[1].conjugate())
    Ps = adjoint.eigfun.core_values(p)

    r1 = _bilinear_source(sys, point, P, psi110.core)
    r2 = _bilinear_source(sys, point, Pbar, psi200.core)
    r3 = _trilinear_source(sys, point, P, P, Pbar)
    comp1 = 2.0 * r1[0] + 2.0 * r2[0] + 3.0 * r3[0]
    comp2 = 2.0 * r1[1] + 2.0 * r2[1] + 3.0 * r3[1]
    I2 = comp1 * Ps[0].conjugate() + comp2 * Ps[1].conjugate()

    L1 = pairing_l1(sys, hopf, adjoint)
    if abs(L1) < _PAIRING_TOL:
        raise DegeneratePairingError(
            f"L1 = {L1} is too small to normalize the cubic coefficient"
        )
    b = I2 / (2.0 * L1)
    a = coefficient_a(sys, hopf, adjoint)
    if abs(b.real) < _DEGENERATE_TOL:
        classification = "degenerate"
    elif b.real < 0.0:
        classification = "supercritical"
    else:
        classification = "subcritical"
    return NormalFormData(a=a, b=b, classification=classification, I2=I2, L1=L1)


def predict_breather(
    nf: NormalFormData, hopf: HopfPoint, pulse: PinnedPulse, mu: float
) -> BreathingPrediction:
    """Leading-order breathing orbit at a nearby mu.

    With a_r = -1 the periodic orbit sits where (mu - mu_hat)/b_r > 0,
    with amplitude sqrt(|mu - mu_hat| / |b_r|) and frequency omega_H at
    leading order.  On the other side the result has exists = False and
    zero amplitude (not an error: the orbit simply does not bifurcate
    there).

    Raises
    ------
    ValueError
        If the normal form is degenerate (|b_r| below tolerance): the
        cubic truncation then does not decide the orbit.
    """
    if nf.classification == "degenerate":
        raise ValueError("degenerate normal form: no orbit prediction at cubic order")
    mu_tilde = mu - hopf.mu_hat
    exists = mu_tilde / nf.b_r > 0.0
    amplitude = math.sqrt(abs(mu_tilde / nf.b_r)) if exists else 0.0
    return BreathingPrediction(
        exists=exists,
        amplitude=amplitude,
        frequency=hopf.omega_H,
        mu=mu,
        pulse=pulse,
        eigfun=hopf.eigen.eigfun if exists else None,
    )
