"""Spectral stability of pinned pulses.

Linearizing about a pulse and gluing the eigenfunction tails across the
impurity window turns the point spectrum into the zero set of a 2x2
determinant in the shifted variable sigma = mu + lambda.  For the
recognized reaction families the determinant collapses further to a
cubic in t = sqrt(mu + lambda), solved in closed form; a generic
argument-principle search over complex rectangles covers everything
else and cross-checks the reductions.

The essential spectrum is the half-line (-inf, -mu], which never
destabilizes; only the gluing determinant's zeros matter.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .existence import PinnedPulse
from .model import (
    RESONANT_TOL,
    CubicForm,
    PiecewiseExpSolution,
    ReactionSystem,
    coupling_jump,
)

FAMILIES = (
    "linear",
    "G15-G22",
    "G15-G23",
    "G13-G24",
    "G13-G25",
    "G13-G26",
    "example-3.5",
)


class EssentialSpectrumError(ValueError):
    """lambda lies on the essential spectrum / branch cut (-inf, -mu]."""


class UnsupportedFamilyError(ValueError):
    """Reaction polynomials match none of the recognized cubic families."""


class SearchFailureError(RuntimeError):
    """Winding count and located roots disagree; refine the rectangle."""


@dataclass(frozen=True)
class EigenSolution:
    """An eigenvalue with its glued eigenfunction constants.

    Constants are normalized so max(|C3|, |C4|) = 1 with the larger one
    real and positive (C3 wins ties).
    """

    lam: complex
    C3: complex
    C4: complex
    eigfun: PiecewiseExpSolution


@dataclass(frozen=True)
class CubicReduction:
    """Cubic in t = sqrt(mu + lambda) for a recognized family.

    lambda_roots are t^2 - mu for exactly the roots with Re t > 0; roots
    with Re t <= 0 violate the decay requirement and are discarded.
    """

    family: str
    cubic: CubicForm
    t_roots: tuple[complex, complex, complex]
    lambda_roots: tuple[complex, ...]


@dataclass(frozen=True)
class StabilityVerdict:
    stable: bool
    leading_eigenvalue: complex | None
    essential_spectrum_edge: float


def _is_resonant(D: float) -> bool:
    return abs(D - 1.0) < RESONANT_TOL


def _derivatives_at_core(sys: ReactionSystem, pulse: PinnedPulse) -> tuple[float, float, float, float]:
    """(g11, g12, g21, g22): dGi/dUj at the pulse window values."""
    c1, gamma = pulse.core_values(sys)
    g11 = sys.G1.diff(1, 0).eval(c1, gamma)
    g12 = sys.G1.diff(0, 1).eval(c1, gamma)
    g21 = sys.G2.diff(1, 0).eval(c1, gamma)
    g22 = sys.G2.diff(0, 1).eval(c1, gamma)
    return g11, g12, g21, g22


def _check_off_cut(mu: float, lam: complex) -> None:
    lam = complex(lam)
    if lam.imag == 0.0 and lam.real <= -mu:
        raise EssentialSpectrumError(
            f"lambda={lam} lies on the essential spectrum (-inf, {-mu}]"
        )


def _eigen_matrix(sys: ReactionSystem, pulse: PinnedPulse, lam: complex) -> np.ndarray:
    """Gluing matrix in the variables (C3, Z), Z the coupled window value.

    Z = C4 + b*C3/((D-1)*sigma) for D != 1 and Z = C4 - b*C3/(4*sigma)
    at D = 1; the substitution is unimodular, so the determinant equals
    that of the system in (C3, C4) while staying finite through D -> 1.
    """
    p = sys.params
    _check_off_cut(p.mu, lam)
    sigma = p.mu + complex(lam)
    s = cmath.sqrt(sigma)
    s_D = s / math.sqrt(p.D)
    g11, g12, g21, g22 = _derivatives_at_core(sys, pulse)
    jump = coupling_jump(p.b_coupling, sigma, p.D)
    return np.array(
        [
            [2.0 * s - p.alpha * g11, -p.alpha * g12],
            [jump - (p.beta / p.D) * g21, 2.0 * s_D - (p.beta / p.D) * g22],
        ],
        dtype=complex,
    )


def _eigen_matrix_deriv(sys: ReactionSystem, pulse: PinnedPulse, lam: complex) -> np.ndarray:
    """d/dlambda of the gluing matrix (entries analytic off the cut)."""
    p = sys.params
    sigma = p.mu + complex(lam)
    s = cmath.sqrt(sigma)
    jump = coupling_jump(p.b_coupling, sigma, p.D)
    return np.array(
        [
            [1.0 / s, 0.0],
            [-jump / (2.0 * sigma), 1.0 / (math.sqrt(p.D) * s)],
        ],
        dtype=complex,
    )


def eigen_determinant(sys: ReactionSystem, pulse: PinnedPulse, lam: complex) -> complex:
    """Determinant of the eigenfunction gluing system at lambda.

    Zero (to leading order in epsilon) exactly when lambda is an
    eigenvalue.  Raises EssentialSpectrumError on (-inf, -mu].
    """
    m = _eigen_matrix(sys, pulse, lam)
    return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]


def _det_and_deriv(sys: ReactionSystem, pulse: PinnedPulse, lam: complex) -> tuple[complex, complex]:
    m = _eigen_matrix(sys, pulse, lam)
    dm = _eigen_matrix_deriv(sys, pulse, lam)
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    ddet = (
        dm[0, 0] * m[1, 1]
        + m[0, 0] * dm[1, 1]
        - dm[0, 1] * m[1, 0]
        - m[0, 1] * dm[1, 0]
    )
    return det, ddet


# ---------------------------------------------------------------------------
# cubic reductions


def reduce_to_cubic(sys: ReactionSystem, pulse: PinnedPulse) -> CubicReduction:
    """Collapse the gluing determinant to its family cubic in t.

    The family is recognized from the nonzero monomials of G1 and G2
    (constant terms are allowed everywhere; they shift the pulse but not
    the linearization).  Unrecognized shapes raise
    UnsupportedFamilyError; the generic determinant path still applies
    to them.
    """
    p = sys.params
    c1, gamma = pulse.core_values(sys)
    rD = math.sqrt(p.D)
    e1 = {pq for pq in sys.G1.nonzero_exponents() if pq != (0, 0)}
    e2 = {pq for pq in sys.G2.nonzero_exponents() if pq != (0, 0)}

    linear_part_1 = e1 <= {(1, 0), (0, 1)}
    linear_part_2 = e2 <= {(1, 0), (0, 1)}

    if linear_part_1 and linear_part_2:
        family = "linear"
    elif e1 <= {(0, 1), (3, 0)} and (3, 0) in e1 and e2 <= {(1, 0)}:
        # linear G1 in U2 plus a cubic self-term; its leading-order
        # linearization about the zero-cubic branch is the linear family
        family = "example-3.5"
    elif e1 <= {(0, 2)} and (0, 2) in e1 and e2 == {(1, 0)}:
        family = "G15-G22"
    elif e1 <= {(0, 2)} and (0, 2) in e1 and e2 == {(0, 1)}:
        family = "G15-G23"
    elif e1 <= {(0, 1)} and (0, 1) in e1 and e2 == {(2, 0)}:
        family = "G13-G24"
    elif e1 <= {(0, 1)} and (0, 1) in e1 and e2 == {(0, 2)}:
        family = "G13-G25"
    elif e1 <= {(0, 1)} and (0, 1) in e1 and e2 == {(1, 1)}:
        family = "G13-G26"
    else:
        raise UnsupportedFamilyError(
            f"no cubic reduction for G1 monomials {sorted(e1)} and G2 monomials {sorted(e2)}"
        )

    a, b = p.alpha, p.beta
    bc = p.b_coupling
    if family in ("linear", "example-3.5"):
        G12 = sys.G1.coeff(1, 0)
        G13 = sys.G1.coeff(0, 1)
        G22 = sys.G2.coeff(1, 0)
        G23 = sys.G2.coeff(0, 1)
        cubic = CubicForm(
            leading=2.0,
            A=-(a * G12 + b * G23 / rD),
            B=(a * b / (2.0 * rD)) * (G12 * G23 - G13 * G22),
            E=bc * a * G13 / (rD + 1.0),
        )
    elif family == "G15-G22":
        G15 = sys.G1.coeff(0, 2)
        G22 = sys.G2.coeff(1, 0)
        cubic = CubicForm(
            leading=1.0,
            A=0.0,
            B=-a * b * G15 * G22 * gamma / (2.0 * rD),
            E=a * bc * G15 * gamma / (1.0 + rD),
        )
    elif family == "G15-G23":
        G15 = sys.G1.coeff(0, 2)
        G23 = sys.G2.coeff(0, 1)
        cubic = CubicForm(
            leading=2.0 * rD,
            A=-b * G23,
            B=0.0,
            E=2.0 * rD * a * bc * G15 * gamma / (1.0 + rD),
        )
    elif family == "G13-G24":
        G13 = sys.G1.coeff(0, 1)
        G24 = sys.G2.coeff(2, 0)
        cubic = CubicForm(
            leading=1.0,
            A=0.0,
            B=-a * b * G13 * G24 * c1 / (2.0 * rD),
            E=a * bc * G13 / (2.0 * (1.0 + rD)),
        )
    elif family == "G13-G25":
        G13 = sys.G1.coeff(0, 1)
        G25 = sys.G2.coeff(0, 2)
        cubic = CubicForm(
            leading=1.0,
            A=-b * G25 * gamma / rD,
            B=0.0,
            E=a * bc * G13 / (2.0 * (1.0 + rD)),
        )
    else:  # G13-G26
        G13 = sys.G1.coeff(0, 1)
        G26 = sys.G2.coeff(1, 1)
        cubic = CubicForm(
            leading=2.0,
            A=-b * G26 * c1 / rD,
            B=-a * b * G13 * G26 * gamma / (2.0 * rD),
            E=a * bc * G13 / (1.0 + rD),
        )

    t_roots = shengjin_roots(cubic)
    lambda_roots = tuple(t * t - p.mu for t in t_roots if t.real > 0.0)
    return CubicReduction(family=family, cubic=cubic, t_roots=t_roots, lambda_roots=lambda_roots)


# ---------------------------------------------------------------------------
# closed-form cubic roots


def _cbrt(x: float) -> float:
    """Real cube root with sign."""
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


def _relative_residual(c: CubicForm, x: complex) -> float:
    scale = max(
        abs(c.leading * x**3), abs(c.A * x**2), abs(c.B * x), abs(c.E), 1e-300
    )
    return abs(c.eval(x)) / scale


def shengjin_roots(c: CubicForm) -> tuple[complex, complex, complex]:
    """All three roots of a real cubic in closed form.

    Uses the discriminant split of the Shengjin formulas (one real plus
    a conjugate pair; double/triple roots; three distinct reals via the
    trigonometric form).  Complex conjugate pairs are returned exactly
    conjugate.  Each root is polished by two Newton steps; if the
    relative residual still exceeds 1e-12 the companion-matrix roots are
    returned instead (near-degenerate discriminants).
    """
    a, b, b2, d = c.leading, c.A, c.B, c.E
    A = b * b - 3.0 * a * b2
    B = b * b2 - 9.0 * a * d
    C = b2 * b2 - 3.0 * b * d
    delta = B * B - 4.0 * A * C

    roots: list[complex]
    if A == 0.0 and B == 0.0:
        roots = [complex(-b / (3.0 * a))] * 3
    elif delta > 0.0:
        y1 = A * b + 1.5 * a * (-B + math.sqrt(delta))
        y2 = A * b + 1.5 * a * (-B - math.sqrt(delta))
        u, v = _cbrt(y1), _cbrt(y2)
        x1 = (-b - (u + v)) / (3.0 * a)
        re = (-2.0 * b + u + v) / (6.0 * a)
        im = math.sqrt(3.0) * (u - v) / (6.0 * a)
        roots = [complex(x1), complex(re, im), complex(re, -im)]
    elif delta == 0.0:
        k = B / A
        roots = [complex(-b / a + k), complex(-k / 2.0), complex(-k / 2.0)]
    else:
        # three distinct real roots
        sqrtA = math.sqrt(A)
        T = (2.0 * A * b - 3.0 * a * B) / (2.0 * sqrtA * A)
        T = min(1.0, max(-1.0, T))
        theta = math.acos(T)
        x1 = (-b - 2.0 * sqrtA * math.cos(theta / 3.0)) / (3.0 * a)
        x2 = (
            -b + sqrtA * (math.cos(theta / 3.0) + math.sqrt(3.0) * math.sin(theta / 3.0))
        ) / (3.0 * a)
        x3 = (
            -b + sqrtA * (math.cos(theta / 3.0) - math.sqrt(3.0) * math.sin(theta / 3.0))
        ) / (3.0 * a)
        roots = [complex(x1), complex(x2), complex(x3)]

    polished = []
    for x in roots:
        for _ in range(2):
            fp = c.deriv(x)
            if abs(fp) < 1e-300:
                break
            x = x - c.eval(x) / fp
        polished.append(x)
    # keep conjugate pairs exactly conjugate after polishing
    if polished[1].imag != 0.0 or polished[2].imag != 0.0:
        z = 0.5 * (polished[1] + polished[2].conjugate())
        polished[1], polished[2] = z, z.conjugate()

    if max(_relative_residual(c, x) for x in polished) > 1e-12:
        comp = np.roots([a, b, b2, d])
        comp = sorted(comp, key=lambda z: (abs(z.imag) > 1e-9, z.imag < 0, z.real))
        polished = [complex(z) for z in comp]
        if len(polished) == 3 and polished[1].imag != 0.0:
            z = 0.5 * (polished[1] + polished[2].conjugate())
            polished[1], polished[2] = z, z.conjugate()
    return polished[0], polished[1], polished[2]


# ---------------------------------------------------------------------------
# argument-principle eigenvalue search


def _boundary_path(rect: tuple[float, float, float, float]) -> list[complex]:
    re0, re1, im0, im1 = rect
    return [
        complex(re0, im0),
        complex(re1, im0),
        complex(re1, im1),
        complex(re0, im1),
        complex(re0, im0),
    ]


def _edge_phase(fv, za: complex, zb: complex, scale: float) -> float:
    """Total phase change of fv along the segment za -> zb.

    Samples are refined until consecutive phase steps are unambiguous
    (< pi/2); fv must accept an array of points.
    """
    pts = za + (zb - za) * np.linspace(0.0, 1.0, 33)
    vals = fv(pts)
    while True:
        if np.any(vals == 0):
            raise SearchFailureError("determinant zero on the search boundary")
        dphi = np.angle(vals[1:] / vals[:-1])
        bad = np.nonzero(np.abs(dphi) > 0.5 * math.pi)[0]
        if bad.size == 0:
            return float(np.sum(dphi))
        if np.any(np.abs(pts[bad + 1] - pts[bad]) < 1e-12 * scale):
            raise SearchFailureError(
                "cannot continue the phase along the boundary; "
                "a zero sits on or next to the rectangle edge"
            )
        mids = 0.5 * (pts[bad] + pts[bad + 1])
        pts = np.insert(pts, bad + 1, mids)
        vals = np.insert(vals, bad + 1, fv(mids))


def _winding_number(fv, rect: tuple[float, float, float, float]) -> int:
    """Zeros (with multiplicity) of analytic fv inside rect, by phase
    continuation along the boundary; fv is vectorized over points."""
    corners = _boundary_path(rect)
    scale = max(abs(rect[1] - rect[0]), abs(rect[3] - rect[2]))
    total = sum(
        _edge_phase(fv, corners[k], corners[k + 1], scale) for k in range(4)
    )
    n = total / (2.0 * math.pi)
    n_int = round(n)
    if abs(n - n_int) > 0.25:
        raise SearchFailureError(f"non-integer winding number {n:.3f}")
    return int(n_int)


def _determinant_on_grid(sys: ReactionSystem, pulse: PinnedPulse):
    """Vectorized gluing determinant with the core derivatives frozen."""
    p = sys.params
    g11, g12, g21, g22 = _derivatives_at_core(sys, pulse)
    rD = math.sqrt(p.D)

    def fv(zs: np.ndarray) -> np.ndarray:
        zs = np.asarray(zs, dtype=complex)
        if np.any((zs.imag == 0.0) & (zs.real <= -p.mu)):
            raise EssentialSpectrumError(
                f"a sample point lies on the essential spectrum (-inf, {-p.mu}]"
            )
        s = np.sqrt(p.mu + zs)
        jump = 2.0 * p.b_coupling / (s * rD * (rD + 1.0))
        m00 = 2.0 * s - p.alpha * g11
        m10 = jump - (p.beta / p.D) * g21
        m11 = 2.0 * s / rD - (p.beta / p.D) * g22
        return m00 * m11 + p.alpha * g12 * m10

    return fv


def _newton_eigenvalue(
    sys: ReactionSystem, pulse: PinnedPulse, lam0: complex
) -> complex | None:
    lam = complex(lam0)
    for _ in range(60):
        try:
            det, ddet = _det_and_deriv(sys, pulse, lam)
        except EssentialSpectrumError:
            return None
        if abs(ddet) < 1e-300:
            return None
        step = det / ddet
        lam = complex(lam - step)
        if abs(step) < 1e-13:
            return lam
    return None


def find_eigenvalues(
    sys: ReactionSystem,
    pulse: PinnedPulse,
    search: tuple[float, float, float, float],
) -> list[EigenSolution]:
    """All gluing-determinant zeros inside a rectangle (re0, re1, im0, im1).

    The rectangle must keep a 1e-6 margin from the essential spectrum
    (-inf, -mu].  Zeros are counted by the argument principle on the
    boundary, localized by bisection of the rectangle, polished by
    Newton, and returned with their normalized eigenfunction constants.
    A mismatch between the winding count and the located roots raises
    SearchFailureError (the caller should refine the rectangle).
    """
    re0, re1, im0, im1 = search
    if not (re0 < re1 and im0 < im1):
        raise ValueError(f"degenerate search rectangle {search}")
    mu = sys.params.mu
    if im0 < 0.0 < im1 and re0 < -mu + 1e-6:
        raise ValueError(
            "search rectangle intersects the essential spectrum "
            f"(-inf, {-mu}]; keep Re >= {-mu + 1e-6} or stay off the real axis"
        )

    f = _determinant_on_grid(sys, pulse)

    roots: list[complex] = []

    def recurse(rect: tuple[float, float, float, float], depth: int) -> None:
        count = _winding_number(f, rect)
        if count == 0:
            return
        r0, r1, i0, i1 = rect
        diag = math.hypot(r1 - r0, i1 - i0)
        if count == 1 or diag < 1e-10:
            center = complex(0.5 * (r0 + r1), 0.5 * (i0 + i1))
            lam = _newton_eigenvalue(sys, pulse, center)
            if lam is None or not (
                r0 - 1e-9 <= lam.real <= r1 + 1e-9 and i0 - 1e-9 <= lam.imag <= i1 + 1e-9
            ):
                raise SearchFailureError(
                    f"Newton failed to localize the zero counted in {rect}"
                )
            if depth > 0:
                # a zero hugging a cut line gets phase-slip counted on both
                # sides; reject so the parent nudges the cut elsewhere
                margin = min(lam.real - r0, r1 - lam.real, lam.imag - i0, i1 - lam.imag)
                if margin < 1e-6:
                    raise SearchFailureError(f"zero {lam} within {margin:.1e} of a cut")
            roots.extend([lam] * count)
            return
        if depth > 60:
            raise SearchFailureError(f"subdivision depth exceeded at {rect}")
        # split the longer edge; nudge the cut if a zero obstructs it
        for frac in (0.5, 0.55, 0.45, 0.6):
            if (r1 - r0) >= (i1 - i0):
                cut = r0 + frac * (r1 - r0)
                sub = [(r0, cut, i0, i1), (cut, r1, i0, i1)]
            else:
                cut = i0 + frac * (i1 - i0)
                sub = [(r0, r1, i0, cut), (r0, r1, cut, i1)]
            try:
                for rect_sub in sub:
                    recurse(rect_sub, depth + 1)
                return
            except SearchFailureError:
                continue
        raise SearchFailureError(f"could not split {rect} without hitting a zero")

    total = _winding_number(f, search)
    if total > 0:
        recurse(search, 0)

    # deduplicate (a zero straddling a cut line may be found twice)
    unique: list[complex] = []
    for lam in roots:
        if abs(lam.imag) < 1e-13:
            lam = complex(lam.real, 0.0)
        if not any(abs(lam - u) < 1e-9 for u in unique):
            unique.append(lam)
    if len(unique) != total:
        # distinct roots must account for the winding count unless some
        # are genuinely multiple; re-count multiplicities around each
        def recount(cands: list[complex]) -> int:
            n = 0
            for lam in cands:
                r = 1e-6 * max(1.0, abs(lam))
                n += _winding_number(
                    f, (lam.real - r, lam.real + r, lam.imag - r, lam.imag + r)
                )
            return n

        if recount(unique) != total:
            # the usual culprit is a conjugate partner lost to a cut-line
            # phase slip; the determinant is real on the real axis, so
            # try the mirror points before giving up
            re0, re1, im0, im1 = search
            for lam in list(unique):
                mirror = lam.conjugate()
                if abs(lam.imag) < 1e-13 or any(abs(mirror - u) < 1e-9 for u in unique):
                    continue
                cand = _newton_eigenvalue(sys, pulse, mirror)
                if (
                    cand is not None
                    and abs(cand - mirror) < 1e-6
                    and re0 <= cand.real <= re1
                    and im0 <= cand.imag <= im1
                ):
                    unique.append(cand)
            if recount(unique) != total:
                raise SearchFailureError(
                    f"winding count {total} but located {unique}; refine the rectangle"
                )

    # conjugate closure: determinant has real coefficients in sigma, so
    # zeros come in conjugate pairs; make the pairing exact
    for i, lam in enumerate(unique):
        if lam.imag <= 0:
            continue
        for j, other in enumerate(unique):
            if abs(other - lam.conjugate()) < 1e-9:
                z = 0.5 * (lam + other.conjugate())
                unique[i], unique[j] = z, z.conjugate()
                break

    return [_build_eigensolution(sys, pulse, lam) for lam in sorted(unique, key=lambda z: (-z.real, z.imag))]


def _build_eigensolution(sys: ReactionSystem, pulse: PinnedPulse, lam: complex) -> EigenSolution:
    p = sys.params
    sigma = p.mu + lam
    m = _eigen_matrix(sys, pulse, lam)
    _u, _s, vh = np.linalg.svd(m)
    c3, z = vh[-1].conjugate()
    resonant = _is_resonant(p.D)
    if resonant:
        c4 = z + p.b_coupling * c3 / (4.0 * sigma)
    else:
        kappa = p.b_coupling / ((p.D - 1.0) * sigma)
        c4 = z - kappa * c3
    # normalize: max(|C3|, |C4|) = 1 with the larger constant real positive
    if abs(c3) >= abs(c4):
        phase = c3 / abs(c3) if c3 != 0 else 1.0
    else:
        phase = c4 / abs(c4)
    scale = phase * max(abs(c3), abs(c4))
    c3, c4, z = c3 / scale, c4 / scale, z / scale
    eigfun = PiecewiseExpSolution(
        lambda_shift=sigma,
        fast_amp=c3,
        slow_amp=c4,
        branch="resonant" if resonant else "general",
        coupling_sign="forward",
        coupled_core=None if resonant else z,
    )
    return EigenSolution(lam=lam, C3=complex(c3), C4=complex(c4), eigfun=eigfun)


def polish_eigenvalue(
    sys: ReactionSystem, pulse: PinnedPulse, guess: complex
) -> complex | None:
    """Newton-refine an eigenvalue guess on the gluing determinant.

    None when the iteration leaves the domain (hits the essential
    spectrum cut) or fails to contract.
    """
    return _newton_eigenvalue(sys, pulse, guess)


def eigensolution_at(
    sys: ReactionSystem, pulse: PinnedPulse, lam: complex
) -> EigenSolution:
    """Eigenfunction constants for a known eigenvalue.

    Raises ValueError if lam does not actually annihilate the gluing
    determinant (relative tolerance 1e-10 against the matrix scale).
    """
    m = _eigen_matrix(sys, pulse, lam)
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    scale = max(abs(m).max() ** 2, 1e-300)
    if abs(det) > 1e-10 * scale:
        raise ValueError(
            f"lambda={lam} is not an eigenvalue: |det|={abs(det):.3e} "
            f"exceeds 1e-10 relative to the matrix scale"
        )
    return _build_eigensolution(sys, pulse, lam)


def classify_stability(sys: ReactionSystem, pulse: PinnedPulse) -> StabilityVerdict:
    """Stability verdict from the standard search window.

    The window Re in [-mu + 1e-6, mu + 10], |Im| <= 10*(1 + mu) covers
    every zero the cubic reductions can produce at moderate parameters;
    search failures propagate to the caller.
    """
    mu = sys.params.mu
    rect = (-mu + 1e-6, mu + 10.0, -10.0 * (1.0 + mu), 10.0 * (1.0 + mu))
    eigs = find_eigenvalues(sys, pulse, rect)
    if not eigs:
        return StabilityVerdict(stable=True, leading_eigenvalue=None, essential_spectrum_edge=-mu)
    leading = max(eigs, key=lambda e: e.lam.real)
    return StabilityVerdict(
        stable=all(e.lam.real < 0.0 for e in eigs),
        leading_eigenvalue=leading.lam,
        essential_spectrum_edge=-mu,
    )
