"""Deterministic report serialization for the command line front end.

A report is a plain tree of dicts, lists, and scalars rendered to JSON
with a fixed field order (dict insertion order, fixed by the builders
here) and every float printed with 17 significant digits, so identical
inputs produce byte-identical output.  Complex values render as
{"re", "im"} objects and non-finite floats as null.  Array data
(profiles, time series) goes to CSV files with the same float
formatting, never into the JSON report.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .existence import PinnedPulse
from .hopf import AssumptionAudit, HopfPoint
from .normal_form import BreathingPrediction, NormalFormData
from .simulate import SimDiagnostics
from .spectral import StabilityVerdict


def format_float(x: float) -> str:
    """17-significant-digit token, round-trip safe for binary64."""
    if not np.isfinite(x):
        return "null"
    return format(float(x), ".17g")


def _scalar(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format_float(v)
    raise TypeError(f"cannot serialize {type(v).__name__} into a report")


def render_json(obj, indent: int = 0) -> str:
    """Render a report tree to deterministic, human-diffable JSON."""
    pad = "  " * indent
    child = "  " * (indent + 1)
    if isinstance(obj, complex):
        obj = {"re": obj.real, "im": obj.imag}
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        parts = [
            f"{child}{json.dumps(str(k))}: {render_json(v, indent + 1)}"
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        parts = [f"{child}{render_json(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(parts) + "\n" + pad + "]"
    return _scalar(obj)


@dataclass(frozen=True)
class ComparisonRow:
    """One published-value reproduction check.

    gating rows decide the process exit code; the printed-sign
    discrepancy row for the linear unfolding coefficient is reported
    but never gates (the implemented formula is the artifact's value).
    tolerance_kind is "absolute", "relative", or "match" (string
    comparison of outcome labels).
    """

    quantity: str
    paper_value: object
    computed_value: object
    absolute_error: float | None
    relative_error: float | None
    tolerance: float | None
    tolerance_kind: str
    within_tolerance: bool
    gating: bool = True
    note: str | None = None

    def to_dict(self) -> dict:
        return {
            "quantity": self.quantity,
            "paper_value": self.paper_value,
            "computed_value": self.computed_value,
            "absolute_error": self.absolute_error,
            "relative_error": self.relative_error,
            "tolerance": self.tolerance,
            "tolerance_kind": self.tolerance_kind,
            "within_tolerance": self.within_tolerance,
            "gating": self.gating,
            "note": self.note,
        }


def numeric_row(
    quantity: str,
    paper_value: float,
    computed_value: float,
    tolerance: float,
    kind: str,
    gating: bool = True,
    note: str | None = None,
) -> ComparisonRow:
    """Row comparing two real numbers under an absolute or relative bar."""
    abs_err = abs(computed_value - paper_value)
    rel_err = abs_err / max(abs(paper_value), 1e-300)
    within = (abs_err if kind == "absolute" else rel_err) <= tolerance
    return ComparisonRow(
        quantity=quantity,
        paper_value=paper_value,
        computed_value=computed_value,
        absolute_error=abs_err,
        relative_error=rel_err,
        tolerance=tolerance,
        tolerance_kind=kind,
        within_tolerance=within,
        gating=gating,
        note=note,
    )


def match_row(
    quantity: str,
    paper_value: str,
    computed_value: str,
    accepted: tuple[str, ...],
    gating: bool = True,
    note: str | None = None,
) -> ComparisonRow:
    """Row comparing an outcome label against the accepted set."""
    return ComparisonRow(
        quantity=quantity,
        paper_value=paper_value,
        computed_value=computed_value,
        absolute_error=None,
        relative_error=None,
        tolerance=None,
        tolerance_kind="match",
        within_tolerance=computed_value in accepted,
        gating=gating,
        note=note,
    )


@dataclass(frozen=True)
class RunReport:
    """Everything one CLI command produced, in a fixed serialization order."""

    system_echo: dict
    tolerances: dict
    pulses: list = field(default_factory=list)
    eigenvalues: list = field(default_factory=list)
    stability: dict | None = None
    hopf: dict | None = None
    audit: dict | None = None
    normal_form: dict | None = None
    simulation: dict | None = None
    paper_comparison: list | None = None
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "system_echo": self.system_echo,
            "tolerances": self.tolerances,
            "pulses": self.pulses,
            "eigenvalues": self.eigenvalues,
            "stability": self.stability,
            "hopf": self.hopf,
            "audit": self.audit,
            "normal_form": self.normal_form,
            "simulation": self.simulation,
            "paper_comparison": None
            if self.paper_comparison is None
            else [row.to_dict() for row in self.paper_comparison],
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return render_json(self.to_dict()) + "\n"

    @property
    def reproduction_failed(self) -> bool:
        """True when any gating comparison row missed its tolerance."""
        rows = self.paper_comparison or []
        return any(row.gating and not row.within_tolerance for row in rows)


# ---------------------------------------------------------------------------
# serializers for the domain objects


def serialize_pulse(pulse: PinnedPulse) -> dict:
    return {
        "C1": pulse.C1,
        "C2": pulse.C2,
        "mu": pulse.mu,
        "residual": pulse.residual,
        "degenerate": pulse.degenerate,
    }


def serialize_eigen_row(family: str, lam: complex, det_mag: float, C3: complex, C4: complex) -> dict:
    return {
        "family": family,
        "lambda": {"re": lam.real, "im": lam.imag},
        "det_mag": det_mag,
        "C3": {"re": C3.real, "im": C3.imag},
        "C4": {"re": C4.real, "im": C4.imag},
    }


def serialize_stability(verdict: StabilityVerdict) -> dict:
    lam = verdict.leading_eigenvalue
    return {
        "stable": verdict.stable,
        "leading_eigenvalue": None if lam is None else {"re": lam.real, "im": lam.imag},
        "essential_spectrum_edge": verdict.essential_spectrum_edge,
    }


def serialize_hopf(point: HopfPoint) -> dict:
    return {
        "mu_hat": point.mu_hat,
        "omega_H": point.omega_H,
        "n_r": point.n_r,
        "n_i": point.n_i,
        "transversality": point.transversality,
        "eigenvalue": {"re": point.eigen.lam.real, "im": point.eigen.lam.imag},
    }


def serialize_audit(audit: AssumptionAudit) -> dict:
    return {
        "family": audit.family,
        "all_satisfied": audit.all_satisfied,
        "entries": [
            {"name": e.name, "satisfied": e.satisfied, "value": e.value}
            for e in audit.entries
        ],
    }


def serialize_normal_form(
    nf: NormalFormData,
    hopf: HopfPoint,
    prediction: BreathingPrediction | None = None,
) -> dict:
    return {
        "mu_hat": hopf.mu_hat,
        "omega_H": hopf.omega_H,
        "a": {"re": nf.a.real, "im": nf.a.imag},
        "b": {"re": nf.b.real, "im": nf.b.imag},
        "classification": nf.classification,
        "I2": {"re": nf.I2.real, "im": nf.I2.imag},
        "L1": {"re": nf.L1.real, "im": nf.L1.imag},
        "predicted_amplitude": None
        if prediction is None
        else {
            "mu": prediction.mu,
            "exists": prediction.exists,
            "amplitude": prediction.amplitude,
            "frequency": prediction.frequency,
        },
    }


def serialize_simulation(diag: SimDiagnostics) -> dict:
    max_norm = max(
        float(np.abs(diag.u1_final).max()), float(np.abs(diag.u2_final).max())
    )
    return {
        "outcome": diag.outcome,
        "estimated_period": diag.estimated_period,
        "max_norm": max_norm,
        "final_time": diag.final_time,
        "kick_scale": diag.kick_scale,
    }


# ---------------------------------------------------------------------------
# CSV writers (array data only; same 17-digit float formatting)


def _csv_value(v) -> str:
    if isinstance(v, str):
        return v
    token = format_float(float(v))
    return "nan" if token == "null" else token


def write_csv(path, header: str, rows) -> None:
    """Write rows of numbers (or strings) under a comma-separated header."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_csv_value(v) for v in row) + "\n")


def write_profile_csv(path, profile_rows: np.ndarray) -> None:
    """Snapshot columns x, u1, u2 (pulse profiles and final states)."""
    write_csv(path, "x,u1,u2", profile_rows)


def write_series_csv(path, diag: SimDiagnostics) -> None:
    """Center time series with the swing envelope aligned by interpolation.

    The envelope exists only between detected extrema; outside that
    range (and for runs with fewer than two extrema) the column is nan.
    """
    series = diag.center_series
    env = diag.amplitude_envelope
    t = series[:, 0]
    if env.shape[0] >= 2:
        envelope = np.interp(t, env[:, 0], env[:, 1])
        envelope[t < env[0, 0]] = np.nan
        envelope[t > env[-1, 0]] = np.nan
    elif env.shape[0] == 1:
        envelope = np.full(t.size, np.nan)
        envelope[np.argmin(np.abs(t - env[0, 0]))] = env[0, 1]
    else:
        envelope = np.full(t.size, np.nan)
    rows = np.column_stack([series, envelope])
    write_csv(path, "t,u1_center,u2_center,envelope", rows)


def write_eigen_csv(path, rows: list[dict]) -> None:
    """Eigenvalue report rows flattened to scalar columns."""
    flat = [
        (
            r["family"],
            r["lambda"]["re"],
            r["lambda"]["im"],
            r["det_mag"],
            r["C3"]["re"],
            r["C3"]["im"],
            r["C4"]["re"],
            r["C4"]["im"],
        )
        for r in rows
    ]
    write_csv(path, "family,re_lambda,im_lambda,det_mag,C3_re,C3_im,C4_re,C4_im", flat)
