"""Scenario files, the built-in example suite, and end-to-end runs.

A scenario is a single JSON document with the exact fields
{name, n, F, nu, alpha, s_total, c, q0, horizon, step} (F row-major,
receiver-row convention) plus an optional `defaulted` list naming the
parameters that are artifact defaults rather than source-given values, so
reports never present guessed numbers as given ones.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .dynamics import (
    ConvergenceResult,
    Trajectory,
    TransitionEvent,
    detect_convergence,
    detect_transitions,
    simulate,
)
from .longrun import LongRunSolution, RegimePrediction, predict_regime
from .model import (
    EconomyParams,
    QualityState,
    SpilloverMatrix,
    ValidationError,
    validate_model,
)
from .structure import StructureReport, classify
from .svgchart import trajectory_chart

# beyond this log-scale, raw qualities are not representable in float64 and
# the CSV stores normalized directions instead
_RAW_Q_LOG_LIMIT = 700.0

_REQUIRED_FIELDS = ("name", "n", "F", "nu", "alpha", "s_total", "c", "q0", "horizon", "step")


class ScenarioParseError(ValidationError):
    """Scenario file is not valid JSON or not a JSON object."""


class MissingFieldError(ValidationError):
    """Scenario file lacks a required field."""


@dataclass(frozen=True)
class Scenario:
    name: str
    matrix: SpilloverMatrix
    params: EconomyParams
    q0: QualityState
    horizon: float
    step: float
    defaulted: tuple[str, ...] = ()

    def __post_init__(self):
        validate_model(self.matrix, self.params, self.q0)
        if self.horizon <= 0:
            raise ValidationError(f"horizon must be positive, got {self.horizon}")
        if self.step <= 0:
            raise ValidationError(f"step must be positive, got {self.step}")


@dataclass(frozen=True)
class RunReport:
    scenario: str
    structure: StructureReport
    prediction: RegimePrediction
    realized: LongRunSolution | None
    realized_support: frozenset[int]
    transitions: tuple[TransitionEvent, ...]
    convergence: ConvergenceResult
    crosscheck_pass: bool | None
    defaulted: tuple[str, ...]
    outputs: dict[str, str] = field(default_factory=dict)


def load_scenario(path: str | Path) -> Scenario:
    """Parse and validate a scenario document, with file context on every
    failure and a distinct error class per failure kind."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise OSError(f"cannot read scenario file {path}: {e}") from e
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioParseError(
            f"{path}: invalid JSON at line {e.lineno} column {e.colno}: {e.msg}"
        ) from e
    if not isinstance(doc, dict):
        raise ScenarioParseError(f"{path}: scenario document must be a JSON object")
    for name in _REQUIRED_FIELDS:
        if name not in doc:
            raise MissingFieldError(f"{path}: missing required field {name!r}")
    try:
        n = int(doc["n"])
        flat = np.asarray(doc["F"], dtype=float)
        if flat.size != n * n:
            raise ValidationError(
                f"F has {flat.size} entries but n = {n} needs {n * n}"
            )
        matrix = SpilloverMatrix(flat.reshape(n, n))
        params = EconomyParams(
            nu=float(doc["nu"]),
            alpha=float(doc["alpha"]),
            s_total=float(doc["s_total"]),
            c=float(doc["c"]),
        )
        q0 = np.asarray(doc["q0"], dtype=float)
        if q0.size != n:
            raise ValidationError(f"q0 has {q0.size} entries but n = {n}")
        scenario = Scenario(
            name=str(doc["name"]),
            matrix=matrix,
            params=params,
            q0=QualityState(0.0, q0),
            horizon=float(doc["horizon"]),
            step=float(doc["step"]),
            defaulted=tuple(doc.get("defaulted", ())),
        )
    except ValidationError as e:
        raise type(e)(f"{path}: {e}") from e
    except (TypeError, ValueError) as e:
        raise ValidationError(f"{path}: malformed field value: {e}") from e
    return scenario


def scenario_to_dict(s: Scenario) -> dict:
    return {
        "name": s.name,
        "n": s.matrix.n,
        "F": [float(v) for v in s.matrix.entries.ravel()],
        "nu": s.params.nu,
        "alpha": s.params.alpha,
        "s_total": s.params.s_total,
        "c": s.params.c,
        "q0": [float(v) for v in s.q0.q],
        "horizon": s.horizon,
        "step": s.step,
        "defaulted": list(s.defaulted),
    }


def write_scenario(s: Scenario, path: str | Path) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(s), indent=2) + "\n")


def _mk(name, rows, nu, alpha, s_total, q0, horizon, defaulted, c=1.0, step=1e-2):
    return Scenario(
        name=name,
        matrix=SpilloverMatrix(np.array(rows, dtype=float)),
        params=EconomyParams(nu=nu, alpha=alpha, s_total=s_total, c=c),
        q0=QualityState(0.0, np.array(q0, dtype=float)),
        horizon=horizon,
        step=step,
        defaulted=tuple(defaulted),
    )


# parameters the source figures leave unstated and this artifact fills in
_FIG12_DEFAULTS = ("nu", "alpha", "s_total", "q0", "c", "horizon", "step")


def builtin_scenarios() -> list[Scenario]:
    """The example suite: the two spillover structures behind the
    less-than-exponential and exponential growth figures, the staged
    technology-transition scenario, the eventually-nonnegative example,
    and a homogeneous reference case."""
    return [
        _mk(
            "fig12-oneway",
            [[0, 0, 0, 0], [1, 0, 1, 0], [1, 0, 0, 0], [1, 1, 0, 0]],
            nu=0.5, alpha=1.0, s_total=1.0, q0=[1, 1, 1, 1],
            horizon=60.0, defaulted=_FIG12_DEFAULTS,
        ),
        _mk(
            "fig12-circular",
            [[0, 0, 0, 1], [1, 0, 1, 0], [1, 0, 0, 0], [1, 1, 0, 0]],
            nu=0.5, alpha=1.0, s_total=1.0, q0=[1, 1, 1, 1],
            horizon=60.0, defaulted=_FIG12_DEFAULTS,
        ),
        _mk(
            "fig4-transitions",
            [[3 / 4, 0, 0, 1], [1 / 2, 1 / 2, 0, 0], [0, 1 / 3, 0, 1], [0, 0, 3, 0]],
            nu=0.5, alpha=0.0, s_total=1.0, q0=[1, 0.1, 0.1, 0.1],
            horizon=60.0, defaulted=("c", "horizon", "step"),
        ),
        _mk(
            "sec4-eventually-nn",
            [[1, 1, 1, 1], [1, 1, 1, 1], [-1, 1, 1, 1], [1, 0, 1, 1]],
            nu=0.5, alpha=1.0, s_total=1.0, q0=[1, 1, 1, 1],
            horizon=60.0, defaulted=_FIG12_DEFAULTS,
        ),
        _mk(
            "homogeneous-baseline",
            [[1, 1, 1, 1], [1, 1, 1, 1], [1, 1, 1, 1], [1, 1, 1, 1]],
            nu=0.5, alpha=1.0, s_total=1.0, q0=[1, 1, 1, 1],
            horizon=60.0, defaulted=_FIG12_DEFAULTS + ("F",),
        ),
    ]


def builtin_scenario(name: str) -> Scenario:
    for s in builtin_scenarios():
        if s.name == name:
            return s
    raise KeyError(f"no built-in scenario named {name!r}")


def _float_repr(x: float) -> str:
    return repr(float(x))


def trajectory_csv(traj: Trajectory) -> str:
    """CSV text with columns t, q_1..q_n, s_1..s_n, g_1..g_n, g_YL, logsum.

    q columns hold raw qualities z_i * exp(logsum) when representable;
    otherwise they hold the normalized directions z_i and the leading
    comment flag says normalized=true.
    """
    n = traj.n
    normalized = bool(traj.logsum.max() > _RAW_Q_LOG_LIMIT)
    lines = [f"# normalized={'true' if normalized else 'false'}"]
    header = (
        ["t"]
        + [f"q_{i + 1}" for i in range(n)]
        + [f"s_{i + 1}" for i in range(n)]
        + [f"g_{i + 1}" for i in range(n)]
        + ["g_YL", "logsum"]
    )
    lines.append(",".join(header))
    q_cols = traj.z if normalized else traj.z * np.exp(traj.logsum)[:, None]
    for k in range(traj.times.size):
        row = (
            [_float_repr(traj.times[k])]
            + [_float_repr(v) for v in q_cols[k]]
            + [_float_repr(v) for v in traj.shares[k]]
            + [_float_repr(v) for v in traj.tech_growth[k]]
            + [_float_repr(traj.sector_growth[k]), _float_repr(traj.logsum[k])]
        )
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def _report_dict(report: RunReport) -> dict:
    s = report.structure
    p = report.prediction
    return {
        "scenario": report.scenario,
        "defaulted_parameters": list(report.defaulted),
        "structure": {
            "classes": sorted(s.classes),
            "cores": [sorted(c) for c in s.cores],
            "irreducible": s.irreducible,
            "weak_components": [sorted(c) for c in s.weak_components],
            "dominant_eigenvalue": s.dominant_eigenvalue,
            "eventually_nonnegative": {
                "flag": s.eventually_nonnegative[0],
                "witness_power": s.eventually_nonnegative[1],
            },
            "negative_edges": [list(e) for e in s.negative_edges],
            "self_loops": list(s.self_loops),
        },
        "prediction": {
            "regime": p.regime,
            "reason": p.reason,
            "survivors": sorted(p.survivors) if p.survivors is not None else None,
            "initial_condition_dependent": p.initial_condition_dependent,
            "candidates": [
                {
                    "support": sorted(c.support),
                    "growth_rate": c.growth_rate,
                    "shares_inf": [float(v) for v in c.shares_inf],
                    "residual": c.residual,
                }
                for c in p.candidates
            ],
        },
        "simulation": {
            "realized_support": sorted(report.realized_support),
            "terminal_shares": [float(v) for v in report.convergence.shares],
            "terminal_growth_rate": report.convergence.growth_rate,
            "shares_converged": report.convergence.shares_converged,
            "growth_converged": report.convergence.growth_converged,
            "transitions": [
                {
                    "time": e.time,
                    "old_leaders": sorted(e.old_leaders),
                    "new_leaders": sorted(e.new_leaders),
                }
                for e in report.transitions
            ],
        },
        "crosscheck_pass": report.crosscheck_pass,
        "outputs": report.outputs,
    }


def _report_text(report: RunReport) -> str:
    d = _report_dict(report)
    lines = [f"scenario: {d['scenario']}"]
    if d["defaulted_parameters"]:
        lines.append(
            "defaulted parameters (artifact choices, not source-given): "
            + ", ".join(d["defaulted_parameters"])
        )
    st = d["structure"]
    lines += [
        f"classes: {', '.join(st['classes'])}",
        f"cores: {st['cores'] or 'none'}",
        f"irreducible: {st['irreducible']}",
        f"dominant eigenvalue: {st['dominant_eigenvalue']:.9g}",
        f"eventually nonnegative: {st['eventually_nonnegative']}",
    ]
    pr = d["prediction"]
    lines.append(f"predicted regime: {pr['regime']} (reason: {pr['reason']})")
    if pr["survivors"] is not None:
        lines.append(f"predicted survivors: {pr['survivors']}")
    elif pr["candidates"]:
        lines.append(
            "survivors depend on initial conditions; candidates: "
            + "; ".join(
                f"{c['support']} (g={c['growth_rate']:.6g})" for c in pr["candidates"]
            )
        )
    sim = d["simulation"]
    lines += [
        f"realized support: {sim['realized_support']}",
        f"terminal growth rate: {sim['terminal_growth_rate']:.9g}",
        "terminal shares: "
        + ", ".join(f"{v:.6g}" for v in sim["terminal_shares"]),
        f"converged: shares={sim['shares_converged']} growth={sim['growth_converged']}",
    ]
    if sim["transitions"]:
        for e in sim["transitions"]:
            lines.append(
                f"transition at t={e['time']:g}: {e['old_leaders']} -> {e['new_leaders']}"
            )
    else:
        lines.append("transitions: none")
    if d["crosscheck_pass"] is not None:
        lines.append(f"prediction cross-check: {'pass' if d['crosscheck_pass'] else 'FAIL'}")
    return "\n".join(lines) + "\n"


def run(
    scenario: Scenario,
    outdir: str | Path | None = None,
    theta: float = 0.6,
    hold: float = 1.0,
    charts: bool = True,
) -> RunReport:
    """classify -> predict -> simulate -> detect, then export artifacts.

    The realized-vs-predicted cross-check is recorded in the report rather
    than raised, so a surprising simulation still produces full output.
    """
    model = validate_model(scenario.matrix, scenario.params, scenario.q0)
    structure = classify(scenario.matrix)
    prediction = predict_regime(structure, scenario.matrix, scenario.params)
    traj = simulate(model, scenario.horizon, step=scenario.step)
    transitions = tuple(detect_transitions(traj, theta=theta, hold=hold))
    window = min(5.0, scenario.horizon / 4.0)
    convergence = detect_convergence(traj, eps=1e-4, window=window)
    realized_support = frozenset(
        int(i) for i in np.flatnonzero(traj.shares[-1] > 1e-3)
    )

    realized = None
    crosscheck: bool | None = None
    if prediction.candidates:
        for cand in prediction.candidates:
            if cand.support == realized_support:
                realized = cand
                break
        crosscheck = realized is not None

    outputs: dict[str, str] = {}
    if outdir is not None:
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        base = outdir / scenario.name
        csv_path = base.with_suffix(".csv")
        csv_path.write_text(trajectory_csv(traj))
        outputs["trajectory"] = str(csv_path)
        if charts:
            svg_path = base.with_suffix(".svg")
            svg_path.write_text(
                trajectory_chart(traj.times, traj.shares, traj.tech_growth, traj.sector_growth)
            )
            outputs["chart"] = str(svg_path)

    report = RunReport(
        scenario=scenario.name,
        structure=structure,
        prediction=prediction,
        realized=realized,
        realized_support=realized_support,
        transitions=transitions,
        convergence=convergence,
        crosscheck_pass=crosscheck,
        defaulted=scenario.defaulted,
        outputs=outputs,
    )
    if outdir is not None:
        (outdir / f"{scenario.name}.report.txt").write_text(_report_text(report))
        (outdir / f"{scenario.name}.report.json").write_text(
            json.dumps(_report_dict(report), indent=2, sort_keys=True) + "\n"
        )
        outputs["report_text"] = str(outdir / f"{scenario.name}.report.txt")
        outputs["report_json"] = str(outdir / f"{scenario.name}.report.json")
    return report


def run_with_overrides(
    scenario: Scenario,
    horizon: float | None = None,
    step: float | None = None,
) -> Scenario:
    """Copy of a scenario with horizon/step replaced (CLI flag support)."""
    changes = {}
    if horizon is not None:
        changes["horizon"] = horizon
    if step is not None:
        changes["step"] = step
    return replace(scenario, **changes) if changes else scenario
