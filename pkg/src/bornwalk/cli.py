"""
Command line front end.

Each mode writes one table: a ``#`` line echoing the configuration, a header
row, then comma-separated rows with numbers at 15 significant digits.
``--format json`` writes the same table as a JSON object instead.

Column order per mode::

    csp          n,a1,a2,P1,P2
    qsp          n,t,a1,a2,P1,P2
    schrodinger  t,theta,t_over_T,P1,P2
    compare      n,t,theta,P1_qsp,P2_qsp,P1_qm,P2_qm,abs_err
    oracle       n,state,a_plus,a_minus,signal,born,propagated
    ensemble     row,c1,...,cN          (rotation-averaged event matrix)
    coin         phi,P_heads,P_tails

Exit status: 0 success, 2 configuration error, 3 numerical or assertion
failure, 4 oracle budget exceeded.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from .equivalence import coin_probabilities, hamiltonian_from_transition, transition_from_hamiltonian
from .ensemble import mean_over_rotations
from .errors import BornwalkError, EnsembleFalsified, NoEquivalentHamiltonian, OracleBudgetExceeded
from .errors import UnclassifiedDynamicsError
from .paths import DEFAULT_BUDGET, ChannelMatrix, verify_against_propagation
from .process import (
    InitialState,
    TransitionMatrix,
    born_probability,
    classical_probability,
    classify_dynamics,
    propagate_n,
    propagate_step,
    stationary_probability,
)
from .schrodinger import Hamiltonian, period, probabilities

MODES = ("csp", "qsp", "schrodinger", "oracle", "ensemble", "coin", "compare")
FORMATS = ("csv", "json")
PARAM_KEYS = (
    "k11", "k12", "k21", "k22",
    "alpha", "beta", "delta",
    "c1", "c2", "lambda", "hbar",
    "n_max", "t_max", "grid_points",
    "a_plus", "a_minus", "phi",
)
MATRIX_KEYS = ("k11", "k12", "k21", "k22")
HAMILTONIAN_KEYS = ("alpha", "beta", "delta", "hbar")

# keys each mode accepts; required ones are checked inside the mode runner
MODE_KEYS = {
    "csp": {*MATRIX_KEYS, "c1", "c2", "n_max"},
    "qsp": {*MATRIX_KEYS, *HAMILTONIAN_KEYS, "c1", "c2", "lambda", "n_max"},
    "schrodinger": {*HAMILTONIAN_KEYS, "c1", "c2", "t_max", "grid_points"},
    "compare": {*HAMILTONIAN_KEYS, "c1", "c2", "lambda", "n_max"},
    "oracle": {*MATRIX_KEYS, "c1", "c2", "n_max"},
    "ensemble": {"a_plus", "a_minus"},
    "coin": {"phi", "grid_points"},
}

FIG1 = {"alpha": 0.0, "beta": 1.56, "delta": 1.255, "c1": 0.825}
FIGURES = {
    "fig1": ("schrodinger", {**FIG1, "grid_points": 601}),
    "fig3a": ("csp", {"k11": 1, "k12": 1, "k21": 1, "k22": 1, "c1": 1, "c2": 0, "n_max": 10}),
    "fig3b": ("csp", {"k11": 2, "k12": 1, "k21": 1, "k22": 2, "c1": 1, "c2": 0, "n_max": 10}),
    "fig3c": ("csp", {"k11": 1, "k12": 2, "k21": 2, "k22": 1, "c1": 1, "c2": 0, "n_max": 10}),
    "fig3d": ("csp", {"k11": 0, "k12": 1, "k21": 1, "k22": 0, "c1": 1, "c2": 0, "n_max": 10}),
    "fig4a": ("qsp", {**FIG1, "lambda": 1.0, "n_max": 20}),
    "fig4b": ("compare", {**FIG1, "lambda": 1.0, "n_max": 20}),
    "fig7": ("coin", {"grid_points": 721}),
}

EXACT_INT_LIMIT = 2**53
COMPARE_TOL = 1e-9


class ConfigError(BornwalkError, ValueError):
    pass


class NumericalFailure(BornwalkError, ArithmeticError):
    pass


@dataclass
class ExperimentConfig:
    mode: str
    parameters: Dict[str, float] = field(default_factory=dict)
    output_format: str = "csv"
    output_path: Optional[str] = None
    figure: Optional[str] = None

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}; expected one of {', '.join(MODES)}")
        if self.output_format not in FORMATS:
            raise ConfigError(f"unknown format {self.output_format!r}")
        unknown = sorted(set(self.parameters) - set(PARAM_KEYS))
        if unknown:
            raise ConfigError(f"unknown parameter(s): {', '.join(unknown)}")
        extra = sorted(set(self.parameters) - MODE_KEYS[self.mode])
        if extra:
            raise ConfigError(f"parameter(s) not used by mode {self.mode}: {', '.join(extra)}")

    def echo(self) -> str:
        parts = [f"figure={self.figure}"] if self.figure else []
        parts.append(f"mode={self.mode}")
        parts += [f"{k}={_fmt(v)}" for k, v in sorted(self.parameters.items())]
        return "bornwalk " + " ".join(parts)


@dataclass
class Table:
    columns: List[str]
    rows: List[list]
    extra: Dict[str, object] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)


def _fmt(x) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if x.is_integer() and abs(x) < 1e15:
            return str(int(x))
        return format(x, ".15g")
    return str(x)


def _jsonable(x):
    if isinstance(x, float):
        return float(format(x, ".15g"))
    return x


# ---------------------------------------------------------------------------
# parameter helpers

def _get(p: Dict[str, float], key: str, default=None, *, required=False):
    if key in p:
        return p[key]
    if required:
        raise ConfigError(f"missing required parameter {key}")
    return default


def _int(p: Dict[str, float], key: str, default=None, *, minimum=0, required=False) -> int:
    v = _get(p, key, default, required=required)
    if float(v) != int(v):
        raise ConfigError(f"{key} must be an integer, got {v}")
    v = int(v)
    if v < minimum:
        raise ConfigError(f"{key} must be >= {minimum}, got {v}")
    return v


def _matrix(p: Dict[str, float]) -> TransitionMatrix:
    missing = [k for k in MATRIX_KEYS if k not in p]
    if missing:
        raise ConfigError(f"missing required parameter(s) {', '.join(missing)}")
    try:
        return TransitionMatrix(*(p[k] for k in MATRIX_KEYS))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _hamiltonian(p: Dict[str, float]) -> Hamiltonian:
    try:
        return Hamiltonian(
            _get(p, "alpha", 0.0),
            _get(p, "beta", required=True),
            _get(p, "delta", required=True),
            _get(p, "hbar", 1.0),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _quantum_state(p: Dict[str, float]) -> InitialState:
    c1 = _get(p, "c1", required=True)
    if "c2" in p:
        c2 = p["c2"]
    else:
        if abs(c1) > 1:
            raise ConfigError("c2 omitted and |c1| > 1; cannot default c2 = sqrt(1 - c1**2)")
        c2 = math.sqrt(1.0 - c1 * c1)
    try:
        return InitialState(c1, c2)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _lam(p: Dict[str, float]) -> float:
    lam = _get(p, "lambda", 1.0)
    if lam == 0:
        raise ConfigError("lambda must be nonzero")
    return lam


def _overflow_warning(a1, a2, n) -> Optional[str]:
    if max(abs(a1), abs(a2)) > EXACT_INT_LIMIT:
        return f"warning: |a| exceeds 2**53 at n={n}; integer path-count semantics are lost"
    return None


# ---------------------------------------------------------------------------
# modes

def _run_csp(p: Dict[str, float]) -> Table:
    K = _matrix(p)
    if not K.is_nonnegative():
        raise ConfigError("csp mode needs nonnegative rates k11..k22")
    c1, c2 = _get(p, "c1", required=True), _get(p, "c2", required=True)
    if c1 < 0 or c2 < 0 or c1 + c2 <= 0:
        raise ConfigError("csp mode needs c1, c2 >= 0 with c1 + c2 > 0")
    n_max = _int(p, "n_max", 20)

    table = Table(["n", "a1", "a2", "P1", "P2"], [])
    a = propagate_n(K, InitialState(c1, c2), 0)
    warned = False
    for n in range(n_max + 1):
        if n:
            a = propagate_step(K, a)
        if not (math.isfinite(a.a1) and math.isfinite(a.a2)):
            raise NumericalFailure(f"signal overflowed at n={n}")
        P1, P2 = classical_probability(a)
        table.rows.append([n, a.a1, a.a2, P1, P2])
        w = None if warned else _overflow_warning(a.a1, a.a2, n)
        if w:
            table.warnings.append(w)
            warned = True
    try:
        table.extra["dynamics"] = classify_dynamics(K).value
    except UnclassifiedDynamicsError:
        table.extra["dynamics"] = None
    try:
        table.extra["stationary"] = stationary_probability(K)
    except (ValueError, ArithmeticError):
        table.extra["stationary"] = None
    return table


def _run_qsp(p: Dict[str, float]) -> Table:
    has_matrix = any(k in p for k in MATRIX_KEYS)
    has_h = any(k in p for k in HAMILTONIAN_KEYS)
    if has_matrix and has_h:
        raise ConfigError("give either k11..k22 or alpha/beta/delta, not both")
    lam = _lam(p)
    tau = 1.0
    if has_matrix:
        K = _matrix(p)
        try:
            H = hamiltonian_from_transition(K, lam)
            tau = 0.5 * period(H)
        except NoEquivalentHamiltonian:
            pass
    else:
        H = _hamiltonian(p)
        K = transition_from_hamiltonian(H, lam)
        tau = 0.5 * period(H)
    c = _quantum_state(p)
    n_max = _int(p, "n_max", 20)

    table = Table(["n", "t", "a1", "a2", "P1", "P2"], [], {"tau": tau})
    a = propagate_n(K, c, 0)
    for n in range(n_max + 1):
        if n:
            a = propagate_step(K, a)
        if not (math.isfinite(a.a1) and math.isfinite(a.a2)):
            raise NumericalFailure(f"signal overflowed at n={n}")
        try:
            P1, P2 = born_probability(a)
        except ValueError as exc:
            raise NumericalFailure(f"zero signal at n={n}") from exc
        table.rows.append([n, n * tau, a.a1, a.a2, P1, P2])
        w = _overflow_warning(a.a1, a.a2, n)
        if w and not table.warnings:
            table.warnings.append(w)
    return table


def _run_schrodinger(p: Dict[str, float]) -> Table:
    H = _hamiltonian(p)
    c = _quantum_state(p)
    T = period(H)
    t_max = _get(p, "t_max", 3 * T)
    points = _int(p, "grid_points", 301, minimum=2)
    if not t_max > 0:
        raise ConfigError("t_max must be > 0")
    table = Table(["t", "theta", "t_over_T", "P1", "P2"], [], {"period": T})
    for i in range(points):
        t = t_max * i / (points - 1)
        P1, P2 = probabilities(H, c, t)
        table.rows.append([t, H.theta(t), t / T, P1, P2])
    return table


def _run_compare(p: Dict[str, float]) -> Table:
    H = _hamiltonian(p)
    lam = _lam(p)
    c = _quantum_state(p)
    n_max = _int(p, "n_max", 40)
    K = transition_from_hamiltonian(H, lam)
    tau = 0.5 * period(H)
    table = Table(["n", "t", "theta", "P1_qsp", "P2_qsp", "P1_qm", "P2_qm", "abs_err"], [])
    a = propagate_n(K, c, 0)
    worst = 0.0
    for n in range(n_max + 1):
        if n:
            a = propagate_step(K, a)
        q1, q2 = born_probability(a)
        t = n * tau
        m1, m2 = probabilities(H, c, t)
        err = max(abs(q1 - m1), abs(q2 - m2))
        worst = max(worst, err)
        table.rows.append([n, t, H.theta(t), q1, q2, m1, m2, err])
    table.extra.update(tau=tau, max_abs_err=worst, tolerance=COMPARE_TOL)
    if not worst <= COMPARE_TOL:
        raise NumericalFailure(
            f"QSP deviates from Schrodinger probabilities by {worst:.3g} > {COMPARE_TOL:g}"
        )
    return table


def _run_oracle(p: Dict[str, float]) -> Table:
    K = _matrix(p)
    for k in K.entries():
        if float(k) != int(k):
            raise ConfigError("oracle mode needs integer rates k11..k22")
    c1 = _int(p, "c1", required=True)
    c2 = _int(p, "c2", required=True)
    if c1 == 0 and c2 == 0:
        raise ConfigError("c1 and c2 cannot both be zero")
    n_max = _int(p, "n_max", 8)
    C = ChannelMatrix.from_signed(*(int(k) for k in K.entries()))
    report = verify_against_propagation(C, (c1, c2), n_max, budget=DEFAULT_BUDGET)
    cols = ["n", "state", "a_plus", "a_minus", "signal", "born", "propagated"]
    table = Table(cols, [[r[k] for k in cols] for r in report.rows], {"passed": report.passed})
    if not report.passed:
        raise NumericalFailure(f"path enumeration disagrees with propagation: {report.counterexample}")
    return table


def _run_ensemble(p: Dict[str, float]) -> Table:
    a_plus = _int(p, "a_plus", required=True)
    a_minus = _int(p, "a_minus", required=True)
    if a_plus + a_minus < 1:
        raise ConfigError("a_plus + a_minus must be >= 1")
    ens = mean_over_rotations(a_plus, a_minus)
    cols = ["row"] + [f"c{j + 1}" for j in range(ens.size)]
    rows = [[i + 1, *(int(v) for v in ens.mean_entries[i])] for i in range(ens.size)]
    return Table(cols, rows, {"born_count": ens.born_count})


def _run_coin(p: Dict[str, float]) -> Table:
    table = Table(["phi", "P_heads", "P_tails"], [])
    if "phi" in p:
        if "grid_points" in p:
            raise ConfigError("give either phi or grid_points, not both")
        phis = [p["phi"]]
    else:
        points = _int(p, "grid_points", 721, minimum=2)
        phis = [4 * math.pi * i / (points - 1) for i in range(points)]
    for phi in phis:
        table.rows.append([phi, *coin_probabilities(phi)])
    return table


RUNNERS = {
    "csp": _run_csp,
    "qsp": _run_qsp,
    "schrodinger": _run_schrodinger,
    "compare": _run_compare,
    "oracle": _run_oracle,
    "ensemble": _run_ensemble,
    "coin": _run_coin,
}


def render(config: ExperimentConfig, table: Table) -> str:
    if config.output_format == "json":
        doc = {
            "config": {
                "mode": config.mode,
                "figure": config.figure,
                "parameters": {k: _jsonable(v) for k, v in config.parameters.items()},
            },
            "columns": table.columns,
            "rows": [[_jsonable(v) for v in row] for row in table.rows],
            "extra": {
                k: ([_jsonable(x) for x in v] if isinstance(v, (tuple, list)) else _jsonable(v))
                for k, v in table.extra.items()
            },
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    buf.write(f"# {config.echo()}\n")
    buf.write(",".join(table.columns) + "\n")
    for row in table.rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def run(config: ExperimentConfig) -> Table:
    """Validate ``config`` and compute the mode's table."""
    config.validate()
    return RUNNERS[config.mode](dict(config.parameters))


def emit_figure_data(figure: str, output_format: str = "csv", output_path: Optional[str] = None) -> ExperimentConfig:
    """Configuration that reproduces the data behind one of the figure presets."""
    if figure not in FIGURES:
        raise ConfigError(f"unknown figure {figure!r}; expected one of {', '.join(FIGURES)}")
    mode, params = FIGURES[figure]
    params = dict(params)
    if figure == "fig1":
        H = Hamiltonian(params["alpha"], params["beta"], params["delta"])
        params["t_max"] = 3 * period(H)
    return ExperimentConfig(mode, params, output_format, output_path, figure)


# ---------------------------------------------------------------------------
# argument parsing

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(
        prog="bornwalk",
        description="Two-state classical and quantum stochastic processes.",
        epilog=(
            "In quantum modes c2 defaults to sqrt(1 - c1**2) when omitted. "
            "Flags override values read from --config."
        ),
    )
    ap.add_argument("--config", help="key=value text file or JSON object")
    ap.add_argument("--mode", choices=MODES)
    ap.add_argument("--figure", choices=sorted(FIGURES))
    ap.add_argument("--format", dest="output_format", choices=FORMATS)
    ap.add_argument("--out", dest="output_path")
    for key in PARAM_KEYS:
        flag = {"grid_points": "--grid"}.get(key, "--" + key.replace("_", "-"))
        ap.add_argument(flag, dest=f"p_{key}", type=float, metavar=key.upper())
    return ap


def _coerce(key: str, value) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"parameter {key} must be a number, got {value!r}") from None


def load_config_file(path: str) -> dict:
    text = Path(path).read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc.msg}") from exc
        if not isinstance(raw, dict):
            raise ConfigError(f"{path} must hold a JSON object")
    else:
        raw = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            k, v = (s.strip() for s in line.split("=", 1))
            raw[k] = v
    out = {"parameters": {}}
    params = raw.pop("parameters", {})
    if not isinstance(params, dict):
        raise ConfigError("'parameters' must be an object")
    for k in ("mode", "figure", "output_format", "output_path"):
        if k in raw:
            out[k] = raw.pop(k)
    for alias, k in (("format", "output_format"), ("out", "output_path")):
        if alias in raw:
            out[k] = raw.pop(alias)
    params = {**raw, **params}
    out["parameters"] = {k: _coerce(k, v) for k, v in params.items()}
    return out


def config_from_args(argv: Optional[Sequence[str]] = None) -> ExperimentConfig:
    args = build_parser().parse_args(argv)
    base = load_config_file(args.config) if args.config else {"parameters": {}}
    params = dict(base["parameters"])
    for key in PARAM_KEYS:
        v = getattr(args, f"p_{key}")
        if v is not None:
            params[key] = v
    mode = args.mode or base.get("mode")
    figure = args.figure or base.get("figure")
    fmt = args.output_format or base.get("output_format", "csv")
    out = args.output_path or base.get("output_path")

    if figure:
        if mode or params:
            raise ConfigError("--figure cannot be combined with --mode or parameters")
        return emit_figure_data(figure, fmt, out)
    if not mode:
        raise ConfigError("one of --mode or --figure is required")
    return ExperimentConfig(mode, params, fmt, out)


def _fail(kind: str, message: str, code: int) -> int:
    message = " ".join(str(message).split())
    print(f"bornwalk: error: {kind}: {message}", file=sys.stderr)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        config = config_from_args(argv)
        table = run(config)
        text = render(config, table)
    except ConfigError as exc:
        return _fail("config", exc, 2)
    except OSError as exc:
        return _fail("config", exc, 2)
    except OracleBudgetExceeded as exc:
        return _fail("oracle-budget", exc, 4)
    except (NumericalFailure, EnsembleFalsified, ArithmeticError, ValueError) as exc:
        return _fail("numerical", exc, 3)

    for w in table.warnings:
        print(f"bornwalk: {w}", file=sys.stderr)
    if config.output_path:
        try:
            Path(config.output_path).write_text(text)
        except OSError as exc:
            return _fail("config", exc, 2)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
