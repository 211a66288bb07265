"""Flat ``key = value`` run configuration.

Grammar, one entry per line::

    # comment (also allowed after a value)
    key = value

A value is one of

* a number, or an arithmetic expression over numbers, ``pi`` and ``sqrt``
  (``T = pi / (2*sqrt(2))``);
* a bare word (``model = quench``);
* ``true`` / ``false``;
* an array of such numbers or expressions.  Complex entries are ``[re, im]``
  pairs, so a state vector is ``[[re, im], ...]`` and a matrix is a list of
  such rows.  A plain real number is accepted wherever a pair is.

Keys are case-sensitive and may appear once.  Unknown keys are rejected.
"""

from __future__ import annotations

import ast
import json
import math
import operator
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .battery import EffectiveDriveParams, discharge_window
from .core import Constant, JaynesCummingsBlock, Quench, RwaDrive, basis_state
from .errors import ConfigError

DEFAULT_N_STEPS = 4096

MODEL_KEYS = {
    "constant": {"H"},
    "quench": {"H_base", "H_kick"},
    "rwa": {"eps_bar", "a_bar"},
    "jc": {"omega", "lambda", "n"},
}
COMMON_KEYS = {"command", "target", "n_steps", "output", "format", "hbar"}
BOUNDS_KEYS = {"model", "T", "initial", "rho"} | set().union(*MODEL_KEYS.values())
SWEEP_KEYS = {"a_bar", "eps_bar", "N", "points", "T_max"}


@dataclass
class RunConfig:
    command: str
    target: str | None = None
    params: dict[str, Any] = field(default_factory=dict)
    n_steps: int = DEFAULT_N_STEPS
    output_path: str | None = None
    format: str = "table"
    lines: dict[str, int] = field(default_factory=dict)

    def where(self, key: str) -> str:
        line = self.lines.get(key)
        return f"line {line}, key {key!r}" if line else f"key {key!r}"

    def require(self, key: str) -> Any:
        if key not in self.params:
            raise ConfigError(f"missing required key {key!r}")
        return self.params[key]


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_NAMES = {"pi": math.pi, "e": math.e}
_FUNCS = {"sqrt": math.sqrt}


def _eval_expr(node):
    if isinstance(node, ast.Expression):
        return _eval_expr(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
        return node.value
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_expr(node.left), _eval_expr(node.right))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_expr(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.List):
        return [_eval_expr(e) for e in node.elts]
    if isinstance(node, ast.Name) and node.id in _NAMES:
        return _NAMES[node.id]
    if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCS
            and len(node.args) == 1 and not node.keywords):
        return _FUNCS[node.func.id](_eval_expr(node.args[0]))
    raise ValueError("unsupported expression")


def parse_value(text: str) -> Any:
    text = text.strip()
    if not text:
        raise ValueError("empty value")
    if text.startswith("["):
        try:
            return _eval_expr(ast.parse(text, mode="eval"))
        except (SyntaxError, ValueError, ZeroDivisionError, TypeError):
            raise ValueError(f"cannot parse array {text!r}") from None
    if text in ("true", "false"):
        return text == "true"
    try:
        return _eval_expr(ast.parse(text, mode="eval"))
    except (SyntaxError, ValueError, ZeroDivisionError, TypeError):
        pass
    if text.replace("-", "").replace("_", "").isalnum():
        return text
    raise ValueError(f"cannot parse value {text!r}")


def parse_text(text: str) -> tuple[dict[str, Any], dict[str, int]]:
    """Parse config text into (values, line numbers by key)."""
    values: dict[str, Any] = {}
    lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key.isidentifier():
            raise ConfigError(f"line {lineno}: invalid key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r} (first on line {lines[key]})")
        try:
            values[key] = parse_value(value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}, key {key!r}: {exc}") from None
        lines[key] = lineno
    return values, lines


def load_config(path: str | Path, command: str) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return build_config(text, command)


def build_config(text: str, command: str) -> RunConfig:
    values, lines = parse_text(text)
    allowed = COMMON_KEYS | (SWEEP_KEYS if command == "sweep" else BOUNDS_KEYS)
    for key in values:
        if key not in allowed:
            raise ConfigError(f"line {lines[key]}: unknown key {key!r} for command {command!r}")
    if values.get("command", command) != command:
        raise ConfigError(f"line {lines['command']}: config is for command {values['command']!r}, not {command!r}")
    cfg = RunConfig(command=command, lines=lines)
    cfg.target = values.pop("target", None)
    values.pop("command", None)
    if "n_steps" in values:
        cfg.n_steps = _as_int(cfg, "n_steps", values.pop("n_steps"), minimum=64)
    cfg.output_path = values.pop("output", None)
    cfg.format = values.pop("format", "table" if command == "bounds" else "csv")
    if cfg.format not in ("table", "csv"):
        raise ConfigError(f"{cfg.where('format')}: format must be 'table' or 'csv'")
    if command == "sweep" and cfg.target not in (None, "battery-harmonic"):
        raise ConfigError(f"{cfg.where('target')}: sweep supports only target battery-harmonic")
    if command == "bounds":
        model = values.get("model")
        if model not in MODEL_KEYS:
            raise ConfigError(f"{cfg.where('model')}: model must be one of {', '.join(MODEL_KEYS)}")
        stray = (set().union(*MODEL_KEYS.values()) - MODEL_KEYS[model]) & set(values)
        if stray:
            key = sorted(stray, key=lines.get)[0]
            raise ConfigError(f"{cfg.where(key)}: not a parameter of model {model!r}")
    cfg.params = values
    return cfg


def _as_int(cfg: RunConfig, key: str, value: Any, minimum: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value or value < minimum:
        raise ConfigError(f"{cfg.where(key)}: expected an integer >= {minimum}, got {value!r}")
    return int(value)


def _as_float(cfg: RunConfig, key: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{cfg.where(key)}: expected a number, got {value!r}")
    return float(value)


def _complex_entry(cfg: RunConfig, key: str, entry: Any) -> complex:
    if isinstance(entry, (int, float)) and not isinstance(entry, bool):
        return complex(entry)
    if (isinstance(entry, list) and len(entry) == 2
            and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry)):
        return complex(entry[0], entry[1])
    raise ConfigError(f"{cfg.where(key)}: expected a number or [re, im] pair, got {entry!r}")


def as_vector(cfg: RunConfig, key: str, value: Any) -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{cfg.where(key)}: expected a list of [re, im] pairs")
    return np.array([_complex_entry(cfg, key, e) for e in value])


def as_matrix(cfg: RunConfig, key: str, value: Any) -> np.ndarray:
    if not isinstance(value, list) or not value or not all(isinstance(r, list) for r in value):
        raise ConfigError(f"{cfg.where(key)}: expected a list of rows")
    rows = [as_vector(cfg, key, r) for r in value]
    if len({r.size for r in rows}) != 1 or rows[0].size != len(rows):
        raise ConfigError(f"{cfg.where(key)}: matrix must be square")
    return np.array(rows)


def format_matrix(m: np.ndarray) -> str:
    """Serialise a complex matrix in the config grammar."""
    return json.dumps([[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)])


def build_model(cfg: RunConfig):
    """HamiltonianModel described by a ``bounds`` config."""
    p = cfg.params
    hbar = _as_float(cfg, "hbar", p.get("hbar", 1.0))
    kind = cfg.require("model")
    for key in MODEL_KEYS[kind]:
        cfg.require(key)
    if kind == "constant":
        return Constant(as_matrix(cfg, "H", p["H"]), hbar=hbar)
    if kind == "quench":
        return Quench(as_matrix(cfg, "H_base", p["H_base"]), as_matrix(cfg, "H_kick", p["H_kick"]), hbar=hbar)
    if kind == "rwa":
        return RwaDrive(_as_float(cfg, "eps_bar", p["eps_bar"]), _as_float(cfg, "a_bar", p["a_bar"]), hbar=hbar)
    return JaynesCummingsBlock(_as_float(cfg, "omega", p["omega"]), _as_float(cfg, "lambda", p["lambda"]),
                               _as_int(cfg, "n", p["n"]), hbar=hbar)


def build_initial(cfg: RunConfig, dim: int) -> np.ndarray:
    value = cfg.require("initial")
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        k = _as_int(cfg, "initial", value)
        if k >= dim:
            raise ConfigError(f"{cfg.where('initial')}: basis index {k} out of range for dimension {dim}")
        return basis_state(dim, k)
    vec = as_vector(cfg, "initial", value)
    if vec.size != dim:
        raise ConfigError(f"{cfg.where('initial')}: state has dimension {vec.size}, model has {dim}")
    norm = np.linalg.norm(vec)
    if norm == 0:
        raise ConfigError(f"{cfg.where('initial')}: zero vector")
    return vec / norm


def sweep_settings(cfg: RunConfig) -> dict[str, Any]:
    p = cfg.params
    settings = {
        "a_bar": _as_float(cfg, "a_bar", p.get("a_bar", 1.0)),
        "eps_bar": _as_float(cfg, "eps_bar", p.get("eps_bar", 2.0)),
        "N": _as_int(cfg, "N", p.get("N", 100), minimum=1),
        "points": _as_int(cfg, "points", p.get("points", 100), minimum=1),
        "hbar": _as_float(cfg, "hbar", p.get("hbar", 1.0)),
    }
    if "T_max" in p:
        window = discharge_window(EffectiveDriveParams(settings["eps_bar"] * settings["hbar"],
                                                       settings["a_bar"] * settings["hbar"]), settings["hbar"])
        t_max = _as_float(cfg, "T_max", p["T_max"])
        if not 0 < t_max <= window * (1 + 1e-12):
            raise ConfigError(f"{cfg.where('T_max')}: must lie in (0, {window:.6g}]")
        settings["T_max"] = t_max
    return settings
