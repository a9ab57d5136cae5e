"""Run configuration: INI-style ``key = value`` file with sections.

Example::

    [problem]
    name = example2        ; example1 | example2 | custom
    alpha = 1.8
    h = 1/16               ; or mx / my
    tau = 1/16
    T = 4

    [solver]
    tol = 1e-10
    max_iter = 500
    preconditioner = sine  ; sine | circulant | none (on = sine, off = none)
    dense_cap = 4096
    method = auto          ; auto | fft | direct

    [output]
    dir = out
    snapshot_times = 0, 2, 4

    [sweep]
    alphas = 1.2, 1.5, 1.9, 2.0
    levels = 1/16, 1/32, 1/64, 1/128
    level_convention = cells   ; cells: Mx = 1/level ; meshsize: h = level
    order_band = 1.7, 2.4
    min_passing =              ; default: transitions - 1
    drift_tol = 1e-8
    report_every = 0.5
    threads = 1

    [run]
    seed = 0

``example1`` fixes the domain to [0, 2]^2 and ``example2`` to [-5, 5]^2.
``custom`` reads ``a, b, c, d`` and ``initial = zero | gaussian`` with
``amplitude``, ``x0``, ``y0``, ``width``.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace
from fractions import Fraction

from fracschrod.grid import GridSpec
from fracschrod.linsolve import PRECONDITIONERS, SolverSettings
from fracschrod.problems import EXAMPLE1_DOMAIN, EXAMPLE2_DOMAIN

__all__ = ["ConfigError", "RunConfig", "load_config", "parse_number", "parse_list"]


class ConfigError(ValueError):
    pass


def parse_number(text) -> float:
    """Float from ``"0.05"``, ``"1/20"`` or ``"1e-10"``."""
    if isinstance(text, (int, float)):
        return float(text)
    s = str(text).strip()
    try:
        return float(Fraction(s)) if "/" in s else float(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not a number: {text!r}") from exc


def parse_list(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [parse_number(v) for v in text]
    return [parse_number(v) for v in str(text).replace(";", ",").split(",") if v.strip()]


_DOMAINS = {"example1": EXAMPLE1_DOMAIN, "example2": EXAMPLE2_DOMAIN}
_DEFAULT_ALPHAS = {"converge": (1.2, 1.5, 1.9, 2.0), "energy": (1.2, 1.5, 1.8)}


_COMMAND_DEFAULTS = {
    "converge": {"problem": "example1", "T": 1.0},
    "energy": {"problem": "example2", "h": 1 / 20, "tau": 1 / 20, "T": 5.0},
    "run": {"problem": "example2", "h": 1 / 16, "tau": 1 / 16, "T": 4.0},
}


@dataclass(frozen=True)
class RunConfig:
    """Settings for one CLI command; ``None`` means "command default"."""

    problem: str | None = None
    alpha: float = 1.5
    domain: tuple[float, float, float, float] | None = None
    mx: int | None = None
    my: int | None = None
    h: float | None = None
    tau: float | None = None
    T: float | None = None
    initial: str = "zero"
    amplitude: float = 1.0
    x0: float = 0.0
    y0: float = 0.0
    width: float = 1.0
    solver: SolverSettings = field(default_factory=SolverSettings)
    method: str = "auto"
    out_dir: str = "out"
    snapshot_times: tuple[float, ...] = ()
    alphas: tuple[float, ...] | None = None
    levels: tuple[float, ...] = (1 / 16, 1 / 32, 1 / 64, 1 / 128)
    level_convention: str = "cells"
    order_band: tuple[float, float] = (1.7, 2.4)
    min_passing: int | None = None
    drift_tol: float = 1e-8
    report_every: float = 0.5
    threads: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.problem not in (None, "example1", "example2", "custom"):
            raise ConfigError(f"unknown problem {self.problem!r}")
        if (self.problem in _DOMAINS and self.domain is not None
                and tuple(self.domain) != _DOMAINS[self.problem]):
            raise ConfigError(f"{self.problem} fixes the domain to {_DOMAINS[self.problem]}")
        if not (1.0 < self.alpha <= 2.0):
            raise ConfigError(f"alpha must lie in (1, 2], got {self.alpha}")
        for a in self.alphas or ():
            if not (1.0 < a <= 2.0):
                raise ConfigError(f"alpha must lie in (1, 2], got {a}")
        if self.level_convention not in ("cells", "meshsize"):
            raise ConfigError("level_convention must be 'cells' or 'meshsize'")
        if self.method not in ("auto", "fft", "direct"):
            raise ConfigError(f"unknown method {self.method!r}")
        if self.initial not in ("zero", "gaussian"):
            raise ConfigError(f"unknown initial {self.initial!r}")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        lo, hi = self.order_band
        if not lo < hi:
            raise ConfigError("order_band must be increasing")

    def resolve(self, command: str) -> RunConfig:
        """Fill the problem, domain and mesh defaults of ``command``."""
        fill = {k: v for k, v in _COMMAND_DEFAULTS[command].items() if getattr(self, k) is None}
        if self.mx is not None or self.my is not None:
            fill.pop("h", None)  # explicit cell counts win over the default mesh size
        cfg = replace(self, **fill)
        if cfg.domain is None:
            cfg = replace(cfg, domain=_DOMAINS.get(cfg.problem, (0.0, 1.0, 0.0, 1.0)))
        if cfg.tau is None and command != "converge":
            raise ConfigError("tau is required")
        return cfg

    def sweep_alphas(self, command: str) -> tuple[float, ...]:
        return self.alphas if self.alphas is not None else _DEFAULT_ALPHAS.get(command, (self.alpha,))

    def grid(self, alpha: float | None = None) -> GridSpec:
        """GridSpec for a single run; raises ConfigError on invalid values."""
        a, b, c, d = self.domain
        alpha = self.alpha if alpha is None else alpha
        try:
            if self.h is not None:
                return GridSpec.uniform(a, b, c, d, self.h, alpha, self.tau, self.T)
            if self.mx is None or self.my is None:
                raise ConfigError("give either h or both mx and my")
            return GridSpec(a, b, c, d, self.mx, self.my, alpha, self.tau, self.T)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def level_grid(self, alpha: float, level: float) -> GridSpec:
        """Grid for one convergence level with tau = level."""
        a, b, c, d = self.domain
        try:
            if self.level_convention == "cells":
                m = round(1.0 / level)
                if abs(m * level - 1.0) > 1e-9:
                    raise ConfigError(f"level {level} is not 1/integer")
                return GridSpec(a, b, c, d, m, m, alpha, level, self.T)
            return GridSpec.uniform(a, b, c, d, level, alpha, level, self.T)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc


def _preconditioner(value: str) -> str:
    v = value.strip().lower()
    v = {"on": "sine", "true": "sine", "yes": "sine", "off": "none", "false": "none", "no": "none"}.get(v, v)
    if v not in PRECONDITIONERS:
        raise ConfigError(f"unknown preconditioner {value!r}")
    return v


def load_config(path=None, **overrides) -> RunConfig:
    """Read ``path`` (optional) and apply keyword overrides (CLI flags).

    Raises
    ------
    ConfigError
        On unknown sections/keys or invalid values.
    """
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    if path is not None:
        try:
            with open(path) as fh:
                cp.read_file(fh)
        except (OSError, configparser.Error) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc

    known = {
        "problem": {"name", "alpha", "a", "b", "c", "d", "mx", "my", "h", "tau", "t",
                    "initial", "amplitude", "x0", "y0", "width"},
        "solver": {"tol", "max_iter", "preconditioner", "dense_cap", "method"},
        "output": {"dir", "snapshot_times"},
        "sweep": {"alphas", "levels", "level_convention", "order_band", "min_passing",
                  "drift_tol", "report_every", "threads"},
        "run": {"seed"},
    }
    for section in cp.sections():
        if section not in known:
            raise ConfigError(f"unknown section [{section}]")
        extra = set(cp[section]) - known[section]
        if extra:
            raise ConfigError(f"unknown keys in [{section}]: {sorted(extra)}")

    def get(section, key, default=None):
        return cp.get(section, key, fallback=default) if cp.has_section(section) else default

    kw = {}
    try:
        name = get("problem", "name")
        if name is not None:
            kw["problem"] = name.strip()
        if get("problem", "alpha") is not None:
            kw["alpha"] = parse_number(get("problem", "alpha"))
        if any(get("problem", k) is not None for k in "abcd"):
            kw["domain"] = tuple(parse_number(get("problem", k, dv))
                                 for k, dv in zip("abcd", (0.0, 1.0, 0.0, 1.0)))
        for key in ("mx", "my"):
            if get("problem", key):
                kw[key] = int(get("problem", key))
        for key, attr in (("h", "h"), ("tau", "tau"), ("t", "T"), ("amplitude", "amplitude"),
                          ("x0", "x0"), ("y0", "y0"), ("width", "width")):
            if get("problem", key):
                kw[attr] = parse_number(get("problem", key))
        if get("problem", "initial"):
            kw["initial"] = get("problem", "initial").strip()

        s = {}
        if get("solver", "tol"):
            s["tol"] = parse_number(get("solver", "tol"))
        if get("solver", "max_iter"):
            s["max_iter"] = int(get("solver", "max_iter"))
        if get("solver", "preconditioner"):
            s["preconditioner"] = _preconditioner(get("solver", "preconditioner"))
        if get("solver", "dense_cap"):
            s["dense_cap"] = int(get("solver", "dense_cap"))
        if get("solver", "method"):
            kw["method"] = get("solver", "method").strip()

        if get("output", "dir"):
            kw["out_dir"] = get("output", "dir").strip()
        if get("output", "snapshot_times"):
            kw["snapshot_times"] = tuple(parse_list(get("output", "snapshot_times")))

        if get("sweep", "alphas"):
            kw["alphas"] = tuple(parse_list(get("sweep", "alphas")))
        if get("sweep", "levels"):
            kw["levels"] = tuple(parse_list(get("sweep", "levels")))
        if get("sweep", "level_convention"):
            kw["level_convention"] = get("sweep", "level_convention").strip()
        if get("sweep", "order_band"):
            kw["order_band"] = tuple(parse_list(get("sweep", "order_band")))
        if get("sweep", "min_passing"):
            kw["min_passing"] = int(get("sweep", "min_passing"))
        for key in ("drift_tol", "report_every"):
            if get("sweep", key):
                kw[key] = parse_number(get("sweep", key))
        if get("sweep", "threads"):
            kw["threads"] = int(get("sweep", "threads"))
        if get("run", "seed"):
            kw["seed"] = int(get("run", "seed"))

        # CLI overrides
        if overrides.get("alphas") is not None:
            alphas = tuple(parse_list(overrides["alphas"]))
            if not alphas:
                raise ConfigError("empty --alpha list")
            kw["alphas"] = alphas
            kw["alpha"] = alphas[0]
        if overrides.get("levels") is not None:
            kw["levels"] = tuple(parse_list(overrides["levels"]))
        if overrides.get("tol") is not None:
            s["tol"] = parse_number(overrides["tol"])
        if overrides.get("out") is not None:
            kw["out_dir"] = overrides["out"]
        if overrides.get("threads") is not None:
            kw["threads"] = int(overrides["threads"])
        if overrides.get("seed") is not None:
            kw["seed"] = int(overrides["seed"])

        kw["solver"] = SolverSettings(**s)
        cfg = RunConfig(**kw)
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc
    return cfg
