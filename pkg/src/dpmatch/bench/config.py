"""Flat key=value experiment configs.

Repeated keys accumulate into lists (q, rho, s, d, t1, m, method). Blank
lines and '#' comments are ignored. The resolved config is echoed into
every CSV so a results file is self-describing.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields

SCENARIOS = ("er", "sbm", "threshold-pipeline", "file-pair")

ER_METHODS = ("dp", "ee", "ee-pre", "ee-post")
SBM_METHODS = (
    "dp",
    "ee-post",
    "comm-dp",
    "comm-ee-post",
    "comm-refine-dp",
    "comm-refine-ee-post",
)

_LIST_KEYS = {"q", "rho", "s", "d", "t1", "m", "method"}
_INT_KEYS = {"n", "K", "n_rep", "repetitions", "seed"}
_FLOAT_KEYS = {"tau"}
_STR_KEYS = {"scenario", "out", "mode", "matrix", "a", "b", "truth"}


@dataclass
class ExperimentConfig:
    scenario: str = "er"
    n: int = 300
    q: list = field(default_factory=lambda: [0.1])
    rho: list = field(default_factory=lambda: [1.0])
    s: list = field(default_factory=lambda: [1.0])
    K: int = 2
    d: list = field(default_factory=lambda: [10])
    n_rep: int = 50
    tau: float = None  # None means the n_rep/10 default
    repetitions: int = 1
    seed: int = 0
    methods: list = field(default_factory=list)
    out: str = "results"
    # threshold-pipeline extras
    matrix: str = ""
    t1: list = field(default_factory=lambda: [0.5])
    mode: str = "same"
    m: list = field(default_factory=lambda: [100])
    # file-pair extras
    a: str = ""
    b: str = ""
    truth: str = ""

    def echo_lines(self) -> list:
        """Resolved config as stable key=value lines for the CSV header.

        The output directory is omitted: it is where the file lives, not
        an experiment parameter, and echoing it would make otherwise
        identical runs produce different bytes.
        """
        lines = []
        for f in fields(self):
            if f.name == "out":
                continue
            value = getattr(self, f.name)
            key = "method" if f.name == "methods" else f.name
            if isinstance(value, list):
                lines.extend(f"{key} = {_fmt_value(v)}" for v in value)
            else:
                lines.append(f"{key} = {_fmt_value(value)}")
        return lines


def _fmt_value(v):
    if v is None:
        return "NA"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def parse_config(text: str) -> ExperimentConfig:
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key in _LIST_KEYS:
            raw.setdefault(key, []).append(value)
        elif key in _INT_KEYS or key in _FLOAT_KEYS or key in _STR_KEYS:
            if key in raw:
                raise ValueError(f"config line {lineno}: duplicate key {key!r}")
            raw[key] = value
        else:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
    cfg = ExperimentConfig()
    for key, value in raw.items():
        if key in _INT_KEYS:
            setattr(cfg, key, int(value))
        elif key in _FLOAT_KEYS:
            setattr(cfg, key, None if value in ("", "NA") else float(value))
        elif key == "method":
            cfg.methods = list(value)
        elif key in ("q", "rho", "s", "t1"):
            setattr(cfg, key, [float(v) for v in value])
        elif key in ("d", "m"):
            setattr(cfg, key, [int(v) for v in value])
        else:
            setattr(cfg, key, value)
    return cfg


def load_config(path) -> ExperimentConfig:
    with open(path) as f:
        return parse_config(f.read())


def validate_config(cfg: ExperimentConfig) -> None:
    """Check domains; raises ValueError with a pointed message."""
    if cfg.scenario not in SCENARIOS:
        raise ValueError(f"scenario must be one of {SCENARIOS}, got {cfg.scenario!r}")
    if cfg.repetitions < 1:
        raise ValueError("repetitions must be at least 1")
    if cfg.n_rep < 1:
        raise ValueError("n_rep must be at least 1")
    for name in ("q", "rho", "s"):
        for v in getattr(cfg, name):
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} values must lie in [0,1]")
    if any(dd < 1 for dd in cfg.d):
        raise ValueError("d values must be at least 1")
    if not cfg.methods:
        cfg.methods = list(SBM_METHODS if cfg.scenario == "sbm" else ER_METHODS)
    allowed = SBM_METHODS if cfg.scenario == "sbm" else ER_METHODS
    for mth in cfg.methods:
        if mth not in allowed:
            raise ValueError(f"method {mth!r} not valid for scenario {cfg.scenario!r}")
    if cfg.scenario == "er" and len(cfg.rho) != len(cfg.s):
        raise ValueError("er scenario pairs rho with s; the lists must have equal length")
    if cfg.scenario == "threshold-pipeline":
        if not cfg.matrix:
            raise ValueError("threshold-pipeline needs a matrix file")
        if cfg.mode not in ("same", "different"):
            raise ValueError('mode must be "same" or "different"')
        if any(mm < 1 for mm in cfg.m):
            raise ValueError("m values must be at least 1")
    if cfg.scenario == "file-pair" and (not cfg.a or not cfg.b):
        raise ValueError("file-pair needs both edge-list paths a and b")
