"""Run configuration: flat ``key = value`` files, env default, CLI overrides."""
from __future__ import annotations

import os
from dataclasses import dataclass, field, fields
from pathlib import Path

from .errors import InputError

ENV_VAR = "INFODENS_CONFIG"
SYSTEMS = ("cluster", "nucleus", "harmonic", "bosons")
_KIND_ALIASES = {"ws_cluster": "cluster", "ws_nucleus": "nucleus"}


def _positive(x):
    return x > 0


def _non_negative(x):
    return x >= 0


def _parse_n_list(text: str) -> tuple[float, ...]:
    values = []
    for tok in str(text).split(","):
        tok = tok.strip()
        if not tok:
            continue
        v = float(tok)
        values.append(int(v) if v.is_integer() else v)
    return tuple(values)


# key -> (attribute, parser, validator or None)
_KEYS = {
    "system.kind": ("system", str, lambda s: s in SYSTEMS),
    "system.V0": ("V0", float, _positive),
    "system.r0": ("r0", float, _positive),
    "system.a": ("a", float, _positive),
    "system.hbar2_over_2m": ("hbar2_over_2m", float, _positive),
    "system.hbar_omega": ("hbar_omega", float, _positive),
    "grid.r_max": ("r_max", float, _positive),
    "grid.n_points": ("n_points", int, lambda n: n >= 200),
    "grid.k_max": ("k_max", float, _positive),
    "grid.k_points": ("k_points", int, lambda n: n >= 200),
    "grid.auto_extend": ("auto_extend", lambda s: str(s).lower() in ("1", "true", "yes"), None),
    "spectrum.l_max": ("l_max", int, _non_negative),
    "spectrum.max_states_per_l": ("max_states_per_l", int, _positive),
    "bosons.a_s_over_b": ("a_s_over_b", float, _non_negative),
    "bosons.omega": ("omega", float, _positive),
    "scan.n": ("n_values", _parse_n_list, lambda t: len(t) > 0 and all(v >= 1 for v in t)),
    "output.format": ("output_format", str, lambda s: s in ("csv", "json")),
    "jobs": ("jobs", int, _positive),
}


@dataclass
class RunConfig:
    """Everything a run depends on.  ``None`` means the system default."""
    system: str = "cluster"
    V0: float | None = None
    r0: float | None = None
    a: float | None = None
    hbar2_over_2m: float | None = None
    hbar_omega: float | None = None
    r_max: float | None = None
    n_points: int | None = None
    k_max: float | None = None
    k_points: int | None = None
    auto_extend: bool = True
    l_max: int = 12
    max_states_per_l: int = 8
    a_s_over_b: float = 0.0043
    omega: float = 1.0
    n_values: tuple = field(default_factory=tuple)
    output_format: str = "csv"
    jobs: int = 1

    def set(self, key: str, value) -> None:
        if key not in _KEYS:
            raise InputError("cli.RunConfig", f"unknown config key {key!r}")
        attr, parse, valid = _KEYS[key]
        if attr == "system":
            value = _KIND_ALIASES.get(str(value).strip(), str(value).strip())
        try:
            parsed = parse(value.strip() if isinstance(value, str) else value)
        except (TypeError, ValueError) as exc:
            raise InputError("cli.RunConfig", f"bad value for {key}: {value!r} ({exc})") from None
        if valid is not None and not valid(parsed):
            raise InputError("cli.RunConfig", f"value out of range for {key}: {value!r}")
        setattr(self, attr, parsed)

    def update(self, pairs: dict) -> "RunConfig":
        for k, v in pairs.items():
            self.set(k, v)
        return self

    def items(self) -> list[tuple[str, object]]:
        """Effective (key, value) pairs in a fixed order, for output headers."""
        by_attr = {attr: key for key, (attr, _, _) in _KEYS.items()}
        out = []
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = ",".join(str(x) for x in v)
            out.append((by_attr[f.name], v))
        return out


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    pairs = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError("cli.RunConfig", f"{source}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _KEYS:
            raise InputError("cli.RunConfig", f"{source}:{lineno}: unknown config key {key!r}")
        pairs[key] = value
    return pairs


def load_config(path: str | os.PathLike | None = None,
                overrides: dict | None = None) -> RunConfig:
    """Defaults, then the config file (or ``$INFODENS_CONFIG``), then overrides."""
    cfg = RunConfig()
    path = path or os.environ.get(ENV_VAR)
    if path:
        p = Path(path)
        try:
            text = p.read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError("cli.RunConfig", f"cannot read config {p}: {exc}") from None
        cfg.update(parse_config_text(text, str(p)))
    if overrides:
        cfg.update(overrides)
    return cfg
