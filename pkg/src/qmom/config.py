"""Run configuration: INI file with [system] [interaction] [sweep] [simulate] [output].

Every key has a command-line twin; flags override the file.  Unknown
sections or keys are rejected.
"""
from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, field, fields, replace
from typing import Optional

from .combinatorics import Statistics
from .errors import ValidationError
from .model import InteractionSpec, RScheme, SystemSpec, Table, Uniform, YTermPolicy, to_fraction

__all__ = ["RunConfig", "SCHEMA", "load_config", "parse_table"]

# section -> {key: (attribute, converter)}
SCHEMA = {
    "system": {"stats": str, "N1": int, "m1": int, "N2": int, "m2": int},
    "interaction": {"k": int, "scheme": str, "v2": str, "R": str, "table": str,
                    "y_policy": str, "mode": str},
    "sweep": {"k_min": int, "k_max": int, "grid": str},
    "simulate": {"members": int, "seed": int, "bins": int, "workers": int, "dim_cap": int},
    "output": {"json": str, "csv": str, "histogram": str},
}

MODES = ("finite", "asymptotic")
SCHEMES = ("uniform", "rscheme", "table")


def parse_table(text: str) -> dict:
    """'2,0=1; 1,1=0.5; 0,2=1' -> {(2,0): 1, (1,1): 1/2, (0,2): 1}."""
    out = {}
    for item in filter(None, (chunk.strip() for chunk in text.replace("\n", ";").split(";"))):
        try:
            key, value = item.split("=")
            i, j = (int(x) for x in key.split(","))
        except ValueError:
            raise ValidationError(f"bad variance table entry {item!r}; expected 'i,j=value'") from None
        out[(i, j)] = to_fraction(value.strip())
    return out


def _format_table(table: dict) -> str:
    return "; ".join(f"{i},{j}={v}" for (i, j), v in sorted(table.items(), reverse=True))


@dataclass
class RunConfig:
    stats: str = "fermion"
    N1: Optional[int] = None
    m1: Optional[int] = None
    N2: Optional[int] = None
    m2: Optional[int] = None
    k: Optional[int] = None
    scheme: str = "uniform"
    v2: str = "1"
    R: str = "1"
    table: str = ""
    y_policy: Optional[str] = None
    mode: str = "finite"
    k_min: int = 1
    k_max: Optional[int] = None
    grid: Optional[str] = None
    members: Optional[int] = None
    seed: Optional[int] = None
    bins: int = 60
    workers: int = 1
    dim_cap: Optional[int] = None
    json: Optional[str] = None
    csv: Optional[str] = None
    histogram: Optional[str] = None
    _explicit: set = field(default_factory=set, repr=False, compare=False)

    # -- construction -----------------------------------------------------

    @classmethod
    def from_ini(cls, text: str) -> "RunConfig":
        parser = configparser.ConfigParser(interpolation=None)
        parser.optionxform = str  # keep N1 vs n1 distinct
        try:
            parser.read_string(text)
        except configparser.Error as exc:
            raise ValidationError(f"cannot parse config: {exc}") from None
        values = {}
        for section in parser.sections():
            if section not in SCHEMA:
                raise ValidationError(f"unknown config section [{section}]")
            for key, raw in parser.items(section):
                if key not in SCHEMA[section]:
                    raise ValidationError(f"unknown key {key!r} in [{section}]")
                conv = SCHEMA[section][key]
                try:
                    values[key] = conv(raw.strip())
                except ValueError:
                    raise ValidationError(f"[{section}] {key} = {raw!r} is not a valid {conv.__name__}") from None
        cfg = cls(**values)
        cfg._explicit = set(values)
        cfg.validate()
        return cfg

    def override(self, **flags) -> "RunConfig":
        """Copy with the given non-None flag values applied on top."""
        updates = {key: value for key, value in flags.items() if value is not None}
        unknown = set(updates) - {f.name for f in fields(self)}
        if unknown:
            raise ValidationError(f"unknown configuration keys: {sorted(unknown)}")
        out = replace(self, **updates)
        out._explicit = set(self._explicit) | set(updates)
        out.validate()
        return out

    def to_ini(self) -> str:
        """Emit the explicitly set keys; parsing the result gives back an equal config."""
        parser = configparser.ConfigParser(interpolation=None)
        parser.optionxform = str
        for section, keys in SCHEMA.items():
            present = [key for key in keys if key in self._explicit]
            if not present:
                continue
            parser.add_section(section)
            for key in present:
                value = getattr(self, key)
                if key == "table" and value:
                    value = _format_table(parse_table(value))
                parser.set(section, key, str(value))
        buf = io.StringIO()
        parser.write(buf)
        return buf.getvalue()

    # -- validation -------------------------------------------------------

    def validate(self) -> None:
        Statistics.parse(self.stats)
        if self.mode not in MODES:
            raise ValidationError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.scheme not in SCHEMES:
            raise ValidationError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.y_policy is not None:
            YTermPolicy.parse(self.y_policy)
        to_fraction(self.v2)
        to_fraction(self.R)
        if self.scheme == "table":
            parse_table(self.table)
        for name in ("members", "bins", "workers", "dim_cap"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ValidationError(f"{name} must be positive, got {value}")
        if self.seed is not None and not 0 <= self.seed < 2**64:
            raise ValidationError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    def require(self, *names: str) -> None:
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            flags = ", ".join("--" + n.replace("_", "-") for n in missing)
            raise ValidationError(f"missing required setting(s): {flags}")

    # -- model objects ----------------------------------------------------

    def system(self) -> SystemSpec:
        self.require("N1", "m1", "N2", "m2")
        return SystemSpec(self.stats, self.N1, self.m1, self.N2, self.m2)

    def interaction(self, k: Optional[int] = None) -> InteractionSpec:
        k = self.k if k is None else k
        if k is None:
            raise ValidationError("missing required setting(s): --k")
        if self.scheme == "uniform":
            scheme = Uniform(self.v2)
        elif self.scheme == "rscheme":
            scheme = RScheme(self.v2, self.R)
        else:
            scheme = Table(parse_table(self.table))
        return InteractionSpec(k, scheme)

    def policy(self) -> YTermPolicy:
        if self.y_policy is None:
            return YTermPolicy.default_for(self.stats)
        return YTermPolicy.parse(self.y_policy)


def load_config(path: Optional[str]) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read config file {path!r}: {exc.strerror}") from None
    return RunConfig.from_ini(text)
