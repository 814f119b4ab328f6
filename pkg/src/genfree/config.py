"""Experiment configuration: ``key=value`` files, validation and hashing."""
from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .barriers import BarrierSpec, NegligibleParams, frac
from .errors import InputError

# fields that do not change results and stay out of the config hash
_VOLATILE = {"out", "cache", "workers", "presentation"}


@dataclass
class ExperimentConfig:
    model: str = "free2"
    presentation: str | None = None
    radius: int = 8
    ns: list = field(default_factory=list)
    region: str = "big_annulus"
    eps: Fraction = Fraction(1, 5)
    eps1: Fraction = Fraction(1, 4)
    eps2: Fraction = Fraction(3, 4)
    rho: Fraction = Fraction(9, 10)
    Delta: int = 0
    C: int = 1
    D: int | None = None
    tau: int | None = None
    nu: int | None = None
    M: int = 0
    M1: int = 0
    M2: int = 0
    h: str = "a"
    m: int | None = None
    L: int = 6
    Lambda: Fraction = Fraction(4)
    zt_constant: int | None = None
    suborbit: str = "axis"
    set: str = "T"
    mode: str = "exact"
    samples: int = 10_000
    seed: int = 0
    workers: int = 1
    cache: str | None = None
    out: str | None = None

    # -- derived defaults ----------------------------------------------------
    def __post_init__(self):
        for name in ("eps", "eps1", "eps2", "rho", "Lambda"):
            setattr(self, name, frac(getattr(self, name)))
        if self.D is None:
            self.D = 16 * self.C + 1
        if self.tau is None:
            self.tau = 9 * self.C
        if self.nu is None:
            self.nu = self.C

    @property
    def params(self) -> NegligibleParams:
        return NegligibleParams(self.eps, self.eps1, self.eps2, self.rho, self.C, self.Delta, self.M)

    def barrier_spec(self, model) -> BarrierSpec:
        if self.m is None:
            return BarrierSpec.minimal(model, self.h, self.D, self.nu, self.M)
        spec = BarrierSpec(model.word(self.h), self.m, self.nu, self.M)
        spec.check(model, self.D)
        return spec

    def validate(self, model=None) -> "ExperimentConfig":
        """Reject parameter combinations outside the generic regime."""
        p = self.params
        p.check_generic_regime()
        if not self.D > 16 * self.C:
            raise InputError(f"regime violated: D > 16C (D = {self.D}, C = {self.C})")
        if self.tau < 0 or self.nu < 0:
            raise InputError("tau and nu must be non-negative")
        if self.L < 1:
            raise InputError("L >= 1 required")
        if self.radius < 0:
            raise InputError("radius must be non-negative")
        if self.samples < 1 or self.workers < 1:
            raise InputError("samples and workers must be positive")
        if self.mode not in ("exact", "sampled"):
            raise InputError(f"mode must be exact or sampled, got {self.mode!r}")
        if self.Lambda < 1:
            raise InputError("Lambda >= 1 required")
        if model is not None:
            self.barrier_spec(model)
        return self

    # -- serialisation -------------------------------------------------------
    def as_dict(self) -> dict:
        out = {}
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            out[f.name] = str(v) if isinstance(v, Fraction) else v
        return out

    def config_hash(self) -> str:
        d = {k: v for k, v in self.as_dict().items() if k not in _VOLATILE}
        blob = json.dumps(d, sort_keys=True, default=str).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def dumps(self) -> str:
        lines = []
        for k, v in self.as_dict().items():
            if v is None:
                continue
            if isinstance(v, list):
                v = ",".join(str(x) for x in v)
            lines.append(f"{k}={v}")
        return "\n".join(lines) + "\n"



def parse_ns(text: str) -> list:
    """``"6-12"``, ``"2,4,8"`` or ``"5"``."""
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            a, b = part.split("-", 1) if not part.startswith("-") else (part, "")
            lo, hi = int(a), int(b)
            if hi < lo:
                raise InputError(f"empty range {part!r}")
            out.extend(range(lo, hi + 1))
        else:
            out.append(int(part))
    return out


_TYPES = {f.name: f.type for f in dataclasses.fields(ExperimentConfig)}


def _coerce(key: str, raw: str):
    t = str(_TYPES[key])
    raw = raw.strip()
    if key == "ns":
        return parse_ns(raw)
    if raw.lower() in ("none", "") and "None" in t:
        return None
    if "Fraction" in t:
        return frac(raw)
    if t.startswith("int"):
        return int(raw)
    return raw


def parse_config_values(text: str, source: str = "<config>") -> dict:
    """Raw ``key=value`` pairs, typed but without derived defaults."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{source}:{lineno}: expected key=value, got {line!r}")
        key, raw = line.split("=", 1)
        key = key.strip()
        if key not in _TYPES:
            raise InputError(f"{source}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _coerce(key, raw)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"{source}:{lineno}: bad value for {key}: {exc}") from None
    return values


def parse_config(text: str, source: str = "<config>") -> ExperimentConfig:
    return ExperimentConfig(**parse_config_values(text, source))


def load_config_values(path) -> dict:
    p = Path(path)
    try:
        return parse_config_values(p.read_text(), str(p))
    except OSError as exc:
        raise InputError(f"cannot read config {p}: {exc}") from None


def load_config(path) -> ExperimentConfig:
    return ExperimentConfig(**load_config_values(path))
