"""Family corpus loading and validation."""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .algebra import MultiPoly, WeightSystem, milnor_orlik, parse_polynomial
from .curvehunt import BSFamilyShape


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class FamilyRecord:
    id: str
    kind: str = "hypersurface"
    vars: tuple = ()
    param: str | None = None
    poly_text: str = ""
    weights: WeightSystem | None = None
    mu: int | None = None
    shape: BSFamilyShape | None = None
    real: bool = False
    exploratory: bool = False
    notes: str = ""
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def all_vars(self) -> list[str]:
        return list(self.vars) + ([self.param] if self.param else [])

    @property
    def polynomial(self) -> MultiPoly:
        return parse_polynomial(self.poly_text, self.all_vars)

    def floats(self, key: str, default=None) -> list[float] | None:
        raw = self.extra.get(key)
        return default if raw is None else [float(v) for v in raw.split()]

    def validate(self) -> None:
        if self.kind == "spiral":
            return
        try:
            p = self.polynomial
        except Exception as exc:
            raise CorpusError(f"{self.id}: polynomial does not parse: {exc}") from exc
        if self.real and not p.is_real():
            raise CorpusError(f"{self.id}: marked real but has complex coefficients")
        if self.weights is not None:
            if not self.weights.certifies(p):
                raise CorpusError(f"{self.id}: Euler identity fails for weights {self.weights}")
            if self.mu is not None and milnor_orlik(self.weights) != self.mu:
                raise CorpusError(f"{self.id}: Milnor number {milnor_orlik(self.weights)} != recorded {self.mu}")
        if self.shape is not None and self.shape.polynomial(self.all_vars) != p:
            raise CorpusError(f"{self.id}: shape {self.shape} does not match the polynomial")


def _weights(text: str, vars, param) -> WeightSystem:
    try:
        left, right = text.split(";")
        ws = tuple(int(w) for w in left.split())
        d = int(right)
    except ValueError as exc:
        raise CorpusError(f"bad weight spec {text!r}") from exc
    if len(ws) != len(vars):
        raise CorpusError(f"weight spec {text!r} does not match vars {vars}")
    return WeightSystem(tuple(vars), ws, d, param)


_KNOWN = {"vars", "param", "poly", "weights", "mu", "shape", "real", "exploratory", "notes", "kind"}


def _record(section: str, sec: configparser.SectionProxy) -> FamilyRecord:
    fid = section.split(None, 1)[1].strip()
    kind = sec.get("kind", "hypersurface")
    vars = tuple(sec.get("vars", "").split())
    param = sec.get("param") or None
    weights = _weights(sec["weights"], vars, param) if "weights" in sec else None
    shape = BSFamilyShape(*(int(v) for v in sec["shape"].split())) if "shape" in sec else None
    rec = FamilyRecord(
        id=fid,
        kind=kind,
        vars=vars,
        param=param,
        poly_text=sec.get("poly", ""),
        weights=weights,
        mu=sec.getint("mu") if "mu" in sec else None,
        shape=shape,
        real=sec.getboolean("real", False),
        exploratory=sec.getboolean("exploratory", False),
        notes=sec.get("notes", ""),
        extra={k: v for k, v in sec.items() if k not in _KNOWN},
    )
    if kind == "hypersurface" and (not vars or not rec.poly_text):
        raise CorpusError(f"{fid}: vars and poly are required")
    return rec


def default_corpus_path() -> Path:
    return Path(str(resources.files("stratlab").joinpath("data/corpus.cfg")))


def load_corpus(path: str | Path | None = None) -> dict[str, FamilyRecord]:
    cp = configparser.ConfigParser(interpolation=None)
    p = Path(path) if path else default_corpus_path()
    if not cp.read(p, encoding="utf-8"):
        raise CorpusError(f"cannot read corpus {p}")
    out = {}
    for section in cp.sections():
        if not section.startswith("family "):
            raise CorpusError(f"unexpected section [{section}]")
        rec = _record(section, cp[section])
        rec.validate()
        out[rec.id] = rec
    return out


def spiral_beta(rec: FamilyRecord):
    """``beta`` stored as a rational multiple of pi."""
    from .algebra import ctx

    frac = Fraction(rec.extra.get("beta", "1/4"))
    return ctx.pi * frac.numerator / frac.denominator
