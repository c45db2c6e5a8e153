"""System config files and the built-in corpus of known solutions.

A system config is a flat TOML document::

    m = 3
    n1 = 2
    m1 = 1
    n2 = 2
    m2 = 1
    c = ["0", "pi", "pi"]
    symbols = ["symbol g depends [z2, z3] shift (0, pi, pi) adds 0"]

    [models]
    g = "sin(z2 + z3)"

Shift components are constant expressions (numbers are accepted too).
``symbols`` lines use the declaration syntax of :mod:`fermat_pdde.parser`;
``[models]`` gives each symbol a concrete expression used only for numeric
sampling.  A corpus entry is a directory holding ``spec.toml``,
``f1.expr``, ``f2.expr`` and ``expected.json``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping

import tomli

from .calculus import ShiftVector, SystemSpec
from .expr import Expr, SymbolRegistry
from .families import classify
from .normal_form import VerificationReport, verify_system
from .parser import parse_constant, parse_declarations, parse_expr
from .scalar import Scalar


@dataclass
class SystemConfig:
    spec: SystemSpec
    symbols: SymbolRegistry
    models: dict = field(default_factory=dict)  # OpaqueSymbol -> Expr
    single: bool = False

    def parse(self, text: str) -> Expr:
        return parse_expr(text, self.spec.m, self.symbols)


def system_config(doc: Mapping) -> SystemConfig:
    """Build a :class:`SystemConfig` from a parsed TOML mapping."""
    missing = [k for k in ("m", "n1", "m1", "n2", "m2", "c") if k not in doc]
    if missing:
        raise ValueError(f"system config is missing {', '.join(missing)}")
    m = int(doc["m"])
    c = ShiftVector([parse_constant(x, m) if isinstance(x, str) else Scalar.of(x) for x in doc["c"]])
    spec = SystemSpec(m, int(doc["n1"]), int(doc["n2"]), int(doc["m1"]), int(doc["m2"]), c)
    decls = doc.get("symbols", [])
    registry = parse_declarations(decls if isinstance(decls, str) else "\n".join(decls), m)
    models = {}
    for name, text in dict(doc.get("models", {})).items():
        if name not in registry:
            raise ValueError(f"model given for undeclared symbol {name!r}")
        models[registry[name]] = parse_expr(str(text), m)
    return SystemConfig(spec, registry, models, bool(doc.get("single", False)))


def load_system_config(path: str | Path) -> SystemConfig:
    with open(path, "rb") as fh:
        return system_config(tomli.load(fh))


@dataclass
class CorpusEntry:
    name: str
    config: SystemConfig
    f1_text: str
    f2_text: str
    expected: dict

    @property
    def f1(self) -> Expr:
        return self.config.parse(self.f1_text)

    @property
    def f2(self) -> Expr:
        return self.config.parse(self.f2_text)

    def verify(self, seed: int = 0) -> VerificationReport:
        return verify_system(self.config.spec, self.f1, self.f2, self.config.models or None, seed=seed)

    def check(self, report: VerificationReport) -> list[str]:
        """Mismatches between ``report`` (plus the classifier) and expected.json."""
        out = []
        for key in ("verdict", "mode"):
            want = self.expected.get(key)
            got = getattr(report, key)
            if want is not None and want != got:
                out.append(f"{key}: expected {want}, got {got}")
        want = self.expected.get("classification")
        if want is not None:
            got = classify(*self.config.spec.quadruple).tag
            if got != want:
                out.append(f"classification: expected {want}, got {got}")
        return out


def corpus_root() -> Path:
    return Path(str(resources.files("fermat_pdde") / "corpus"))


def load_entry(path: str | Path) -> CorpusEntry:
    path = Path(path)
    config = load_system_config(path / "spec.toml")
    expected = json.loads((path / "expected.json").read_text())
    return CorpusEntry(
        path.name,
        config,
        (path / "f1.expr").read_text().strip(),
        (path / "f2.expr").read_text().strip(),
        expected,
    )


def load_corpus(root: str | Path | None = None) -> list[CorpusEntry]:
    """Every entry under ``root`` (default: the bundled corpus), in name order."""
    root = Path(root) if root is not None else corpus_root()
    return [load_entry(p) for p in sorted(root.iterdir()) if (p / "spec.toml").is_file()]
