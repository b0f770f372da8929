"""Reading and writing model files.

A model file is INI-style text (see docs/model_format.md)::

    [ring]
    vars = x, y, z, w
    relations = x*y - z*w

    [potential]
    W = w

    [probes]
    points = 0,0,1,0; 0,0,2,0
    primes = x,y,w

    [mf K]
    phi1 = w, x; -y, 1-z
    phi0 = 1-z, -x; y, w

    [morphism f]
    source = K
    target = K
    f1 = ...
    f0 = ...

Matrices are rows separated by ';' with entries separated by ','.
"""

from __future__ import annotations

import configparser
import os
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Dict, List, Optional

from .expr import ParseError, PolyRing, UnknownVariableError
from .localize import PrimeIdeal, RationalPoint, parse_point, parse_prime
from .matrix import Matrix
from .mfcore import (FactorizationError, LGModel, MatrixFactorization, MFMorphism,
                     MorphismError)


class ModelFileError(ValueError):
    """A model file failed to parse or validate; carries line and column."""

    def __init__(self, message, path=None, line=None, column=None):
        self.path = path
        self.line = line
        self.column = column
        where = path or "<model>"
        if line is not None:
            where += f":{line}"
            if column is not None:
                where += f":{column}"
        super().__init__(f"{where}: {message}")


@dataclass
class ModelFile:
    model: LGModel
    factorizations: Dict[str, MatrixFactorization] = field(default_factory=dict)
    morphisms: Dict[str, MFMorphism] = field(default_factory=dict)
    points: List[RationalPoint] = field(default_factory=list)
    primes: List[PrimeIdeal] = field(default_factory=list)
    source: Optional[str] = None

    def mf(self, name: str) -> MatrixFactorization:
        try:
            return self.factorizations[name]
        except KeyError:
            raise KeyError(f"no factorization named {name!r}; "
                           f"known: {', '.join(sorted(self.factorizations)) or 'none'}") from None

    def morphism(self, name: str) -> MFMorphism:
        try:
            return self.morphisms[name]
        except KeyError:
            raise KeyError(f"no morphism named {name!r}; "
                           f"known: {', '.join(sorted(self.morphisms)) or 'none'}") from None


def builtin_models() -> List[str]:
    root = resources.files("lgmf") / "models"
    return sorted(p.name[:-3] for p in root.iterdir() if p.name.endswith(".lg"))


def _builtin_text(name: str) -> Optional[str]:
    stem = name[:-3] if name.endswith(".lg") else name
    res = resources.files("lgmf") / "models" / f"{stem}.lg"
    if res.is_file():
        return res.read_text()
    return None


def resolve_model_text(spec: str):
    """Return (text, label) for a path or a builtin model name.

    A path that does not exist falls back to the builtin model with the same
    base name, so ``examples/cone4.lg`` works from any directory.
    """
    if os.path.isfile(spec):
        with open(spec, encoding="utf-8") as fh:
            return fh.read(), spec
    text = _builtin_text(os.path.basename(spec))
    if text is not None:
        return text, spec
    raise ModelFileError(f"no such model file or builtin model (builtins: "
                         f"{', '.join(builtin_models())})", spec)


class _Locator:
    """Maps (section, key) to the 1-based line of its value in the text."""

    def __init__(self, text: str):
        self.lines = text.splitlines()

    def find(self, section: str, key: str):
        cur = None
        head = re.compile(r"^\s*\[(.+?)\]\s*$")
        keyre = re.compile(r"^\s*" + re.escape(key) + r"\s*[=:]\s?", re.IGNORECASE)
        for i, line in enumerate(self.lines, start=1):
            m = head.match(line)
            if m:
                cur = m.group(1).strip()
                continue
            if cur == section:
                k = keyre.match(line)
                if k:
                    return i, k.end() + 1
        return None, None


def _split(text: str, sep: str) -> List[str]:
    text = text.strip()
    if not text:
        return []
    return [t.strip() for t in text.split(sep)]


def _parse_matrix(ring: PolyRing, text: str, nrows: int, ncols: int, err) -> Matrix:
    rows = [r for r in _split(text, ";")]
    if not rows:
        if nrows and ncols:
            raise err("empty matrix but ranks require entries")
        return Matrix.zeros(ring, nrows, ncols)
    out = []
    offset = 0
    for r in rows:
        entries = [e.strip() for e in r.split(",")]
        row = []
        for e in entries:
            try:
                row.append(ring.parse(e))
            except ParseError as exc:
                raise err(str(exc), offset + exc.position) from None
            except UnknownVariableError as exc:
                raise err(str(exc)) from None
        offset += len(r) + 1
        out.append(row)
    widths = {len(r) for r in out}
    if len(widths) != 1:
        raise err("rows have different lengths")
    m = Matrix(ring, out, widths.pop())
    if m.shape != (nrows, ncols):
        raise err(f"matrix has shape {m.shape}, expected {(nrows, ncols)}")
    return m


def _matrix_shape(text: str):
    rows = _split(text, ";")
    if not rows:
        return 0, None
    return len(rows), len(rows[0].split(","))


def parse_model(text: str, path: str = None) -> ModelFile:
    cp = configparser.ConfigParser(interpolation=None, comment_prefixes=("#",),
                                   inline_comment_prefixes=None, strict=True)
    cp.optionxform = str
    try:
        cp.read_string(text, source=path or "<model>")
    except configparser.Error as exc:
        line = getattr(exc, "lineno", None)
        raise ModelFileError(exc.message if hasattr(exc, "message") else str(exc),
                             path, line) from None
    loc = _Locator(text)

    def err_at(section, key):
        line, col0 = loc.find(section, key)

        def make(message, offset=None):
            col = None if col0 is None else col0 + (offset or 0)
            return ModelFileError(f"[{section}] {key}: {message}", path, line, col)
        return make

    def get(section, key, required=True, default=""):
        if not cp.has_section(section) or not cp.has_option(section, key):
            if required:
                raise ModelFileError(f"missing [{section}] {key}", path)
            return default
        return cp.get(section, key)

    names = _split(get("ring", "vars"), ",")
    if not names or any(not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", n) for n in names):
        raise err_at("ring", "vars")("variables must be identifiers")
    if len(set(names)) != len(names):
        raise err_at("ring", "vars")("duplicate variable")
    ring = PolyRing(names)

    def poly(section, key, text):
        try:
            return ring.parse(text)
        except ParseError as exc:
            raise err_at(section, key)(str(exc), exc.position) from None
        except UnknownVariableError as exc:
            raise err_at(section, key)(str(exc)) from None

    relations = [poly("ring", "relations", r) for r in _split(get("ring", "relations", False), ",")]
    W = poly("potential", "W", get("potential", "W"))
    model = LGModel(ring, relations, W)
    mfile = ModelFile(model, source=path)

    for p in _split(get("probes", "points", False), ";"):
        try:
            mfile.points.append(parse_point(p).check_on(model))
        except ValueError as exc:
            raise err_at("probes", "points")(str(exc)) from None
    for p in _split(get("probes", "primes", False), ";"):
        try:
            mfile.primes.append(parse_prime(p, ring).check_on(model))
        except ValueError as exc:
            raise err_at("probes", "primes")(str(exc)) from None

    for section in cp.sections():
        m = re.fullmatch(r"mf\s+(\S+)", section)
        if not m:
            continue
        name = m.group(1)
        V = poly(section, "potential", get(section, "potential", False, str(W)))
        t1, t0 = get(section, "phi1", False), get(section, "phi0", False)
        r1, c1 = _matrix_shape(t1)
        r0, c0 = _matrix_shape(t0)
        n0 = int(get(section, "n0", False, str(r1 if r1 else (c0 or 0))))
        n1 = int(get(section, "n1", False, str(r0 if r0 else (c1 or 0))))
        phi1 = _parse_matrix(ring, t1, n0, n1, err_at(section, "phi1"))
        phi0 = _parse_matrix(ring, t0, n1, n0, err_at(section, "phi0"))
        try:
            mfile.factorizations[name] = MatrixFactorization(model, V, phi1, phi0)
        except FactorizationError as exc:
            raise err_at(section, "phi0")(f"factorization {name!r} is invalid: {exc}") from None

    for section in cp.sections():
        m = re.fullmatch(r"morphism\s+(\S+)", section)
        if not m:
            continue
        name = m.group(1)
        try:
            src = mfile.mf(get(section, "source"))
            tgt = mfile.mf(get(section, "target"))
        except KeyError as exc:
            raise err_at(section, "source")(str(exc.args[0])) from None
        f1 = _parse_matrix(ring, get(section, "f1", False), tgt.n1, src.n1, err_at(section, "f1"))
        f0 = _parse_matrix(ring, get(section, "f0", False), tgt.n0, src.n0, err_at(section, "f0"))
        try:
            mfile.morphisms[name] = MFMorphism(src, tgt, f1, f0)
        except (MorphismError, ValueError) as exc:
            raise err_at(section, "f0")(f"morphism {name!r} is invalid: {exc}") from None
    return mfile


def load_model(spec: str) -> ModelFile:
    text, label = resolve_model_text(spec)
    return parse_model(text, label)


def format_matrix(m: Matrix) -> str:
    return "; ".join(", ".join(str(e) for e in row) for row in m.rows)


def dump_factorization(name: str, F: MatrixFactorization) -> str:
    lines = [f"[mf {name}]", f"potential = {F.potential}",
             f"n1 = {F.n1}", f"n0 = {F.n0}",
             f"phi1 = {format_matrix(F.phi1)}", f"phi0 = {format_matrix(F.phi0)}"]
    return "\n".join(lines) + "\n"
