"""Text formats for q-series, space manifests and newform eigen-data, plus bundled fixtures.

q-series:  header "W_NUM W_DEN LEVEL PREC", then "n a_n" lines with n strictly
           increasing and at most PREC; omitted indices are zero.
newform:   header "LABEL WEIGHT LEVEL", then "n a_n" lines.
manifest:  header "SPACE W_NUM W_DEN LEVEL PREC", then one series path per
           line, relative to the manifest.
"""

from __future__ import annotations

import os
import re
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Union

from .arith import parse_rat, render_rat
from .errors import DuplicateIndex, ParseError, PrecisionHeaderMismatch
from .qexp import QExpansion
from .spaces import HalfIntegralSpace, NewformData

PathLike = Union[str, os.PathLike]

_INT = re.compile(r"-?\d+")


def _fields(line: str, lineno: int, count: int) -> list[str]:
    parts = line.split()
    if len(parts) != count:
        raise ParseError(f"expected {count} fields, found {len(parts)}", lineno, 1)
    return parts


def _int(text: str, lineno: int, column: int) -> int:
    if not _INT.fullmatch(text):
        raise ParseError(f"expected an integer, found {text!r}", lineno, column)
    return int(text)


def _rat(text: str, lineno: int, column: int) -> Fraction:
    try:
        return parse_rat(text)
    except ValueError:
        raise ParseError(f"expected a rational, found {text!r}", lineno, column) from None


def _column(line: str, index: int) -> int:
    # 1-based column of the index-th whitespace separated field
    pos = 0
    for i, m in enumerate(re.finditer(r"\S+", line)):
        pos = m.start()
        if i == index:
            break
    return pos + 1


def _body_lines(text: str):
    for lineno, line in enumerate(text.split("\n"), start=1):
        if line.strip():
            yield lineno, line


def parse_qseries(text: str) -> QExpansion:
    lines = list(_body_lines(text))
    if not lines:
        raise ParseError("missing header", 1, 1)
    lineno, header = lines[0]
    wn, wd, lev, prec = (_int(x, lineno, _column(header, i)) for i, x in enumerate(_fields(header, lineno, 4)))
    if wd <= 0 or lev <= 0 or prec < 0:
        raise ParseError("header values out of range", lineno, 1)
    coeffs: dict[int, Fraction] = {}
    last = -1
    for lineno, line in lines[1:]:
        n_text, c_text = _fields(line, lineno, 2)
        n = _int(n_text, lineno, _column(line, 0))
        c = _rat(c_text, lineno, _column(line, 1))
        if n == last:
            raise DuplicateIndex(f"index {n} appears twice", lineno, 1)
        if n < last or n < 0:
            raise ParseError(f"index {n} out of order", lineno, 1)
        if n > prec:
            raise PrecisionHeaderMismatch(f"index {n} exceeds header precision {prec}", lineno, 1)
        coeffs[n] = c
        last = n
    return QExpansion(coeffs, prec, Fraction(wn, wd), lev)


def emit_qseries(f: QExpansion, weight: Fraction | None = None, level: int | None = None) -> str:
    weight = weight if weight is not None else f.weight
    level = level if level is not None else f.level
    if weight is None or level is None:
        raise ValueError("weight and level are required to emit a series")
    weight = Fraction(weight)
    out = [f"{weight.numerator} {weight.denominator} {level} {f.prec}"]
    out += [f"{n} {render_rat(c)}" for n, c in sorted(f.coeffs.items())]
    return "\n".join(out) + "\n"


def read_qseries(path: PathLike) -> QExpansion:
    return parse_qseries(Path(path).read_text())


def write_qseries(path: PathLike, f: QExpansion, weight=None, level=None) -> None:
    Path(path).write_text(emit_qseries(f, weight, level))


def parse_newform(text: str) -> NewformData:
    lines = list(_body_lines(text))
    if not lines:
        raise ParseError("missing header", 1, 1)
    lineno, header = lines[0]
    label, w_text, l_text = _fields(header, lineno, 3)
    weight = _int(w_text, lineno, _column(header, 1))
    level = _int(l_text, lineno, _column(header, 2))
    ap: dict[int, Fraction] = {}
    for lineno, line in lines[1:]:
        n_text, c_text = _fields(line, lineno, 2)
        n = _int(n_text, lineno, _column(line, 0))
        if n < 1:
            raise ParseError(f"index {n} must be positive", lineno, 1)
        if n in ap:
            raise DuplicateIndex(f"index {n} appears twice", lineno, 1)
        ap[n] = _rat(c_text, lineno, _column(line, 1))
    data = NewformData(label, weight, level, ap)
    data.validate()
    return data


def emit_newform(data: NewformData) -> str:
    return "\n".join(
        [f"{data.label} {data.weight} {data.level}"] + [f"{n} {render_rat(Fraction(v))}" for n, v in sorted(data.ap.items())]
    ) + "\n"


def load_space(manifest: PathLike) -> HalfIntegralSpace:
    path = Path(manifest)
    lines = list(_body_lines(path.read_text()))
    if not lines:
        raise ParseError("missing header", 1, 1)
    lineno, header = lines[0]
    name, *nums = _fields(header, lineno, 5)
    wn, wd, level, prec = (_int(x, lineno, _column(header, i + 1)) for i, x in enumerate(nums))
    weight = Fraction(wn, wd)
    if weight.denominator != 2:
        raise ParseError("weight must be half-integral", lineno, 1)
    basis = []
    for lineno, line in lines[1:]:
        f = read_qseries(path.parent / line.strip())
        if f.weight != weight or f.level != level:
            raise ParseError(f"{line.strip()} has weight {f.weight} and level {f.level}", lineno, 1)
        if f.prec < prec:
            raise PrecisionHeaderMismatch(f"{line.strip()} has precision {f.prec} < {prec}", lineno, 1)
        basis.append(f)
    return HalfIntegralSpace((weight.numerator - 1) // 2, level, basis, prec, name)


def write_space(directory: PathLike, space: HalfIntegralSpace, names: list[str] | None = None) -> Path:
    """Write every basis series and a manifest; returns the manifest path."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    names = names or [f"b{i + 1}" for i in range(space.dim)]
    w = Fraction(2 * space.k + 1, 2)
    for nm, f in zip(names, space.basis):
        write_qseries(d / f"{nm}.qs", f, w, space.level)
    header = f"{space.name or 'space'} {w.numerator} {w.denominator} {space.level} {space.prec}"
    manifest = d / "manifest.txt"
    manifest.write_text("\n".join([header] + [f"{nm}.qs" for nm in names]) + "\n")
    return manifest


def fixtures_dir() -> Path:
    """Bundled fixture directory, overridable with HALFINT_FIXTURES."""
    env = os.environ.get("HALFINT_FIXTURES")
    if env:
        return Path(env)
    return Path(str(resources.files("halfint") / "fixtures"))


def fixture_path(*parts: str) -> Path:
    return fixtures_dir().joinpath(*parts)
