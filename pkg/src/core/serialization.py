"""JSON and CSV encodings of workbench values.

Integers travel as decimal strings so that arbitrary-precision values
survive any JSON reader; rationals as "p/q" strings.
"""

import csv
import io
import json
import math
from collections.abc import Iterable, Sequence
from fractions import Fraction
from pathlib import Path
from typing import Any, TypeVar

from pydantic import BaseModel, ConfigDict, ValidationError, field_validator

from src.core.degeneration import AsymptoticFit, AsymptoticSample
from src.core.exceptions import InputError
from src.core.heisenberg import GZElement
from src.core.modular_numerics import ModularValue, SiegelPoint, modular_norm
from src.core.picard import DivisorClass
from src.core.symplectic_core import HVector, VClass, Wedge3

CSV_COLUMNS = ("t", "log_t", "loglog_t", "value")


class _IntegerVectorDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    genus: int

    @staticmethod
    def _parse(values: list[str | int]) -> list[int]:
        if not isinstance(values, list):
            raise ValueError("expected a list of integers")
        parsed = []
        for v in values:
            if isinstance(v, bool | float):
                raise ValueError(f"{v!r} is not an integer")
            parsed.append(int(v))
        return parsed


class HVectorDocument(_IntegerVectorDocument):
    """{"genus": g, "coords": ["<int>", ...]}"""

    coords: list[int]

    @field_validator("coords", mode="before")
    @classmethod
    def parse_coords(cls, v: list[str | int]) -> list[int]:
        return cls._parse(v)

    def to_value(self) -> HVector:
        return HVector(self.genus, tuple(self.coords))


class Wedge3Document(_IntegerVectorDocument):
    """{"genus": g, "coeffs": ["<int>", ...]}"""

    coeffs: list[int]

    @field_validator("coeffs", mode="before")
    @classmethod
    def parse_coeffs(cls, v: list[str | int]) -> list[int]:
        return cls._parse(v)

    def to_value(self) -> Wedge3:
        return Wedge3(self.genus, tuple(self.coeffs))


def hvector_to_json(x: HVector) -> dict[str, Any]:
    return {"genus": x.genus, "coords": [str(c) for c in x.coords]}


def wedge3_to_json(w: Wedge3) -> dict[str, Any]:
    return {"genus": w.genus, "coeffs": [str(c) for c in w.coeffs]}


def gz_element_to_json(a: GZElement) -> dict[str, Any]:
    return {"v": wedge3_to_json(a.v.lift), "n": str(a.n)}


D = TypeVar("D", bound=_IntegerVectorDocument)


def _read_document(path: Path, model: type[D]) -> D:
    try:
        text = path.read_text()
    except OSError as e:
        raise InputError(f"Cannot read {path}: {e}") from e
    try:
        return model.model_validate_json(text)
    except ValidationError as e:
        name = model.__name__.removesuffix("Document")
        raise InputError(f"Invalid {name} document in {path}: {e}") from e


def load_hvector(path: Path) -> HVector:
    """Read an H-vector from a JSON file.

    Raises:
        InputError: If the file is missing or is not an HVector document.
    """
    return _read_document(path, HVectorDocument).to_value()


def load_wedge3(path: Path) -> Wedge3:
    """Read a Wedge3 lift from a JSON file.

    Raises:
        InputError: If the file is missing or is not a Wedge3 document.
    """
    return _read_document(path, Wedge3Document).to_value()


def load_vclass(path: Path) -> VClass:
    return VClass(load_wedge3(path))


def _complex_pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def siegel_point_to_json(omega: SiegelPoint) -> list[list[list[float]]]:
    return [[_complex_pair(z) for z in row] for row in omega.omega]


def modular_value_to_json(v: ModularValue) -> dict[str, Any]:
    return {
        "omega": siegel_point_to_json(v.point),
        "value": _complex_pair(v.value),
        "weight": v.weight,
        "norm": modular_norm(v),
    }


def fraction_to_json(x: Fraction) -> str:
    return str(x)


def divisor_class_to_json(cls: DivisorClass) -> dict[str, Any]:
    return {
        "basis": list(cls.basis),
        "coeffs": {label: fraction_to_json(v) for label, v in cls.coeffs.items()},
    }


def fit_to_json(fit: AsymptoticFit) -> dict[str, float]:
    return {
        "coeff_log": fit.coeff_log,
        "coeff_loglog": fit.coeff_loglog,
        "coeff_const": fit.coeff_const,
        "residual": fit.residual,
    }


def format_t(log_abs_t: float) -> str:
    """Scientific notation for |t| = exp(log_abs_t), exact past underflow."""
    log10 = log_abs_t / math.log(10)
    exponent = math.floor(log10)
    mantissa = 10 ** (log10 - exponent)
    if mantissa >= 9.9999999995:
        mantissa, exponent = 1.0, exponent + 1
    return f"{mantissa:.9f}e{exponent:+d}"


def sample_to_row(sample: AsymptoticSample) -> dict[str, str]:
    return {
        "t": format_t(sample.log_abs_t),
        "log_t": repr(sample.log_abs_t),
        "loglog_t": repr(sample.loglog),
        "value": repr(sample.value),
    }


def samples_to_json(samples: Sequence[AsymptoticSample]) -> list[dict[str, float]]:
    return [
        {"log_t": s.log_abs_t, "loglog_t": s.loglog, "value": s.value}
        for s in samples
    ]


def samples_to_csv(samples: Iterable[AsymptoticSample]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for sample in samples:
        writer.writerow(sample_to_row(sample))
    return buffer.getvalue()


def _parse_log_t(row: dict[str, str]) -> float:
    if row.get("log_t"):
        return float(row["log_t"])
    mantissa, _, exponent = row["t"].lower().partition("e")
    return math.log(float(mantissa)) + int(exponent or 0) * math.log(10)


def samples_from_csv(text: str) -> list[AsymptoticSample]:
    """Parse samples from CSV with a value column and log_t or t.

    Raises:
        InputError: If a column is missing or a cell is not a number.
    """
    reader = csv.DictReader(io.StringIO(text))
    fields = set(reader.fieldnames or ())
    if "value" not in fields or not fields & {"t", "log_t"}:
        raise InputError("CSV needs a value column and a t or log_t column")
    samples = []
    for line, row in enumerate(reader, start=2):
        try:
            samples.append(AsymptoticSample(_parse_log_t(row), float(row["value"])))
        except (TypeError, ValueError) as e:
            raise InputError(f"Bad number on CSV line {line}: {e}") from e
    return samples


def load_samples(path: Path) -> list[AsymptoticSample]:
    try:
        return samples_from_csv(path.read_text())
    except OSError as e:
        raise InputError(f"Cannot read {path}: {e}") from e


def dump_document(document: dict[str, Any]) -> str:
    """Deterministic JSON rendering: sorted keys, two-space indent."""
    return json.dumps(document, indent=2, sort_keys=True) + "\n"
