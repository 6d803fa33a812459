"""JSON helpers for kernels, scalars and run artifacts; output is deterministic."""

import json
import math
import numbers
from dataclasses import asdict, is_dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Union

import numpy as np

from ..algebra.mollifier import Kernel
from ..algebra.scalars import AsymptoticScalar
from ..core.exceptions import KernelError, ReportingError
from .logger import LoggerFactory

logger = LoggerFactory.create_logger(__name__)

PathLike = Union[str, Path]


def to_jsonable(value: Any) -> Any:
    """Recursively convert numbers, enums, scalars and dataclasses into JSON values."""
    if isinstance(value, AsymptoticScalar):
        return {"terms": value.to_json(), "truncation_order": _order_to_text(value.truncation_order)}
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, np.generic):
        return to_jsonable(value.item())
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, numbers.Real):
        return _float(float(value))
    if isinstance(value, numbers.Complex):
        return [_float(value.real), _float(value.imag)]
    if isinstance(value, np.ndarray):
        return [to_jsonable(item) for item in value.tolist()]
    if isinstance(value, dict):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, set)):
        return [to_jsonable(item) for item in value]
    if is_dataclass(value):
        return to_jsonable(asdict(value))
    if hasattr(value, "to_dict"):
        return to_jsonable(value.to_dict())
    return str(value)


def _float(value: float):
    return value if math.isfinite(value) else str(value)


def _order_to_text(order):
    return None if order is None else str(order)


def dumps(data: Any) -> str:
    return json.dumps(to_jsonable(data), sort_keys=True, indent=2) + "\n"


def write_json(data: Any, path: PathLike):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dumps(data))
    except OSError as error:
        raise ReportingError(f"Cannot write {path}: {error}") from error
    logger.info(f"Wrote {path}")


def format_float(value: float, digits: int = 17) -> str:
    return f"{value:.{digits}g}"


def save_kernel(kernel: Kernel, path: PathLike):
    write_json(kernel.to_dict(), path)


def load_kernel(path: PathLike) -> Kernel:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError as error:
        raise KernelError(f"Kernel file not found: {path}") from error
    except (OSError, json.JSONDecodeError) as error:
        raise KernelError(f"Cannot read kernel file {path}: {error}") from error
    if not isinstance(data, dict):
        raise KernelError(f"Kernel file {path} does not hold an object")
    return Kernel.from_dict(data)

