import json
import math
from fractions import Fraction

import numpy as np
import pytest

from src.egorovga.algebra.scalars import RHO
from src.egorovga.core.exceptions import KernelError
from src.egorovga.utils.serialization import (
    dumps,
    format_float,
    load_kernel,
    save_kernel,
    to_jsonable,
)


class TestToJsonable:
    def test_numbers(self):
        """Given mixed numeric types, When converted, Then they become plain JSON values."""
        data = to_jsonable({"c": 1 + 2j, "f": Fraction(1, 3), "n": np.float64(0.5), "i": np.int64(3), "inf": math.inf})
        assert data == {"c": [1.0, 2.0], "f": "1/3", "n": 0.5, "i": 3, "inf": "inf"}

    def test_scalar(self):
        """Given 2 rho, When converted, Then the terms are listed as rows."""
        data = to_jsonable(2 * RHO)
        assert data["truncation_order"] is None
        assert len(data["terms"]) == 1

    def test_output_is_sorted(self):
        """Given keys out of order, When dumped, Then they appear sorted."""
        assert list(json.loads(dumps({"b": 1, "a": 2}))) == ["a", "b"]


class TestFormatting:
    def test_seventeen_significant_digits(self):
        """Given 0.1, When formatted, Then the full repr precision is kept."""
        assert format_float(0.1) == "0.10000000000000001"


class TestKernelFiles:
    def test_save_and_load(self, kernel, tmp_path):
        """Given a kernel, When saved and loaded, Then the polynomial is unchanged."""
        path = tmp_path / "kernel.json"
        save_kernel(kernel, path)
        assert load_kernel(path).poly_coeffs == kernel.poly_coeffs

    def test_missing_file(self, tmp_path):
        """Given a missing path, When loading, Then KernelError is raised."""
        with pytest.raises(KernelError):
            load_kernel(tmp_path / "absent.json")

    def test_invalid_file(self, tmp_path):
        """Given a file that is not JSON, When loading, Then KernelError is raised."""
        path = tmp_path / "kernel.json"
        path.write_text("not json")
        with pytest.raises(KernelError):
            load_kernel(path)

    def test_missing_field(self, tmp_path):
        """Given JSON without coefficients, When loading, Then KernelError is raised."""
        path = tmp_path / "kernel.json"
        path.write_text('{"m": 2}')
        with pytest.raises(KernelError):
            load_kernel(path)

