import json

import numpy as np
import pytest

from spacefill.field import ScalarField


@pytest.fixture
def field_2x2():
    return ScalarField.from_values((2, 2), [0.0, 1.0, 2.0, 3.0])


@pytest.fixture
def random_field_8x8():
    rng = np.random.default_rng(42)
    return ScalarField.from_array(rng.random((8, 8)))


def write_descriptor(tmp_path, dims, values, name="field.json"):
    raw = tmp_path / "data.raw"
    np.asarray(values, dtype="<f4").tofile(raw)
    desc = tmp_path / name
    desc.write_text(
        json.dumps(
            {
                "dims": list(dims),
                "dtype": "f32",
                "order": "row-major",
                "endianness": "little",
                "data": "data.raw",
            }
        )
    )
    return desc
