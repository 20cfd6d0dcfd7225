from __future__ import annotations

import json

import numpy as np
import pytest

from leolab.serialize import (
    dumps,
    jsonable,
    operator_from_csv,
    operator_from_dict,
    operator_from_json,
    operator_to_csv,
    operator_to_dict,
    operator_to_json,
)

from conftest import random_operator


def test_json_round_trip(rng):
    m = random_operator(rng, 4)
    back = operator_from_json(operator_to_json(m))
    np.testing.assert_allclose(back, m, rtol=1e-14)
    d = operator_to_dict(m)
    assert d["dim"] == 4 and len(d["re"]) == 4 and len(d["im"][0]) == 4


def test_csv_round_trip(rng):
    m = random_operator(rng, 3)
    text = operator_to_csv(m)
    assert len(text.strip().splitlines()) == 3
    np.testing.assert_allclose(operator_from_csv(text), m, rtol=1e-14)


def test_dim_mismatch_rejected():
    with pytest.raises(ValueError):
        operator_from_dict({"dim": 3, "re": [[1, 0], [0, 1]], "im": [[0, 0], [0, 0]]})
    with pytest.raises(ValueError):
        operator_from_dict({"dim": 2, "re": [[1, 0], [0, 1]], "im": [[0, 0]]})


def test_jsonable_rounds_to_15_digits():
    out = jsonable({"a": np.float64(1 / 3), "b": 1 + 2j, "c": np.arange(2), "d": np.bool_(True)})
    assert out["a"] == float("%.15g" % (1 / 3))
    assert out["b"] == {"re": 1.0, "im": 2.0}
    assert out["c"] == [0, 1]
    assert out["d"] is True
    assert json.loads(dumps(out)) == out
