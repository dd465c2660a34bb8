import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sczip import tensor
from sczip.errors import InvalidContainer, InvalidInput, NonDivisible
from sczip.tensor import FeatureTensor, QuantizedMatrix, QuantParams


def make_tensor(values, dims=None):
    values = np.asarray(values, dtype=np.float32).ravel()
    return FeatureTensor(dims or (values.size,), values)


class TestComputeParams:
    def test_identity_grid(self):
        p = tensor.compute_params(0.0, 255.0, 8)
        assert p.scale == 1.0
        assert p.zero_point == 0

    def test_direct_evaluation(self):
        p = tensor.compute_params(0.0, 7.5, 4)
        assert p.scale == 0.5
        assert p.zero_point == 0

    def test_rounding_half_away_from_zero(self):
        # z = round(1.0 / (2/3)) = round(1.5) -> 2 under half-away-from-zero
        p = tensor.compute_params(-1.0, 1.0, 2)
        assert p.scale == pytest.approx(2.0 / 3.0)
        assert p.zero_point == 2

    def test_degenerate_range(self):
        p = tensor.compute_params(0.0, 0.0, 4)
        assert p.scale == 1.0
        assert p.zero_point == 0
        # Constant nonzero tensors stay exactly representable.
        p = tensor.compute_params(5.0, 5.0, 4)
        assert p.scale == pytest.approx(5.0 / 15.0)
        assert p.zero_point == 0
        p = tensor.compute_params(-3.0, -3.0, 4)
        assert p.scale == pytest.approx(0.2)
        assert p.zero_point == 15

    def test_non_finite_rejected(self):
        with pytest.raises(InvalidInput):
            tensor.compute_params(float("nan"), 1.0, 4)
        with pytest.raises(InvalidInput):
            tensor.compute_params(0.0, float("inf"), 4)

    def test_min_above_max_rejected(self):
        with pytest.raises(InvalidInput):
            tensor.compute_params(2.0, 1.0, 4)

    @pytest.mark.parametrize("q", [1, 9, 0])
    def test_bit_width_domain(self, q):
        with pytest.raises(InvalidInput):
            tensor.compute_params(0.0, 1.0, q)


class TestQuantize:
    def test_single_value(self):
        p = QuantParams(4, 0.5, 0, 0.0, 7.5)
        q, mask = tensor.quantize(make_tensor([3.26]), p)
        assert q[0] == 7  # round(6.52)
        assert not mask[0]

    def test_zero_maps_to_zero_point(self):
        p = QuantParams(4, 0.5, 3, -1.5, 6.0)
        q, mask = tensor.quantize(make_tensor([0.0]), p)
        assert q[0] == 3
        assert mask[0]

    def test_clamp_after_rounding(self):
        # round(1.0/(2/3) + 2) = round(3.5) = 4, one past the 2-bit grid
        p = tensor.compute_params(-1.0, 1.0, 2)
        q, _ = tensor.quantize(make_tensor([1.0]), p)
        assert q[0] == 3

    def test_clamp_totality(self):
        p = QuantParams(4, 0.1, 8, -0.8, 0.7)
        vals = np.array([-1e6, -0.8, 0.0, 0.7, 1e6], dtype=np.float32)
        q, _ = tensor.quantize(make_tensor(vals), p)
        assert q.max() <= 15


class TestDequantize:
    def test_inverse_formula(self):
        p = QuantParams(4, 0.5, 0, 0.0, 7.5)
        q = QuantizedMatrix(1, 1, [7], [False])
        out = tensor.dequantize(q, p, (1,))
        assert out.data[0] == pytest.approx(3.5)

    def test_zero_mask_restores_exact_zero(self):
        p = QuantParams(4, 0.37, 5, -1.85, 3.7)
        q = QuantizedMatrix(1, 2, [5, 7], [True, False])
        out = tensor.dequantize(q, p, (2,))
        assert out.data[0] == 0.0  # masked, even though its symbol is z
        assert out.data[1] == pytest.approx((7 - 5) * 0.37)

    def test_missing_dims_rejected(self):
        p = QuantParams(4, 0.5, 0, 0.0, 7.5)
        q = QuantizedMatrix(1, 1, [7], [False])
        with pytest.raises(InvalidContainer):
            tensor.dequantize(q, p, None)
        with pytest.raises(InvalidContainer):
            tensor.dequantize(q, p, (3,))

    @pytest.mark.parametrize("q_bits", [2, 4, 8])
    def test_round_trip_error_bound(self, q_bits):
        rng = np.random.default_rng(7)
        data = rng.uniform(-2.0, 3.0, 500).astype(np.float32)
        t = make_tensor(data)
        p = tensor.params_for(t, q_bits)
        q, mask = tensor.quantize(t, p)
        out = tensor.dequantize(
            QuantizedMatrix(1, t.size, q, mask), p, t.dims
        )
        assert np.abs(out.data - t.data).max() <= p.scale + 1e-6

    @given(
        st.lists(
            st.floats(-100, 100, width=32, allow_nan=False),
            min_size=1,
            max_size=64,
        ),
        st.integers(2, 8),
    )
    @settings(max_examples=60, deadline=None)
    def test_round_trip_property(self, values, q_bits):
        t = make_tensor(values)
        p = tensor.params_for(t, q_bits)
        q, mask = tensor.quantize(t, p)
        out = tensor.dequantize(QuantizedMatrix(1, t.size, q, mask), p, t.dims)
        nonzero = t.data != 0.0
        if nonzero.any():
            err = np.abs(out.data - t.data.astype(np.float64))[nonzero]
            assert err.max() <= p.scale * (1 + 1e-9) + 1e-6
        assert np.all(out.data[~nonzero] == 0.0)


class TestReshape:
    def test_fig2_configs(self):
        assert tensor.matrix_dims(100352, 784) == (784, 128)
        assert tensor.matrix_dims(100352, 14336) == (14336, 7)

    def test_non_divisible(self):
        with pytest.raises(NonDivisible):
            tensor.matrix_dims(16, 3)

    def test_element_order_preserved(self):
        data = np.arange(12, dtype=np.uint32)
        mask = np.zeros(12, dtype=bool)
        for n in (1, 2, 3, 4, 6, 12):
            q = tensor.reshape(data, mask, n)
            assert (q.n_rows, q.n_cols) == (n, 12 // n)
            assert np.array_equal(q.data, data)


class TestFeatureTensor:
    def test_rejects_nan(self):
        with pytest.raises(InvalidInput):
            make_tensor([1.0, float("nan")])

    def test_rejects_shape_mismatch(self):
        with pytest.raises(InvalidInput):
            FeatureTensor((3, 2), np.zeros(5, dtype=np.float32))


class TestRtfFormat:
    def test_round_trip(self, tmp_path):
        t = make_tensor(np.arange(24, dtype=np.float32) - 5, dims=(2, 3, 4))
        path = tmp_path / "t.rtf"
        tensor.write_rtf(t, path)
        back = tensor.read_rtf(path)
        assert back.dims == t.dims
        assert np.array_equal(back.data, t.data)

    def test_layout(self, tmp_path):
        t = make_tensor([1.0, 2.0], dims=(2,))
        path = tmp_path / "t.rtf"
        tensor.write_rtf(t, path)
        raw = path.read_bytes()
        assert raw[:4] == b"RTF1"
        assert raw[4] == 1
        assert int.from_bytes(raw[5:9], "little") == 2
        assert np.frombuffer(raw, "<f4", offset=9).tolist() == [1.0, 2.0]

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "bad.rtf"
        path.write_bytes(b"NOPE" + bytes(16))
        with pytest.raises(InvalidInput):
            tensor.read_rtf(path)
