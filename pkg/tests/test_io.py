import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zygmund import io
from zygmund.kernels import bump_mollifier, spectral_pair, wavelet_from_mollifier
from zygmund.signals import (
    ConstantLeftRight,
    Periodic,
    PolynomialExtension,
    Signal,
    Zero,
    gen_cantor_staircase,
    gen_cosines,
)
from zygmund.transform import cwt

finite = st.floats(allow_nan=False, allow_infinity=False, width=64, min_value=-1e300, max_value=1e300)
extensions = st.sampled_from(
    [Zero(), Periodic(), ConstantLeftRight(0.0, 1.0), PolynomialExtension((1.0, -0.5, 2.0))]
)


@settings(max_examples=40, deadline=None)
@given(st.lists(finite, min_size=1, max_size=30), finite, st.floats(1e-6, 1e3), extensions, st.sampled_from(io.FORMATS))
def test_signal_roundtrip(vals, x0, dx, ext, form):
    s = Signal(np.array(vals), x0, dx, ext, {"note": "x", "k": 3})
    back = io.signal_from_text(io.signal_to_text(s, form), form)
    assert back == s
    assert np.array_equal(back.samples, s.samples)
    assert back.info == s.info


def test_csv_layout():
    u = gen_cantor_staircase(2, 1 / 3, 4, 9)[0]
    text = io.signal_to_text(u, "csv")
    lines = text.splitlines()
    assert lines[0].startswith("# ")
    assert "x,value" in lines
    row = lines[lines.index("x,value") + 1]
    assert row == "0,0"
    assert any(l.startswith("# extension=") for l in lines)


def test_seventeen_digits():
    assert io.fmt(1 / 3) == "0.33333333333333331"
    assert float(io.fmt(np.pi)) == np.pi


def test_file_roundtrip(tmp_path):
    u = gen_cosines([1.0, 4.0], n=64)
    for form in io.FORMATS:
        p = tmp_path / f"sig.{form}"
        io.write_signal(u, str(p))
        assert io.read_signal(str(p)) == u
    with pytest.raises(ValueError):
        io.write_signal(u, str(tmp_path / "sig.txt"))


@pytest.mark.parametrize("form", io.FORMATS)
def test_kernel_roundtrip(form):
    for k in (bump_mollifier(1.0, 2, 257), wavelet_from_mollifier(bump_mollifier(1.0, 0, 257))):
        back = io.kernel_from_text(io.kernel_to_text(k, form), form)
        assert np.array_equal(back.samples, k.samples)
        assert (back.kind, back.moment_order, back.tail_bound) == (k.kind, k.moment_order, k.tail_bound)
        assert back.x0 == k.x0 and back.dx == k.dx


def test_spectral_kernel_metadata():
    k = spectral_pair(0.25, 4.0, n_freq=2**10).chi_kernel
    d = json.loads(io.kernel_to_text(k, "json"))
    assert d["support_radius"] is None and d["tail_bound"] == k.tail_bound


def test_scalefield_formats():
    u = gen_cosines([2.0], n=128)
    fld = cwt(u, wavelet_from_mollifier(bump_mollifier()), [0.8, 0.4, 0.2])
    recs = [json.loads(l) for l in io.scalefield_to_text(fld, "ndjson").splitlines()]
    assert len(recs) == 4
    assert [r["r"] for r in recs[1:]] == fld.scales.tolist()
    assert recs[2]["S"] == fld.sup_per_scale[1]
    assert len(recs[1]["row"]) == u.n
    csv = io.scalefield_to_text(fld, "csv").splitlines()
    header = [l for l in csv if not l.startswith("#")][0].split(",")
    assert header[0] == "x" and len(header) == 4
    d = json.loads(io.scalefield_to_text(fld, "json"))
    assert np.allclose(d["values"], fld.values)


def test_json_is_deterministic_and_finite_safe():
    a = io.to_json({"b": float("inf"), "a": np.float64(1.5), "c": np.arange(3)})
    assert a == io.to_json({"c": [0, 1, 2], "a": 1.5, "b": float("inf")})
    assert json.loads(a)["b"] == "inf"


def test_atomic_write_leaves_no_temp(tmp_path):
    p = tmp_path / "d" / "out.txt"
    io.atomic_write(str(p), "hello\n")
    assert p.read_text() == "hello\n"
    assert [f.name for f in p.parent.iterdir()] == ["out.txt"]
