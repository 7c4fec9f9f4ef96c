import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from landaupol import formats
from landaupol.fitting import PeakList
from landaupol.formats import (
    AxisOrderError,
    CountMismatchError,
    FormatError,
    MalformedRowError,
    TraceData,
    VersionError,
)
from landaupol.grids import Grid1D, ResponseMap
from landaupol.photoresponse import DecayLocus
from landaupol.render import pgm_bytes, render_map, to_pixels, value_range

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@settings(max_examples=50)
@given(st.lists(st.floats(1e-3, 1e3), min_size=0, max_size=200, unique=True), st.data())
def test_trace_round_trip(Bs, data):
    B = np.sort(np.array(Bs, dtype=float))
    rho = data.draw(arrays(np.float64, len(B), elements=finite))
    tr = TraceData(B, rho, {"eta": "0.2", "config": '{"a": 1}'})
    back = formats.parse_trace(formats.serialize_trace(tr))
    assert back.B.tobytes() == B.tobytes()
    assert back.rho.tobytes() == rho.tobytes()
    assert back.meta == tr.meta


def test_trace_2000_points_bit_identical():
    rng = np.random.default_rng(0)
    B = np.linspace(0.05, 1.2, 2000)
    rho = rng.standard_normal(2000) * 10 ** rng.uniform(-300, 300, 2000)
    text = formats.serialize_trace(TraceData(B, rho))
    back = formats.parse_trace(text)
    assert back.rho.tobytes() == rho.tobytes()
    assert formats.serialize_trace(back) == text


def test_empty_trace_is_valid():
    tr = formats.parse_trace("# trace-v1\nB_tesla,rho_ohm\n")
    assert len(tr.B) == 0 and len(tr.rho) == 0
    assert len(formats.parse_trace("# trace-v1\n").B) == 0


def test_trace_errors_carry_line_numbers():
    with pytest.raises(VersionError):
        formats.parse_trace("# trace-v2\n")
    with pytest.raises(VersionError):
        formats.parse_trace("")
    with pytest.raises(MalformedRowError) as e:
        formats.parse_trace("# trace-v1\nB_tesla,rho_ohm\n0.1,1\n0.2,x\n")
    assert e.value.line == 4
    with pytest.raises(MalformedRowError):
        formats.parse_trace("# trace-v1\n0.1,1,2\n")
    with pytest.raises(AxisOrderError) as e:
        formats.parse_trace("# trace-v1\n0.2,1\n0.1,1\n")
    assert e.value.line == 3
    with pytest.raises(AxisOrderError):
        formats.serialize_trace(TraceData(np.array([0.2, 0.1]), np.array([1.0, 1.0])))


@settings(max_examples=40)
@given(st.integers(1, 12), st.integers(1, 12), st.data())
def test_map_round_trip(nB, nf, data):
    nB, nf = max(nB, 2), max(nf, 2)
    vals = data.draw(arrays(np.float64, (nB, nf), elements=finite))
    rmap = ResponseMap(Grid1D(0.1, 1.3, nB), Grid1D(60e9, 600e9, nf), vals, "photoresponse", "ohm")
    back = formats.parse_map(formats.serialize_map(rmap, {"model": "hopfield"}))
    assert back.values.tobytes() == vals.tobytes()
    assert back.b_axis == rmap.b_axis and back.f_axis == rmap.f_axis
    assert back.quantity == "photoresponse" and back.units == "ohm"


def _small_map_text():
    rmap = ResponseMap(Grid1D(0.1, 0.2, 2), Grid1D(1e11, 2e11, 3), np.arange(6.0).reshape(2, 3), "transmission", "1")
    return formats.serialize_map(rmap)


def test_map_count_mismatch_names_counts():
    lines = _small_map_text().splitlines(keepends=True)
    with pytest.raises(CountMismatchError) as e:
        formats.parse_map("".join(lines[:-1]))
    assert (e.value.expected, e.value.actual) == (6, 5)
    assert "expected 6" in str(e.value) and "found 5" in str(e.value)
    with pytest.raises(CountMismatchError) as e:
        formats.parse_map("".join(lines) + "1,2,7\n")
    assert e.value.actual == 7


def test_map_order_and_range_errors():
    text = _small_map_text()
    with pytest.raises(MalformedRowError):
        formats.parse_map(text.replace("0,1,1\n", "0,7,1\n"))
    swapped = text.replace("0,1,1\n0,2,2\n", "0,2,2\n0,1,1\n")
    with pytest.raises(MalformedRowError, match="row-major"):
        formats.parse_map(swapped)
    with pytest.raises(AxisOrderError):
        formats.parse_map(text.replace("b_axis=0.10000000000000001,0.20000000000000001", "b_axis=0.3,0.2"))
    with pytest.raises(VersionError):
        formats.parse_map(text.replace("# map-v1", "# map-v0"))
    with pytest.raises(FormatError):
        formats.parse_map(text.replace("# quantity=transmission\n", ""))


@settings(max_examples=40)
@given(st.lists(st.tuples(st.floats(1e-3, 10), st.floats(1e9, 1e12), st.floats(0.1, 10)), max_size=50))
def test_peaks_round_trip(rows):
    arr = np.array(rows, dtype=float).reshape(-1, 3)
    p = PeakList(arr[:, 0], arr[:, 1], arr[:, 2], source="test")
    back = formats.parse_peaks(formats.serialize_peaks(p))
    for name in ("B", "f", "weight"):
        assert getattr(back, name).tobytes() == getattr(p, name).tobytes()
    assert back.source == "test"


def test_peaks_reject_invalid_rows():
    with pytest.raises(FormatError):
        formats.parse_peaks("# peaks-v1\n0.1,-5,1\n")
    with pytest.raises(MalformedRowError):
        formats.parse_peaks("# peaks-v1\n0.1,5\n")


def test_loci_round_trip():
    loci = [DecayLocus(2, "UP", 0.2636002881902624, 2.2e11), DecayLocus(3, "LP", 0.5, 1e11 / 3)]
    assert formats.parse_loci(formats.serialize_loci(loci, {"model": "coupled"})) == loci
    with pytest.raises(MalformedRowError):
        formats.parse_loci("# loci-v1\n2,XP,0.1,1\n")


def test_atomic_write_leaves_no_temp(tmp_path):
    p = tmp_path / "a.csv"
    formats.atomic_write(p, "x\n")
    formats.atomic_write(p, "y\n")
    assert p.read_text() == "y\n"
    assert [q.name for q in tmp_path.iterdir()] == ["a.csv"]


@settings(max_examples=100)
@given(arrays(np.float64, 50, elements=st.floats(-1e6, 1e6)), st.booleans())
def test_renderer_monotone(v, diverging):
    lo, hi = value_range(v, diverging)
    pix = to_pixels(v, lo, hi)
    order = np.argsort(v, kind="stable")
    assert np.all(np.diff(pix[order].astype(int)) >= 0)


def test_renderer_diverging_zero_is_128():
    v = np.array([-3.0, 0.0, 1.0, 3.0])
    lo, hi = value_range(v, True)
    assert (lo, hi) == (-3.0, 3.0)
    assert list(to_pixels(v, lo, hi)) == [0, 128, 170, 255]
    assert list(to_pixels(np.zeros(3), 0.0, 0.0)) == [128] * 3


def test_pgm_and_sidecar(tmp_path):
    vals = np.linspace(0, 1, 12).reshape(3, 4)
    rmap = ResponseMap(Grid1D(0.1, 0.3, 3), Grid1D(1e11, 4e11, 4), vals, "transmission", "1")
    path = tmp_path / "m.pgm"
    pix, lo, hi = render_map(rmap, path)
    data = path.read_bytes()
    assert data.startswith(b"P5\n4 3\n255\n")
    assert data == pgm_bytes(pix)
    assert data[-12:] == pix.tobytes()
    side = (tmp_path / "m.pgm.txt").read_text()
    assert "v_min=0\n" in side and "v_max=1\n" in side and "diverging=false" in side
    again = tmp_path / "n.pgm"
    render_map(rmap, again)
    assert again.read_bytes() == data
