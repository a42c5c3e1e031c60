import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from evovcs import BinaryImage, PBMParseError, load_pbm, read_pbm, regions, save_pbm, write_pbm
from evovcs.exceptions import DimensionError, ParameterError
from evovcs.image import RegionMask, check_same_shape

bitmaps = st.tuples(st.integers(1, 20), st.integers(1, 40)).flatmap(
    lambda hw: arrays(np.uint8, hw, elements=st.integers(0, 1))
)


@given(bitmaps, st.sampled_from(["P1", "P4"]))
def test_pbm_round_trip(bits, variant):
    img = BinaryImage(bits)
    assert load_pbm(save_pbm(img, variant)) == img


def test_p4_layout_pads_rows():
    img = BinaryImage(np.array([[1, 0, 1], [0, 1, 1]], dtype=np.uint8))
    assert save_pbm(img, "P4") == b"P4\n3 2\n" + bytes([0b10100000, 0b01100000])


def test_p1_layout():
    img = BinaryImage(np.array([[1, 0], [0, 1]], dtype=np.uint8))
    assert save_pbm(img, "P1") == b"P1\n2 2\n1 0\n0 1\n"


def test_header_comments_and_compact_p1():
    data = b"P1\n# a comment\n3 # trailing\n2\n101\n010\n"
    assert load_pbm(data).pixels.tolist() == [[1, 0, 1], [0, 1, 0]]


@pytest.mark.parametrize(
    "data",
    [b"P2\n1 1\n0\n", b"P4\n8 2\n\x00", b"P1\n2 2\n1 0 1\n", b"P1\n0 3\n", b"P1\n2 1\n1 x\n", b""],
)
def test_malformed_pbm_raises_with_offset(data):
    with pytest.raises(PBMParseError) as info:
        load_pbm(data)
    assert info.value.offset >= 0


def test_file_helpers(tmp_path):
    img = BinaryImage(np.eye(5, dtype=np.uint8))
    write_pbm(tmp_path / "x.pbm", img)
    assert read_pbm(tmp_path / "x.pbm") == img


def test_image_is_read_only_and_does_not_alias_input():
    src = np.zeros((2, 2), dtype=np.uint8)
    img = BinaryImage(src)
    src[0, 0] = 1
    assert img.pixels[0, 0] == 0
    with pytest.raises(ValueError):
        img.pixels[0, 0] = 1


def test_rejects_non_binary_and_wrong_rank():
    with pytest.raises(ParameterError):
        BinaryImage(np.array([[2]]))
    with pytest.raises(ParameterError):
        BinaryImage(np.zeros(4, dtype=np.uint8))


def test_regions_partition_the_raster(noisy_secret):
    white, black = regions(noisy_secret)
    assert white.count + black.count == noisy_secret.size
    assert not (white.flags & black.flags).any()
    assert len(RegionMask.full(3, 4)) == 12


def test_shape_check():
    with pytest.raises(DimensionError):
        check_same_shape([BinaryImage.zeros(2, 2), BinaryImage.zeros(2, 3)])
