"""Binary rasters, region masks and the PBM codec.

Pixel convention: 0 is transparent (white), 1 is opaque (black). This is
also the PBM convention, so no inversion happens on load or save.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError, PBMParseError, ParameterError

__all__ = [
    "BinaryImage",
    "RegionMask",
    "regions",
    "load_pbm",
    "save_pbm",
    "read_pbm",
    "write_pbm",
]

_WHITESPACE = b" \t\n\r\v\f"


def _frozen(arr):
    # shares the buffer only when it is already a read-only uint8 raster
    if arr.dtype == np.uint8 and not arr.flags.writeable and arr.flags.c_contiguous:
        return arr
    arr = np.array(arr, dtype=np.uint8, order="C")
    arr.setflags(write=False)
    return arr


class BinaryImage:
    """Immutable h x w raster of {0, 1} pixels.

    ``pixels`` is a read-only ``uint8`` array. Construct from any 2-D
    array-like of zeros and ones; anything else raises ``ParameterError``.
    """

    __slots__ = ("_pixels",)

    def __init__(self, pixels):
        arr = np.asarray(pixels)
        if arr.ndim != 2:
            raise ParameterError(f"expected a 2-D raster, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ParameterError(f"image dimensions must be >= 1, got {arr.shape}")
        if arr.dtype != bool and not ((arr == 0) | (arr == 1)).all():
            raise ParameterError("pixel values must be 0 or 1")
        self._pixels = _frozen(arr)

    @classmethod
    def from_bits(cls, height, width, bits):
        bits = np.asarray(bits, dtype=np.uint8)
        if bits.size != height * width:
            raise ParameterError(f"{bits.size} bits cannot fill a {height}x{width} raster")
        return cls(bits.reshape(height, width))

    @classmethod
    def zeros(cls, height, width):
        return cls(np.zeros((height, width), dtype=np.uint8))

    @classmethod
    def ones(cls, height, width):
        return cls(np.ones((height, width), dtype=np.uint8))

    @property
    def pixels(self):
        return self._pixels

    @property
    def height(self):
        return self._pixels.shape[0]

    @property
    def width(self):
        return self._pixels.shape[1]

    @property
    def shape(self):
        return self._pixels.shape

    @property
    def size(self):
        return self._pixels.size

    @property
    def bits(self):
        """Row-major flat view of the pixels."""
        return self._pixels.reshape(-1)

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._pixels
        return self._pixels.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, BinaryImage):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self._pixels, other._pixels)

    def __hash__(self):
        return hash((self.shape, self._pixels.tobytes()))

    def __repr__(self):
        return f"BinaryImage({self.height}x{self.width}, black={int(self._pixels.sum())})"


@dataclass(frozen=True, eq=False)
class RegionMask:
    """Boolean membership flags over the pixels of a parent raster."""

    flags: np.ndarray

    def __post_init__(self):
        flags = np.asarray(self.flags, dtype=bool)
        if flags.ndim != 2:
            raise ParameterError("region mask must be 2-D")
        flags = flags.copy()
        flags.setflags(write=False)
        object.__setattr__(self, "flags", flags)

    @property
    def shape(self):
        return self.flags.shape

    @property
    def count(self):
        return int(self.flags.sum())

    def __len__(self):
        return self.count

    def members(self):
        """List of (row, col) coordinates inside the region."""
        return [tuple(int(v) for v in rc) for rc in np.argwhere(self.flags)]

    @classmethod
    def full(cls, height, width):
        return cls(np.ones((height, width), dtype=bool))


def regions(img):
    """Split ``img`` into its white region and its black region."""
    img = img if isinstance(img, BinaryImage) else BinaryImage(img)
    black = img.pixels.astype(bool)
    return RegionMask(~black), RegionMask(black)


# -- PBM ------------------------------------------------------------------


class _Cursor:
    def __init__(self, data):
        self.data = data
        self.pos = 0

    def skip_space_and_comments(self):
        data = self.data
        while self.pos < len(data):
            c = data[self.pos : self.pos + 1]
            if c in _WHITESPACE and c:
                self.pos += 1
            elif c == b"#":
                while self.pos < len(data) and data[self.pos : self.pos + 1] not in (b"\n", b"\r"):
                    self.pos += 1
            else:
                break

    def read_int(self, what):
        self.skip_space_and_comments()
        start = self.pos
        data = self.data
        while self.pos < len(data) and data[self.pos : self.pos + 1].isdigit():
            self.pos += 1
        if start == self.pos:
            if start >= len(data):
                raise PBMParseError(f"unexpected end of header while reading {what}", start)
            raise PBMParseError(f"expected a decimal integer for {what}", start)
        return int(data[start : self.pos])


def load_pbm(data):
    """Decode a P1 or P4 PBM byte stream into a ``BinaryImage``."""
    if isinstance(data, str):
        data = data.encode("ascii")
    data = bytes(data)
    if len(data) < 2:
        raise PBMParseError("stream too short for a PBM magic number", 0)
    magic = data[:2]
    if magic not in (b"P1", b"P4"):
        raise PBMParseError(f"bad magic number {magic!r}, expected P1 or P4", 0)
    cur = _Cursor(data)
    cur.pos = 2
    if cur.pos < len(data) and data[cur.pos : cur.pos + 1] not in _WHITESPACE + b"#":
        raise PBMParseError("magic number must be followed by whitespace", cur.pos)
    width_at = cur.pos
    width = cur.read_int("width")
    height_at = cur.pos
    height = cur.read_int("height")
    if width <= 0:
        raise PBMParseError(f"width must be positive, got {width}", width_at)
    if height <= 0:
        raise PBMParseError(f"height must be positive, got {height}", height_at)

    if magic == b"P1":
        return BinaryImage(_read_p1_raster(cur, width, height))

    # exactly one whitespace byte separates the header from the raster
    if cur.pos >= len(data):
        raise PBMParseError("missing raster after header", cur.pos)
    if data[cur.pos : cur.pos + 1] not in _WHITESPACE:
        raise PBMParseError("header must end with a single whitespace byte", cur.pos)
    cur.pos += 1
    row_bytes = (width + 7) // 8
    need = row_bytes * height
    payload = data[cur.pos : cur.pos + need]
    if len(payload) < need:
        raise PBMParseError(
            f"truncated P4 raster: need {need} bytes, found {len(payload)}", cur.pos + len(payload)
        )
    packed = np.frombuffer(payload, dtype=np.uint8).reshape(height, row_bytes)
    return BinaryImage(np.unpackbits(packed, axis=1)[:, :width])


def _read_p1_raster(cur, width, height):
    data = cur.data
    need = width * height
    out = np.empty(need, dtype=np.uint8)
    got = 0
    while got < need:
        cur.skip_space_and_comments()
        if cur.pos >= len(data):
            raise PBMParseError(f"truncated P1 raster: need {need} pixels, found {got}", cur.pos)
        c = data[cur.pos]
        if c == 0x30:
            out[got] = 0
        elif c == 0x31:
            out[got] = 1
        else:
            raise PBMParseError(f"invalid P1 pixel character {chr(c)!r}", cur.pos)
        got += 1
        cur.pos += 1
    return out.reshape(height, width)


def save_pbm(img, variant="P4"):
    """Encode ``img`` as canonical PBM bytes.

    The header is ``magic\\nwidth height\\n``. P1 writes one raster row per
    line with space-separated digits; P4 pads each row to a byte boundary
    with zero bits.
    """
    img = img if isinstance(img, BinaryImage) else BinaryImage(img)
    variant = variant.upper()
    header = f"{variant}\n{img.width} {img.height}\n".encode("ascii")
    if variant == "P4":
        return header + np.packbits(img.pixels, axis=1).tobytes()
    if variant == "P1":
        lines = (" ".join("1" if v else "0" for v in row) for row in img.pixels)
        return header + "".join(line + "\n" for line in lines).encode("ascii")
    raise ParameterError(f"unknown PBM variant {variant!r}")


def read_pbm(path):
    with open(path, "rb") as fh:
        return load_pbm(fh.read())


def write_pbm(path, img, variant="P4"):
    with open(path, "wb") as fh:
        fh.write(save_pbm(img, variant))


def check_same_shape(images):
    images = list(images)
    if not images:
        raise ParameterError("need at least one image")
    shape = images[0].shape
    for i, img in enumerate(images[1:], start=1):
        if img.shape != shape:
            raise DimensionError(f"image {i} has shape {img.shape}, expected {shape}")
    return shape
