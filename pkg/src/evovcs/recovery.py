"""OR / XOR recovery, light transmission, contrast and partition-driven selection."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .evolving import ShareGroupLayout
from .exceptions import DegenerateRegionError, DimensionError, ParameterError, PartitionError
from .image import BinaryImage, RegionMask, check_same_shape, regions
from .rng import as_source

__all__ = [
    "stack_or",
    "stack_xor",
    "light_transmission",
    "ContrastReport",
    "empirical_contrast",
    "PartitionSelection",
    "select_by_partition",
    "parse_partition",
]


def _images(shadows):
    shadows = [s if isinstance(s, BinaryImage) else BinaryImage(s) for s in shadows]
    if not shadows:
        raise ParameterError("need at least one shadow image")
    check_same_shape(shadows)
    return shadows


def stack_or(shadows):
    """Physical stacking: a pixel is opaque if any shadow is opaque there."""
    shadows = _images(shadows)
    return BinaryImage(reduce(np.bitwise_or, (s.pixels for s in shadows)))


def stack_xor(shadows):
    shadows = _images(shadows)
    return BinaryImage(reduce(np.bitwise_xor, (s.pixels for s in shadows)))


def light_transmission(img, mask=None):
    """Fraction of transparent pixels of ``img`` inside ``mask`` (default: all)."""
    img = img if isinstance(img, BinaryImage) else BinaryImage(img)
    if mask is None:
        return 1.0 - img.pixels.sum() / img.size
    if mask.shape != img.shape:
        raise DimensionError(f"mask shape {mask.shape} differs from image shape {img.shape}")
    count = mask.count
    if count == 0:
        raise DegenerateRegionError("light transmission over an empty region is undefined")
    return 1.0 - img.pixels[mask.flags].sum() / count


@dataclass(frozen=True)
class ContrastReport:
    """Measured transmissions over the white / black secret regions."""

    white_transmission: float
    black_transmission: float
    white_pixels: int
    black_pixels: int

    @property
    def alpha(self):
        return (self.white_transmission - self.black_transmission) / (1.0 + self.black_transmission)

    @property
    def stderr(self):
        """Delta-method standard error of ``alpha`` under i.i.d. pixels."""
        l0, l1 = self.white_transmission, self.black_transmission
        v0 = l0 * (1 - l0) / self.white_pixels
        v1 = l1 * (1 - l1) / self.black_pixels
        d0 = 1.0 / (1.0 + l1)
        d1 = -(1.0 + l0) / (1.0 + l1) ** 2
        return math.sqrt(d0 * d0 * v0 + d1 * d1 * v1)

    def to_text(self):
        """Flat ``key=value`` block, one pair per line."""
        pairs = [
            ("white_pixels", self.white_pixels),
            ("black_pixels", self.black_pixels),
            ("L_white", f"{self.white_transmission:.6f}"),
            ("L_black", f"{self.black_transmission:.6f}"),
            ("alpha", f"{self.alpha:.6f}"),
            ("stderr", f"{self.stderr:.6f}"),
        ]
        return "".join(f"{k}={v}\n" for k, v in pairs)

    @classmethod
    def from_text(cls, text):
        fields = dict(line.split("=", 1) for line in text.splitlines() if "=" in line)
        return cls(
            white_transmission=float(fields["L_white"]),
            black_transmission=float(fields["L_black"]),
            white_pixels=int(fields["white_pixels"]),
            black_pixels=int(fields["black_pixels"]),
        )


def empirical_contrast(recovered, secret):
    """Contrast of ``recovered`` measured against the regions of ``secret``."""
    recovered = recovered if isinstance(recovered, BinaryImage) else BinaryImage(recovered)
    secret = secret if isinstance(secret, BinaryImage) else BinaryImage(secret)
    if recovered.shape != secret.shape:
        raise DimensionError(f"recovered {recovered.shape} vs secret {secret.shape}")
    white, black = regions(secret)
    if white.count == 0 or black.count == 0:
        raise DegenerateRegionError("contrast needs a secret with both white and black pixels")
    return ContrastReport(
        white_transmission=float(light_transmission(recovered, white)),
        black_transmission=float(light_transmission(recovered, black)),
        white_pixels=white.count,
        black_pixels=black.count,
    )


def parse_partition(text):
    """``"2,1,1"`` -> ``(2, 1, 1)``; parts must be positive and non-increasing."""
    try:
        parts = tuple(int(p) for p in str(text).replace(" ", "").split(",") if p)
    except ValueError:
        raise PartitionError(f"cannot parse partition {text!r}") from None
    if not parts or any(p <= 0 for p in parts):
        raise PartitionError(f"partition parts must be positive, got {text!r}")
    if any(a < b for a, b in zip(parts, parts[1:])):
        raise PartitionError(f"partition parts must be non-increasing, got {text!r}")
    return parts


@dataclass(frozen=True)
class PartitionSelection:
    partition: tuple
    indices: tuple
    occupancy: tuple

    def groups_used(self):
        return sum(1 for c in self.occupancy if c)


def select_by_partition(layout, partition, rng=None):
    """Pick share indices whose per-group counts realise ``partition``.

    Parts are placed largest first on distinct groups chosen at random among
    those with enough capacity; indices inside a group are drawn without
    replacement.
    """
    if not isinstance(layout, ShareGroupLayout):
        raise ParameterError("layout must be a ShareGroupLayout")
    parts = tuple(sorted((int(p) for p in partition if p), reverse=True))
    if not parts:
        raise PartitionError("empty partition")
    if parts[0] > layout.group_size:
        raise PartitionError(f"part {parts[0]} exceeds the group size {layout.group_size}")
    groups = layout.groups()
    if len(parts) > len(groups):
        raise PartitionError(f"{len(parts)} parts need more groups than the {len(groups)} issued")
    gen = np.random.default_rng(as_source(rng).seed)
    free = list(range(len(groups)))
    occupancy = [0] * len(groups)
    chosen = []
    for part in parts:
        fits = [g for g in free if len(groups[g]) >= part]
        if not fits:
            raise PartitionError(f"no remaining group can hold a part of size {part}")
        g = fits[int(gen.integers(len(fits)))]
        free.remove(g)
        occupancy[g] = part
        picks = gen.choice(groups[g], size=part, replace=False)
        chosen.extend(int(i) for i in picks)
    return PartitionSelection(parts, tuple(sorted(chosen)), tuple(occupancy))
