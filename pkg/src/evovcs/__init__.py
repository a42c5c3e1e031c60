"""Evolving k-threshold visual cryptography on random grids."""

from .better import Better2State, Better3State, better2_extend, better2_init, better3_extend, better3_init
from .estimators import Better2Dealer, Better3Dealer, KGroupedDealer, dealer_for_state
from .evolving import EvolvingDealerState, ShareGroupLayout, dealer_extend, dealer_init, share_kgrouped
from .exceptions import (
    ConvergenceError,
    DegenerateRegionError,
    DimensionError,
    ManifestError,
    ParameterError,
    PartitionError,
    PBMParseError,
    StateError,
    VCSError,
)
from .image import BinaryImage, RegionMask, load_pbm, read_pbm, regions, save_pbm, write_pbm
from .kernels import share_kk, share_pixel_kk
from .manifest import dealer_load, dealer_save
from .recovery import (
    ContrastReport,
    empirical_contrast,
    light_transmission,
    parse_partition,
    select_by_partition,
    stack_or,
    stack_xor,
)
from .rng import DEFAULT_SEED, RandomSource

__version__ = "0.1.0"
