"""Zygmund regularity of sampled signals via mollifier-built wavelets.

Modules
-------
signals     test signals with known exponents
kernels     mollifiers, derived wavelets, spectral pairs, scalings
transform   wavelet transforms, smoothing, Fourier multipliers
colombeau   scaled-mollification families and their growth
regularity  exponent fits, norms and membership tests
io, cli     serialization and the ``zygmund`` command
"""
from .colombeau import (
    GrowthReport,
    Representative,
    classify_growth,
    embed,
    verify_hom_identity,
    verify_inhom_identity,
)
from .kernels import (
    Kernel,
    ScalingFn,
    SpectralPair,
    bump_mollifier,
    check_admissible,
    check_moments,
    derivative_wavelet,
    make_scaling,
    measured_order,
    spectral_pair,
    wavelet_from_mollifier,
)
from .regularity import (
    InfinitelyRegular,
    RegularityReport,
    check_membership,
    colombeau_zygmund_test,
    default_scales,
    embedded_exponent,
    estimate_exponent,
    zygmund_norm_hom,
    zygmund_norm_inhom,
)
from .signals import (
    GroundTruth,
    Signal,
    eval_signal,
    gen_brownian,
    gen_bump,
    gen_cantor_staircase,
    gen_cosines,
    gen_heaviside,
    gen_polynomial,
    gen_weierstrass,
)
from .transform import (
    ScaleField,
    calderon_nodes,
    calderon_reconstruct,
    cwt,
    fourier_multiplier,
    multiplier_field,
    smooth,
)

__version__ = "0.1.0"
