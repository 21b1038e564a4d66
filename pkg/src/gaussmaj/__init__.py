"""Deterministic LOCC convertibility of pure bipartite Gaussian states."""

from gaussmaj.channels import (
    ChannelKind,
    ChannelMatrixView,
    ChannelSpec,
    amp_column_sum,
    amp_row_sum,
    apply_channel,
    derive_channel,
    loss_column_sum,
    loss_row_sum,
    matrix_action_check,
    stochasticity_certificate,
)
from gaussmaj.classifier import (
    Category,
    ConversionVerdict,
    classify,
    glocc_condition,
    theorem1_condition,
    theoremN_condition,
)
from gaussmaj.fock_spectra import (
    GeometricSpectrum,
    ProductSpectrum,
    RankedEigenvalues,
    SqueezingVector,
    occupation_to_squeezing,
    spectrum_of,
    squeezing_to_occupation,
    top_k,
)
from gaussmaj.majorization import MajorizationVerdict, Relation, compare, partial_sums

__version__ = "0.1.0"
