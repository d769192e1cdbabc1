"""Exact low-discrepancy point sets and their discrepancy decompositions.

Generation with rational coordinates, exact local/L2/star discrepancy,
residue-class decompositions of the discrepancy function with an
exponential-sum cross-check, and p-adic valuation scans.
"""

from .radical import (
    EAGER_CAP,
    KINDS,
    Base,
    BasisPair,
    DigitVector,
    PointSet,
    RationalPoint,
    digits,
    first_primes,
    fraction_digits,
    halton_point,
    halton_stream,
    is_prime,
    load_csv,
    point_set,
    radical_inverse,
    save_csv,
    save_float64,
)
from .residue import (
    ResidueData,
    SignedResidueSet,
    cell_residue,
    corner_residue,
    crt_inverses,
    delta,
    in_elementary_interval,
    signed_rep,
    signed_residues,
)
from .discrepancy import (
    DiscrepancyValue,
    count_in_class,
    decomposition_layers,
    decomposition_term,
    l2_discrepancy_squared,
    local_discrepancy,
    star_discrepancy,
    truncate_digits,
    truncated_discrepancy,
)
from .fourier import (
    DigitSplit,
    FourierTerm,
    PartitionLabel,
    cell_fourier_factor,
    combined_frequency,
    decomposition_term_fourier,
    default_thresholds,
    digit_split,
    partition_label,
    resonance_sums,
    second_moment_block,
    term_table,
    window_fourier_coefficient,
    write_term_table_csv,
)
from .padic import (
    LinearFormInstance,
    PadicRational,
    ScanReport,
    ZeroFormError,
    linear_form_scan,
    linear_form_valuation,
    lte_valuation,
    multiplicative_order,
    valuation,
    weil_height,
)

__version__ = "0.1.0"

__all__ = [
    "EAGER_CAP",
    "KINDS",
    "Base",
    "BasisPair",
    "DigitSplit",
    "DigitVector",
    "DiscrepancyValue",
    "FourierTerm",
    "LinearFormInstance",
    "PadicRational",
    "PartitionLabel",
    "PointSet",
    "RationalPoint",
    "ResidueData",
    "ScanReport",
    "SignedResidueSet",
    "ZeroFormError",
    "cell_fourier_factor",
    "cell_residue",
    "combined_frequency",
    "corner_residue",
    "count_in_class",
    "crt_inverses",
    "decomposition_layers",
    "decomposition_term",
    "decomposition_term_fourier",
    "default_thresholds",
    "delta",
    "digit_split",
    "digits",
    "first_primes",
    "fraction_digits",
    "halton_point",
    "halton_stream",
    "in_elementary_interval",
    "is_prime",
    "l2_discrepancy_squared",
    "linear_form_scan",
    "linear_form_valuation",
    "load_csv",
    "local_discrepancy",
    "lte_valuation",
    "multiplicative_order",
    "partition_label",
    "point_set",
    "radical_inverse",
    "resonance_sums",
    "save_csv",
    "save_float64",
    "second_moment_block",
    "signed_rep",
    "signed_residues",
    "star_discrepancy",
    "term_table",
    "truncate_digits",
    "truncated_discrepancy",
    "valuation",
    "weil_height",
    "window_fourier_coefficient",
    "write_term_table_csv",
]
