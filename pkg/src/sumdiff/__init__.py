"""Independence of sum and difference for distributions on finite Abelian groups."""

from .fourier import CharFn, char_fn, inverse_char, is_real_measure, support_set
from .groups import (
    Group,
    Homomorphism,
    Subgroup,
    annihilator,
    cosets,
    is_corwin,
    pairing,
    power_subgroup,
    quotient,
    subgroup_from_generators,
    torsion_subgroup,
)
from .kb import (
    DecompositionError,
    DecompositionReport,
    KbStructure,
    NotKacBernsteinError,
    check_eq3,
    check_modulus_relation,
    compute_structure,
    decompose,
    extract_amplitude,
    extract_phase,
    gaussian_phi_enumerate,
    lemma4_check,
    oracle_equivalence,
    remark3_check,
    theorem_b_check,
)
from .measures import (
    JointMeasure,
    Measure,
    convolve,
    haar,
    is_independent,
    point_mass,
    pushforward,
    reflect,
    sum_diff_joint,
    uniform,
)

__version__ = "0.1.0"
