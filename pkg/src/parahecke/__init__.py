"""Exact Hecke algebra computations for the orthogonal group of signature
(2,3) and the paramodular group of degree 2 and squarefree level."""

from .exactlin import IntMat, GaussRat, SmithData, smith_normal_form, rank_mod_p, det, inverse_scaled
from .orthogonal import (
    Level,
    QuadForm,
    OrthoElement,
    OrthoDoubleCosetLabel,
    RightCosetForm3,
    RightCosetForm5,
    NotSquarefreeError,
    MembershipError,
    build_form,
    make_generator,
    is_in_SO0,
    reduce_isotropic,
    right_coset_canonical,
    double_coset_canonical,
    random_group_element,
)
from .hecke import (
    BoundExceeded,
    EnumerationBound,
    RightCosetTable,
    HeckeElement,
    GeneratorLabel,
    T1,
    T2,
    enumerate_right_cosets,
    multiply,
    count_double_cosets,
    express_in_generators,
    evaluate_polynomial,
    verify_commutativity,
)
from .symplectic import (
    SympElement,
    AtkinLehner,
    ParamodCosetLabel,
    SigmaStarLabel,
    make_W,
    J_N,
    is_paramodular,
    phi,
    to_orthogonal,
    from_orthogonal,
    in_discriminant_kernel,
    nu,
    sigma_star_canonical,
    sigma_canonical,
    sigma_multiply,
)

__version__ = "0.1.0"
