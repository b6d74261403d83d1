"""Nearest separable (Hartree) states of pure multipartite states.

Amplitude convention
--------------------
A :class:`StateTensor` stores the ket coefficients ``psi`` of
``|Psi> = sum psi[i1..in] |e_i1> ... |e_in>``.  The overlap with a product
state is ``<Psi|phi> = sum conj(psi) u1[i1] ... un[in]``, so the hypermatrix
whose entries enter the multilinear form unconjugated is ``conj(psi)``
(available as :attr:`StateTensor.hypermatrix`).  Every module follows this.
"""

from hartree.state import (
    DimProfile,
    EntanglementEigenvalue,
    GuardError,
    HartreeError,
    SeparableState,
    ShapeError,
    StateTensor,
    bell_state,
    frobenius_norm,
    ghz_state,
    normalize,
    overlap,
    random_separable,
    random_state,
    separable_to_tensor,
    w_state,
)
from hartree.eigensolver import (
    SolveReport,
    SolverConfig,
    brute_force_eigenvalue,
    entanglement_eigenvalue,
    geometric_measure,
    partial_contraction,
    power_iterate,
    svd_bipartite,
)
from hartree.bounds import (
    BoundCertificate,
    SpaceBound,
    norm_axiom_suite,
    slice_certificate,
    slice_norm_dominance,
    space_bound,
)
from hartree.sigma import (
    OuterConfig,
    SigmaSearchResult,
    diagonal_extremal_state,
    sigma_exact_bipartite,
    sigma_search,
    sigma_witness_check,
)

__version__ = "0.1.0"
