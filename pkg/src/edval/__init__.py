"""Essential dimension of Galois cohomology classes via the wedge-valuation map."""

from .claims import SubsetWitness, claim_subset, verify_prime_index_iso
from .edcore import (
    Classification,
    EdReport,
    FiniteAbelianP,
    a_omega,
    brauer_i0,
    brauer_matrix,
    classify,
    ed_report,
    membership,
    rho,
    split_bound_check,
    witness,
)
from .extalg import (
    Multivector,
    change_basis,
    contract_dual,
    contract_vector,
    degree_part,
    mv_add,
    mv_wedge_vectors,
)
from .pzcoeff import PCoeff, pc_add, pc_normalize, pc_order, pc_scale
from .symcalc import (
    Slot,
    SymbolClass,
    SymbolTerm,
    gen_block_brauer,
    gen_chain,
    gen_congruence,
    gen_generic,
    parse_class,
    render_class,
    wedge_nu,
)
from .zlattice import (
    Lattice,
    basis_extend,
    elementary_divisors,
    minors_gcd_divisors,
    saturate,
    smith,
)

__version__ = "0.1.0"
