"""Characters of simple and tilting modules for reductive groups in positive
characteristic, and the multiplicities of Steinberg tensor products."""

from .charring import (
    Character,
    NablaExpansion,
    chi,
    chi_virtual,
    dual_character,
    frobenius_twist,
    multiply,
    nabla_expand,
    synthesize,
    tensor_nabla,
    weyl_dimension,
)
from .form import bracket, bracket_nabla, gf_multiplicity
from .modchar import (
    CharTable,
    InvariantViolation,
    TableError,
    Undetermined,
    decompose_into_tiltings,
    jantzen_sum,
    simple_character,
    st_char,
    tilting_character,
)
from .rootsys import RootSystem, build_root_system
from .stnabla import (
    PreconditionError,
    StNablaContext,
    counterexample_suite,
    d_numbers,
    donkin_criterion,
    form_tilting_vs_simple,
    hom_dim_gfq,
    hom_dim_gr,
    p_numbers,
    reciprocity_check,
    s_numbers,
    t_numbers,
)
