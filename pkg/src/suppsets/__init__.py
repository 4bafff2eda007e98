"""Supported sets, data symmetries, binding, and register automata.

The pieces fit together like this: `atoms` fixes the data alphabets and
their renaming monoids; `supported` gives the finite category of supported
sets; `freenom` freely extends a supported set with a monoid action;
`presentations` quotients such extensions by finitely many equations;
`binding` relates de Bruijn-style binding to nominal abstraction; and
`automata` runs register automata over data words via their configuration
spaces.
"""

from .atoms import (
    Atom,
    FiniteMap,
    GlobalMap,
    Support,
    SymmetryId,
    apply,
    compose,
    extend_to_global,
    fresh,
    identity,
    inverse,
    is_admissible,
    lock_free_witness,
    transposition,
)
from .supported import (
    SuppMap,
    SuppSet,
    check_supported_map,
    classify_regular_subobject,
    coequalizer,
    coproduct,
    equalizer,
    exponential,
    is_iso,
    pf_support,
    product,
    ufs_support,
)
from .freenom import (
    ExtElem,
    NominalCarrier,
    RestrictedMap,
    act,
    ext_enumerate,
    ext_map,
    ext_support,
    extend,
    mult,
    restrict,
    unit,
)
from .presentations import (
    AtomPool,
    FinPresentation,
    QuotElem,
    act_quot,
    default_pool,
    element_count,
    orbit_count,
    quot_eq,
    supp_of,
)
from .binding import (
    AbsClass,
    App,
    DbApp,
    DbLam,
    Idx,
    Lam,
    Var,
    alpha_eq,
    b_support,
    from_debruijn,
    maxidx,
    phi,
    phi_inv,
    sigma,
    supp_abs,
    to_debruijn,
)
from .automata import (
    Config,
    Guard,
    INPUT,
    Literal,
    Nfa,
    Reg,
    RegisterAutomaton,
    determinize_generic,
    eval_guard,
    reachable_orbits,
    run,
    step,
    validate,
)

__version__ = "0.1.0"
