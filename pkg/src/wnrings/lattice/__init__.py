from .finite import (
    DEFAULT_MAX_SIZE,
    METHODS,
    CubeWitness,
    FinLattice,
    boolean,
    chain,
    cube_rank,
    diamond,
    random_modular_lattice,
    strict_cube_rank,
    strict_cube_witness,
    subgroup_lattice,
)
from .modules import FinModule, SubquotientResult, abelian_groups, semisimple_subquotient, submodule_cube_rank
from .golden import (
    AXIOMS,
    AxiomReport,
    AxiomResult,
    GoldenLatticeView,
    GuardResult,
    Pedestal,
    check_guard,
    golden_axioms,
    guard_set,
    pedestal,
    scale_into,
)
