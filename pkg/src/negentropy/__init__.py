"""Work cost of erasure with quantum side information.

Dense few-qubit state algebra, certified conditional min/max-entropies,
a battery/heat-bath simulator, random-unitary decoupling and the full
decoupling, extraction and erasure protocol.
"""
from .exceptions import (
    AddressingError,
    CapacityError,
    DimensionError,
    InfeasibleError,
    InvalidStateError,
    NegentropyError,
    SolverError,
)
from .quantum import (
    DensityOperator,
    PureState,
    RegisterLayout,
    SchmidtDecomposition,
    apply_unitary,
    fidelity,
    gibbs_state,
    haar_unitary,
    partial_trace,
    purified_distance,
    purify,
    schmidt_decompose,
    tensor,
    trace_distance,
)
from .entropy import (
    ClassicalDistribution,
    EntropyReport,
    aep_rate,
    classical_hmax_smooth,
    conditional_von_neumann,
    hmax,
    hmax_smooth,
    hmin,
    hmin_smooth,
    von_neumann,
)
from .thermo import (
    Battery,
    LevelSystem,
    ScheduleConfig,
    WorkLedger,
    distinguish_probability,
    erase_mixed,
    extract_work_pure,
    failure_probability,
    shift_levels,
    thermalize,
)
from .decoupling import (
    DecouplingResult,
    average_decoupling_bound,
    decoupled_distance,
    find_purifier,
    max_decoupled_size,
    sample_decoupling,
)
from .protocol import (
    ProtocolTranscript,
    Scenario,
    build_scenario,
    run_erasure,
    run_extraction,
    theorem1_failure_budget,
    verify_memory_preservation,
    work_cost_rate,
)

__version__ = "0.1.0"
