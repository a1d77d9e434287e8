"""Density operators, measurement, erasure and entropy, plus a Maxwell-demon ledger."""

from .channel import (
    KrausChannel,
    apply,
    erase_via_measure_rotate,
    erasure_channel,
    trace_measurement_equivalence,
)
from .entropy import (
    EntropyValue,
    l1_coherence,
    landauer_cost,
    projective_entropy_gain,
    shannon_entropy,
    von_neumann_entropy,
    wave_behavior,
)
from .linalg import Spectrum, eig_hermitian, kron, trace
from .measurement import (
    MeasurementSet,
    Observable,
    moment_stats,
    nonselective_update,
    outcome_distribution,
    povm_to_measurement,
    projective_from_observable,
    subsystem_measurement,
)
from .state import DensityOperator, Ket, density_from_ket, partial_trace, purity

__version__ = "0.1.0"
