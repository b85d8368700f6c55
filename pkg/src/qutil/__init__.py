"""Synthetic-circuit transpilation and per-qubit utilization measurement."""

__version__ = "0.1.0"

from .architecture import ArchitectureSpec, CouplingMap, falcon_r4, load_architecture
from .circuit import Circuit, Instruction, active_qubits, compose, depth, from_text, instr
from .errors import (
    CapacityError,
    ConfigurationError,
    ConsistencyError,
    ParameterArityError,
    QutilError,
    RenderError,
    UnsupportedGateError,
    UnsupportedTranslationError,
)
from .generator import GenerationConfig, generate
from .sweep import SweepConfig, UtilizationTable, reference_grid, run_sweep
from .transpiler import Layout, TranspileConfig, TranspileResult, transpile

__all__ = [
    "__version__",
    "ArchitectureSpec", "CouplingMap", "falcon_r4", "load_architecture",
    "Circuit", "Instruction", "active_qubits", "compose", "depth", "from_text", "instr",
    "CapacityError", "ConfigurationError", "ConsistencyError", "ParameterArityError",
    "QutilError", "RenderError", "UnsupportedGateError", "UnsupportedTranslationError",
    "GenerationConfig", "generate",
    "SweepConfig", "UtilizationTable", "reference_grid", "run_sweep",
    "Layout", "TranspileConfig", "TranspileResult", "transpile",
]
