"""Pseudospectral laboratory for the KdV limit of the good Boussinesq equation.

Modules
-------
spectral     periodic grid, transforms, multipliers, projections
symbols      dispersion symbols, cutoff N(eps), symbol-gap bounds, propagators
solvers      direct Boussinesq, coupled pair, frequency-localized flow, KdV
norms        Sobolev norms, energies, windowed X^{s,b} norms
estimates    randomized numerical checks of the linear and bilinear estimates
experiments  eps-sweeps, decompositions, energy audits, file output
cli          ``kdvlab`` command line
"""
from .errors import (
    ContractViolation,
    DegenerateFit,
    FitError,
    KdvLabError,
    MeanNotZero,
    OutOfCutoff,
    QuadratureFailure,
    SolutionBlowup,
    TemporalAliasing,
    WindowClipped,
    ZeroError,
)
from .experiments import (
    ExperimentConfig,
    ExperimentResult,
    run_energy_audit,
    run_kdv_limit_sweep,
    run_three_flow_decomposition,
)
from .fitting import RateFit, fit_rate
from .norms import PhaseKind, SpaceTimeField, Window, XsbSpec, energy_rescaled, sobolev_norm, xsb_norm
from .solvers import (
    BoussinesqState,
    InitialData,
    SolverConfig,
    Trajectory,
    evolve_boussinesq_direct,
    evolve_coupled_system,
    evolve_decoupled_localized,
    evolve_kdv,
    reconstruct_full_solution,
    theorem_initial_data,
)
from .spectral import Grid, SpectralField, WavePair
from .symbols import cutoff_N, s_airy, s_eps, symbol_gap_bound

__version__ = "0.1.0"
