"""Team allocation by sociometric cohesion: genetic algorithm plus exhaustive oracle."""
from .core import (
    Allocation,
    InvalidInputError,
    InvalidInstanceError,
    ProblemInstance,
    derived_requirements,
    fitness,
    general_cohesion,
    group_cohesion,
    is_feasible,
    penalty,
    validate_instance,
)
from .exhaustive import BudgetExceededError, ExactResult, count_feasible, enumerate_feasible, solve_exact
from .ga import GAParams, SolveResult, derive_params, run, solve
from .instance_io import GeneratorConfig, generate_instance, load_dataset, load_instance, save_instance
from .kernels import BACKEND

__version__ = "0.1.0"
