from ._core import (
    IsaacsError,
    __version__,
    dynkin_value,
    exp_transform,
    hamiltonians,
    inverse_transform_value,
    model_names,
    run,
    solve_pde,
    solve_rbsde,
    validate_model,
)

__all__ = [
    "IsaacsError",
    "__version__",
    "dynkin_value",
    "exp_transform",
    "hamiltonians",
    "inverse_transform_value",
    "model_names",
    "run",
    "solve_pde",
    "solve_rbsde",
    "validate_model",
]
