import os

DEFAULT_CLOSURE_CAP = 10_000
DEFAULT_SQUARE_CAP = 1_000_000
CAP_ENV = "COMPOMAT_CAP"

_override: int | None = None


def set_cap_override(cap: int | None) -> None:
    """Process-wide cap (the command line ``--cap``); beats the environment."""
    global _override
    _override = cap


def _resolve(cap: int | None, default: int) -> int:
    if cap is not None:
        return cap
    if _override is not None:
        return _override
    env = os.environ.get(CAP_ENV)
    return int(env) if env else default


def closure_cap(cap: int | None = None) -> int:
    return _resolve(cap, DEFAULT_CLOSURE_CAP)


def square_cap(cap: int | None = None) -> int:
    return _resolve(cap, DEFAULT_SQUARE_CAP)
