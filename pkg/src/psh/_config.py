import os

_FALLBACK_TOL = 1e-10


def default_tol() -> float:
    """Relative tolerance used when a call does not pass one explicitly.

    ``PSH_TOL`` in the environment overrides the built-in 1e-10.
    """
    raw = os.environ.get("PSH_TOL")
    if not raw:
        return _FALLBACK_TOL
    value = float(raw)
    if not (value > 0 and value < 1):
        raise ValueError(f"PSH_TOL must lie in (0, 1), got {raw!r}")
    return value
