import os

ENV_VAR = "BIPHOTON_DUALITY_THREADS"


def worker_count() -> int:
    """Thread cap from ``BIPHOTON_DUALITY_THREADS``; 0 or unset means all cores."""
    raw = os.environ.get(ENV_VAR, "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{ENV_VAR} must be an integer, got {raw!r}") from None
    if n < 0:
        raise ValueError(f"{ENV_VAR} must be >= 0, got {n}")
    return n or (os.cpu_count() or 1)
