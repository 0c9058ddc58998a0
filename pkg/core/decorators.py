from functools import wraps
import logging
import time

logger = logging.getLogger(__name__)


def logged_operation(name=None, *, level=logging.DEBUG):
    """
    Log start, finish and wall time of a service operation

    Args:
        name: label used in the log lines, defaults to the function name
        level: level of the start/finish lines; failures always log at WARNING
    """
    def decorator(func):
        label = name or func.__name__

        @wraps(func)
        def _wrapped(*args, **kwargs):
            logger.log(level, f"{label}: started")
            started = time.perf_counter()
            try:
                result = func(*args, **kwargs)
            except Exception as exc:
                elapsed = time.perf_counter() - started
                logger.warning(f"{label}: failed after {elapsed:.3f}s - {type(exc).__name__}: {exc}")
                raise
            elapsed = time.perf_counter() - started
            logger.log(level, f"{label}: finished in {elapsed:.3f}s")
            return result
        return _wrapped

    if callable(name):
        func, name = name, None
        return decorator(func)
    return decorator
