import os
from concurrent.futures import ThreadPoolExecutor


def thread_count():
    raw = os.environ.get("PWLAB_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"PWLAB_THREADS must be an integer, got {raw!r}") from None
    return max(1, n)


def parallel_map(fn, items):
    """map() that fans out over PWLAB_THREADS workers; results keep input order."""
    items = list(items)
    n = thread_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
