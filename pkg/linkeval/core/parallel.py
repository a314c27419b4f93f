from typing import Callable, Sequence, TypeVar

from joblib import Parallel, delayed

from core.config import CONFIG

T = TypeVar("T")
R = TypeVar("R")


def chunked(items: Sequence[T], n_chunks: int) -> list[Sequence[T]]:
    """Split into at most ``n_chunks`` contiguous, order-preserving slices."""
    if not items:
        return []
    n_chunks = max(1, min(n_chunks, len(items)))
    size, extra = divmod(len(items), n_chunks)
    chunks, start = [], 0
    for i in range(n_chunks):
        stop = start + size + (1 if i < extra else 0)
        chunks.append(items[start:stop])
        start = stop
    return chunks


def parallel_map(fn: Callable[[Sequence[T]], list[R]], items: Sequence[T], n_jobs: int = 1) -> list[R]:
    """Apply ``fn`` to ordered chunks of ``items`` and concatenate the results.

    ``fn`` receives a chunk and returns one result per element. Output order is
    the input order whatever the number of workers.
    """
    if n_jobs == 1 or len(items) <= 1:
        return list(fn(items))
    workers = n_jobs if n_jobs > 0 else -1
    # a few chunks per worker keeps load balanced without pickling per item
    n_chunks = 4 * (n_jobs if n_jobs > 0 else 8)
    parts = Parallel(n_jobs=workers, backend=CONFIG.parallel_backend)(
        delayed(fn)(chunk) for chunk in chunked(items, n_chunks)
    )
    return [result for part in parts for result in part]  # type: ignore[union-attr]
