"""Exact cosine nearest-neighbor classification of benign vs attack flows.

The heavy lifting lives in the compiled extension ``nnids._core``; this
package re-exports its public surface.
"""

from nnids._core import (
    Dataset,
    classify,
    column_stats,
    concat,
    confusion,
    cross_validate,
    drop_constant_columns,
    from_arrays,
    kfold_split,
    l2_normalize_rows,
    load_csv,
    metrics,
    normalize,
    oracle_classify,
    read_cache,
    similarity,
    subsample,
    summarize,
    write_cache,
    __version__,
)

__all__ = [
    "Dataset",
    "classify",
    "column_stats",
    "concat",
    "confusion",
    "cross_validate",
    "drop_constant_columns",
    "from_arrays",
    "kfold_split",
    "l2_normalize_rows",
    "load_csv",
    "metrics",
    "normalize",
    "oracle_classify",
    "read_cache",
    "similarity",
    "subsample",
    "summarize",
    "write_cache",
    "__version__",
]
