"""Pure-Python (numpy) table folding; used when the compiled core is absent."""
import numpy as np


def fold_table(table, low, zdd, base):
    """Fold ``table`` on the variable whose index stride is ``low``.

    Returns ``(folded, lo, hi)``.  Fresh nodes are numbered ``base + 2``,
    ``base + 3``, ... in order of first appearance along the folded table;
    ``lo[j], hi[j]`` are the children of node ``base + 2 + j``.
    """
    t = table.reshape(-1, 2, low)
    u0 = t[:, 0, :].reshape(-1)
    u1 = t[:, 1, :].reshape(-1)
    keep = (u1 != 0) if zdd else (u0 != u1)
    out = u0.copy()
    if not keep.any():
        empty = np.zeros(0, dtype=np.int64)
        return out, empty, empty
    k0 = u0[keep]
    k1 = u1[keep]
    width = int(max(k0.max(), k1.max())) + 1
    keys = k0 * width + k1
    _, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
    by_appearance = np.argsort(first, kind="stable")
    rank = np.empty_like(by_appearance)
    rank[by_appearance] = np.arange(by_appearance.size)
    out[keep] = base + 2 + rank[inverse.reshape(-1)]
    firsts = first[by_appearance]
    return out, k0[firsts].copy(), k1[firsts].copy()
