import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from obddmin import fs_engine, kernels
from obddmin.boolfn import TruthTable
from obddmin.diagram import Kind

needs_ext = pytest.mark.skipif(kernels.fold_table_c is None, reason="compiled core not built")


@needs_ext
@settings(max_examples=200, deadline=None)
@given(st.integers(1, 12), st.data(), st.booleans(), st.integers(0, 50))
def test_fold_backends_agree(log_size, data, zdd, base):
    table = np.array(
        data.draw(st.lists(st.integers(0, 6), min_size=1 << log_size, max_size=1 << log_size)),
        dtype=np.int64,
    )
    low = 1 << data.draw(st.integers(0, log_size - 1))
    a = kernels.fold_table_py(table, low, zdd, base)
    b = kernels.fold_table_c(table, low, zdd, base)
    for x, y in zip(a, b):
        assert np.array_equal(x, y)


def test_fold_refs_in_first_appearance_order():
    table = np.array([5, 3, 5, 3, 7, 7, 3, 5], dtype=np.int64)
    out, lo, hi = kernels.fold_table_py(table, 1, False, 10)
    # pairs (5,3) (5,3) (7,7) (3,5): two fresh nodes, one redundant
    assert out.tolist() == [12, 12, 7, 13]
    assert lo.tolist() == [5, 3] and hi.tolist() == [3, 5]


@needs_ext
@pytest.mark.parametrize("kind", list(Kind))
def test_sweep_backends_agree(kind):
    for n in range(1, 9):
        for seed in range(4):
            s = fs_engine.initial_state(TruthTable.random(n, seed), kind)
            if n > 3:
                s = fs_engine.fold(s, n - 2)
            J = ((1 << n) - 1) & ~s.folded
            rank = max(1, bin(J).count("1") // 2)
            with kernels.use_backend("compiled"):
                a = fs_engine.fs_star_truncated(s, J, rank)
            with kernels.use_backend("python"):
                b = fs_engine.fs_star_truncated(s, J, rank)
            assert a.keys() == b.keys()
            for K in a:
                x, y = a[K], b[K]
                assert x.pi_folded == y.pi_folded and x.fold_increments == y.fold_increments
                assert x.prefix == y.prefix and x.min_cost == y.min_cost
                assert np.array_equal(x.table, y.table)
                assert x.node_map == y.node_map


def test_backend_switch_restores():
    before = kernels.BACKEND
    with kernels.use_backend("python"):
        assert kernels.BACKEND == "python" and kernels.sweep is None
    assert kernels.BACKEND == before
    with pytest.raises(ValueError):
        with kernels.use_backend("gpu"):
            pass
