import pytest

from obddmin.boolfn import TruthTable
from obddmin.diagram import Kind
from obddmin.dnc import (
    ConfigError,
    DncConfig,
    Level,
    _Run,
    RunStats,
    compose_step,
    opt_obdd,
    opt_obdd_composed,
    preset,
    split_identity_sides,
    split_sizes,
)
from obddmin.fs_engine import fs_star, initial_state, min_obdd_fs, to_mask
from obddmin.qsearch import Mode, query_bound


def fs_cost(tt, kind=Kind.OBDD):
    return min_obdd_fs(tt, kind)[1]


def test_k1_seed3():
    tt = TruthTable.random(8, 3)
    state, stats = opt_obdd(tt, DncConfig.single([0.274863]))
    assert state.min_cost == fs_cost(tt)
    assert stats.totals()["find_min_calls"] == 1


def test_k2_seed5():
    tt = TruthTable.random(10, 5)
    state, _ = opt_obdd(tt, DncConfig.single([0.192754, 0.334571]))
    assert state.min_cost == fs_cost(tt)


def test_degenerate_split_is_exact():
    # the split leaves a single variable on top; under alpha_1 < 1/3 only n = 2 allows it
    for seed in range(8):
        tt = TruthTable.random(2, seed)
        state, _ = opt_obdd(tt, DncConfig.single([0.3]))
        assert state.min_cost == fs_cost(tt)
    # without the outer restriction, compose_step takes it at any size
    tt = TruthTable.random(7, 1)
    assert split_sizes([0.85], 7) == [6]
    run = _Run(Mode.CLASSICAL, 2.0**-7, True, RunStats())
    out = compose_step(initial_state(tt), 0x7F, Level(1, (0.85,)), lambda s, M: fs_star(s, M), run)
    assert out.min_cost == fs_cost(tt)


def test_compose_step_with_prefix():
    tt = TruthTable.random(8, 11)
    prefix = fs_star(initial_state(tt), [0, 1])
    J = to_mask(range(2, 8))
    run = _Run(Mode.CLASSICAL, 2.0**-8, True, RunStats())
    out = compose_step(prefix, J, Level(1, (0.27,)), lambda s, M: fs_star(s, M), run)
    assert out.min_cost == fs_star(prefix, J).min_cost
    assert out.prefix == (0b11, J)


def test_deep_chain_n10():
    tt = TruthTable.random(10, 2)
    state, stats = opt_obdd_composed(tt, DncConfig(preset("table2-chain10")))
    assert state.min_cost == fs_cost(tt)
    assert stats.totals()["find_min_calls"] > 0


def test_two_level_chain_n12():
    tt = TruthTable.random(12, 4)
    state, _ = opt_obdd_composed(tt, DncConfig(preset("table2-chain2")))
    assert state.min_cost == fs_cost(tt)


def test_single_level_composed_is_opt_obdd():
    tt = TruthTable.random(9, 8)
    cfg = DncConfig(preset("table1-k3"))
    a, _ = opt_obdd(tt, cfg)
    b, _ = opt_obdd_composed(tt, cfg)
    assert a.pi_folded == b.pi_folded and a.min_cost == b.min_cost


@pytest.mark.parametrize("name", ["table1-k1", "table1-k6", "table2-chain3"])
def test_constant_function(name):
    for value in (0, 1):
        state, _ = opt_obdd_composed(TruthTable.constant(value, 8), DncConfig(preset(name)))
        assert state.min_cost == 0


@pytest.mark.parametrize("kind", list(Kind))
def test_every_preset_small(kind):
    for seed in range(3):
        tt = TruthTable.random(9, seed)
        want = fs_cost(tt, kind)
        for name in [f"table1-k{k}" for k in range(1, 7)] + ["table2-chain2", "table2-chain4"]:
            state, _ = opt_obdd_composed(tt, DncConfig(preset(name), kind=kind))
            assert state.min_cost == want, name


def test_memo_is_transparent():
    tt = TruthTable.random(10, 7)
    cfg = dict(levels=preset("table2-chain2"), mode="qsim")
    on, s_on = opt_obdd_composed(tt, DncConfig(**cfg))
    off, s_off = opt_obdd_composed(tt, DncConfig(**cfg, memo=False))
    assert on.pi_folded == off.pi_folded and on.min_cost == off.min_cost
    t_on, t_off = s_on.totals(), s_off.totals()
    assert t_on["classical_evals"] < t_off["classical_evals"]
    assert t_on["unmemoized_classical_evals"] == t_off["classical_evals"]
    assert t_on["unmemoized_find_min_calls"] == t_off["find_min_calls"]
    assert t_on["unmemoized_quantum_query_bound"] == t_off["quantum_query_bound"]
    assert t_off["memo_hits"] == 0


def test_qsim_accounting():
    n = 10
    tt = TruthTable.random(n, 12)
    classical, _ = opt_obdd_composed(tt, DncConfig(preset("table1-k2")))
    quantum, stats = opt_obdd_composed(tt, DncConfig(preset("table1-k2"), mode="qsim"))
    assert classical.pi_folded == quantum.pi_folded
    for r in stats.records:
        assert r["epsilon"] == 2.0**-n
        assert r["quantum_query_bound"] == query_bound(r["N"], 2.0**-n)
        assert r["classical_evals"] == r["N"]


def test_split_sizes():
    assert split_sizes([0.274863], 12) == [3]
    assert split_sizes([0.25, 0.26, 0.27], 8) == [2, 3, 4]  # collisions pushed up
    assert split_sizes([0.5], 3) == [2]  # round half up
    with pytest.raises(ConfigError):
        split_sizes([0.4, 0.5, 0.6, 0.7], 4)
    assert split_sizes([0.4, 0.5, 0.6, 0.7], 4, strict=False) == [2, 3]


def test_config_validation():
    with pytest.raises(ConfigError):
        Level(2, (0.3,))
    with pytest.raises(ConfigError):
        Level(2, (0.3, 0.2))
    with pytest.raises(ConfigError):
        Level(1, (1.0,))
    with pytest.raises(ConfigError):
        DncConfig.single([0.34])
    with pytest.raises(ConfigError):
        preset("table1-k7")
    with pytest.raises(ConfigError):
        preset("nonsense")
    with pytest.raises(ConfigError):
        opt_obdd(TruthTable.random(4, 0), DncConfig(preset("table2-chain2")))
    with pytest.raises(ConfigError):
        opt_obdd_composed(TruthTable.random(5, 0), DncConfig(preset("table1-k6")))


@pytest.mark.parametrize("seed", range(5))
def test_split_identity(seed):
    tt = TruthTable.random(8, seed)
    s = initial_state(tt)
    for k in range(1, 8):
        lhs, rhs = split_identity_sides(s, range(8), k)
        assert lhs == rhs
    prefix = fs_star(s, [2, 5, 6])
    for k in range(1, 5):
        lhs, rhs = split_identity_sides(prefix, [0, 1, 3, 4, 7], k)
        assert lhs == rhs
