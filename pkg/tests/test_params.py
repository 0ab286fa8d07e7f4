import math

import numpy as np
import pytest
from scipy.optimize import fsolve

from obddmin.params import (
    TABLE1,
    TABLE2,
    SolverError,
    binary_entropy,
    closed_form_alpha_no_preprocess,
    composition_chain,
    f_gamma,
    format_table,
    g_gamma,
    preprocess_exponent,
    recurrence_exponent,
    solve_system,
)


def joint_system(k, gamma, guess):
    """All k balance equations solved at once; independent of the nested solver."""

    def eqs(al):
        al = list(al) + [1.0]
        out = [preprocess_exponent(al[0]) - f_gamma(al[k - 1], 1.0, gamma)]
        for j in range(1, k):
            out.append(f_gamma(al[j - 1], al[j], gamma) - g_gamma(al[j], al[j + 1], gamma))
        return out

    return fsolve(eqs, guess, xtol=1e-12)


def test_recurrence_examples():
    assert abs(2 ** recurrence_exponent(1, [0.274863]) - 2.97625) < 1e-4
    assert abs(2 ** recurrence_exponent(2, [0.192754, 0.334571]) - 2.85690) < 1e-4
    a = closed_form_alpha_no_preprocess()
    assert abs(2 ** recurrence_exponent(1, [a], preprocess=False) - 2.98581) < 1e-4


def test_closed_form_alpha():
    l3 = math.log2(3)
    assert abs(closed_form_alpha_no_preprocess() - 0.269577) < 1e-6
    # it balances the two no-preprocess terms
    a = closed_form_alpha_no_preprocess()
    assert abs((1 - a) + a * l3 - (1 - a) * l3) < 1e-12


def test_recurrence_rejects_bad_vectors():
    for bad in ([0.3, 0.2], [0.0], [1.2]):
        with pytest.raises(ValueError):
            recurrence_exponent(len(bad), bad)
    with pytest.raises(ValueError):
        recurrence_exponent(2, [0.2])
    with pytest.raises(ValueError):
        recurrence_exponent(2, [0.2, 0.3], preprocess=False)


@pytest.mark.parametrize("k", range(1, 7))
def test_table1_rows(k):
    sol = solve_system(k, 3.0)
    gamma, alphas = TABLE1[k]
    assert abs(sol.beta_out - gamma) < 1e-4
    assert np.max(np.abs(np.array(sol.alphas) - alphas)) < 2e-6
    assert max(sol.residuals) < 1e-9
    assert sol.alphas[0] < 1 / 3
    assert np.allclose(joint_system(k, 3.0, alphas), sol.alphas, atol=1e-9)


def test_k6_example_alphas():
    sol = solve_system(6, 3.0)
    want = (0.183791, 0.183802, 0.183974, 0.186131, 0.206480, 0.343573)
    assert np.max(np.abs(np.array(sol.alphas) - want)) < 2e-6


def test_k6_example_beta_bound():
    # the published bound as stated; see the decisions ledger for the analysis
    assert solve_system(6, 3.0).beta_out <= 2.83728


def test_k2_and_k1_examples():
    sol = solve_system(2, 3.0)
    assert abs(sol.alphas[0] - 0.192755) < 2e-6 and abs(sol.alphas[1] - 0.334571) < 2e-6
    assert abs(sol.beta_out - 2.8569) < 1e-4
    sol = solve_system(1, 3.0)
    assert abs(sol.alphas[0] - 0.274862) < 2e-6 and abs(sol.beta_out - 2.97625) < 1e-4


def test_chain_examples():
    two = composition_chain(6, 3.0, 2)
    assert [round(r.beta_out, 5) for r in two] == [2.83728, 2.79364]
    one = composition_chain(6, 3.0, 1)
    assert one[0] == solve_system(6, 3.0)


def test_chain_final_bound():
    assert composition_chain(6, 3.0, 10)[-1].beta_out <= 2.77286


def test_chain_reproduces_table2():
    rows = composition_chain(6, 3.0, 10)
    for row, (gamma_in, beta, alphas) in zip(rows, TABLE2):
        assert abs(row.gamma_in - gamma_in) < 1e-4
        assert abs(row.beta_out - beta) < 1e-4
        assert np.max(np.abs(np.array(row.alphas) - alphas)) < 2e-6
        assert max(row.residuals) < 1e-9 and row.alphas[0] < 1 / 3


def test_chain_decreases_above_two():
    betas = [r.beta_out for r in composition_chain(6, 3.0, 10)]
    assert all(b < a for a, b in zip(betas, betas[1:]))
    assert betas[-1] > 2


@pytest.mark.parametrize("n", range(1, 31))
def test_entropy_bound(n):
    for k in range(n + 1):
        assert math.comb(n, k) <= 2 ** (n * binary_entropy(k / n)) * (1 + 1e-12)


def test_entropy_edges():
    assert binary_entropy(0) == binary_entropy(1) == 0
    assert binary_entropy(0.5) == 1
    with pytest.raises(ValueError):
        binary_entropy(1.5)


def test_solver_errors():
    with pytest.raises(ValueError):
        solve_system(0)
    with pytest.raises(ValueError):
        solve_system(2, gamma=2.0)
    with pytest.raises(SolverError):
        # against a base-4 sub-solver the balance point lies beyond alpha_1 = 1/3
        solve_system(1, gamma=4.0)


def test_format_table_six_digits():
    text = format_table([solve_system(1, 3.0), solve_system(2, 3.0)])
    lines = text.splitlines()
    assert lines[0].split()[:3] == ["k", "beta", "alpha_1"]
    assert "2.97625" in lines[2] and "0.274863" in lines[2]
    assert lines[2].split()[-1] == "---"
