import numpy as np
import pytest

from numidx.errors import InvalidInputError, OutOfScopeError
from numidx.index.contact import ContactVector
from numidx.index.minimax import (
    kprime_vertices,
    lifted_constraints,
    minimax_simplex,
    minimax_simplex_grid,
    minimax_simplex_lp,
    minimax_simplex_oracle,
    simplex_objective,
)
from numidx.verify import random_contact


def test_symmetric_case():
    c = ContactVector(1.0, 1.0, 1.0, 1.0)
    assert minimax_simplex(c) == pytest.approx(0.5)
    assert minimax_simplex_oracle(c) == pytest.approx(0.5, abs=1e-12)
    assert float(simplex_objective(c, np.full(4, 0.25))) == pytest.approx(0.5)


def test_closed_form_example():
    c = ContactVector(1.0, 0.5, 0.5, 0.25)
    assert minimax_simplex(c) == pytest.approx(2 / 9)
    assert minimax_simplex_oracle(c) == pytest.approx(2 / 9, abs=1e-9)


def test_zero_c4_is_out_of_scope_for_closed_form_only():
    c = ContactVector(1.0, 1.0, 1.0, 0.0)
    with pytest.raises(OutOfScopeError):
        minimax_simplex(c)
    assert minimax_simplex_oracle(c) == pytest.approx(0.0, abs=1e-12)


def test_lifted_constraints_shape():
    a_eq, b_eq, a_ub, b_ub = lifted_constraints(ContactVector(1.0, 0.7, 0.6, 0.2))
    assert a_eq.shape == (1, 5)
    assert a_ub.shape == (9, 5)
    assert b_ub.tolist()[0] == 2.0


def test_kprime_vertices_are_feasible():
    c = ContactVector(1.0, 0.8, 0.6, 0.3)
    a_eq, b_eq, a_ub, b_ub = lifted_constraints(c)
    vertices = kprime_vertices(c)
    assert len(vertices) > 0
    assert np.all(vertices @ a_ub.T <= b_ub + 1e-9)
    assert np.allclose(vertices[:, :4].sum(axis=1), 1.0)


def test_kprime_rejects_negative_contact():
    # ContactVector itself refuses negative entries
    with pytest.raises(InvalidInputError):
        kprime_vertices(ContactVector(1.0, -0.1, 0.5, 0.1))


def test_random_contacts_agree_across_oracles():
    rng = np.random.default_rng(2)
    for _ in range(100):
        c = random_contact(rng)
        closed = minimax_simplex(c)
        assert minimax_simplex_oracle(c) == pytest.approx(closed, abs=1e-9)
        assert minimax_simplex_lp(c) == pytest.approx(closed, abs=1e-9)


def test_grid_oracle_agrees():
    rng = np.random.default_rng(4)
    for _ in range(3):
        c = random_contact(rng)
        assert minimax_simplex_grid(c) == pytest.approx(minimax_simplex(c), abs=1e-6)


@pytest.mark.parametrize(
    "values",
    [
        (1.0, 0.0657, 0.8226, 0.0600),
        (1.0, 0.05, 0.9, 0.01),
        (1.0, 0.9, 0.05, 0.04),
        (1.0, 0.06, 0.07, 0.05),
    ],
)
def test_grid_oracle_follows_thin_valleys(values):
    c = ContactVector(*values)
    assert minimax_simplex_grid(c) == pytest.approx(minimax_simplex(c), abs=1e-6)
