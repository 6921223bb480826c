import math

import numpy as np
import pytest

from numidx.search import golden_section_max, grid_refine_max, pattern_search_min


def test_golden_section_is_vectorised():
    a = np.array([0.0, 1.0])
    b = np.array([2.0, 3.0])
    x, v = golden_section_max(lambda t: -((t - np.array([0.5, 2.5])) ** 2), a, b)
    assert x == pytest.approx([0.5, 2.5], abs=1e-8)
    assert v == pytest.approx([0.0, 0.0], abs=1e-15)


def test_grid_refine_max_polishes_between_grid_points():
    grid = np.linspace(0.0, 1.0, 11)
    best = grid_refine_max(lambda t: np.sin(math.pi * t + 0.1), grid)
    assert best.value[0] == pytest.approx(1.0, abs=1e-14)
    assert best.argmax[0] == pytest.approx(0.5 - 0.1 / math.pi, abs=1e-7)


def test_grid_refine_max_ties_go_to_smallest_abscissa():
    grid = np.linspace(0.0, 1.0, 101)
    best = grid_refine_max(lambda t: np.zeros_like(t), grid)
    assert best.argmax[0] == 0.0


def test_grid_refine_max_periodic_rows():
    shifts = np.array([[0.3], [5.0]])
    grid = np.linspace(0.0, 2 * math.pi, 256, endpoint=False)
    best = grid_refine_max(lambda t: np.cos(t - shifts), grid, period=2 * math.pi)
    assert best.value == pytest.approx([1.0, 1.0], abs=1e-14)
    assert best.argmax == pytest.approx([0.3, 5.0], abs=1e-7)


def test_pattern_search_finds_quadratic_minimum():
    target = np.array([0.3, -0.2, 0.1])
    x, fx = pattern_search_min(lambda pts: np.sum((pts - target) ** 2, axis=1), np.zeros(3), step=0.25, rounds=200)
    assert x == pytest.approx(target, abs=1e-5)
    assert fx < 1e-9
