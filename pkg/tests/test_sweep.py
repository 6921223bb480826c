import pytest

from numidx.errors import InvalidInputError
from numidx.sweep import SweepRange, run_sweep


def test_range_values_keep_the_endpoint():
    assert SweepRange.parse("1.5:3.0:0.5").values() == [1.5, 2.0, 2.5, 3.0]
    assert SweepRange(1.5, 3.0, 0.1).values()[-1] == 3.0
    assert len(SweepRange(1.5, 3.0, 0.1).values()) == 16


@pytest.mark.parametrize("text", ["1.0:2:0.5", "2:1.5:0.1", "1.5:3:0", "1.5:3", "a:b:c"])
def test_invalid_ranges(text):
    with pytest.raises(InvalidInputError):
        SweepRange.parse(text)


def test_sweep_rows_on_the_certified_range():
    rows = run_sweep(SweepRange(1.5, 3.0, 0.5), brute=False, workers=2)
    assert [r.p for r in rows] == [1.5, 2.0, 2.5, 3.0]
    assert all(r.exact for r in rows)
    assert all(r.brute is None for r in rows)
    assert rows[1].mp == 0.0
    assert rows[0].mp == pytest.approx(rows[-1].mp, abs=1e-10)
    for r in rows:
        assert r.sandwich_lower <= r.mp
        assert r.q == pytest.approx(r.p / (r.p - 1))


def test_sweep_with_brute_force():
    (row,) = run_sweep(SweepRange(1.25, 1.3, 0.1), resolution=10, workers=1)
    assert row.brute is not None
    assert row.sandwich_lower - 2e-3 <= row.brute <= row.mp + 2e-3


def test_sweep_passes_brute_force_options(monkeypatch):
    import numidx.sweep as sweep
    from numidx.geometry.operators import IDENTITY
    from numidx.index.brute import IndexEstimate

    seen = {}

    def fake_brute(norm, resolution, **options):
        seen.update(options, resolution=resolution)
        return IndexEstimate(value=0.1, argmin=IDENTITY, grid_resolution=resolution, refined=True)

    monkeypatch.setattr(sweep, "brute_force_index", fake_brute)
    (row,) = run_sweep(
        SweepRange(1.5, 1.6, 0.5), resolution=9, coarse_theta_grid=64, theta_grid=128, pattern_rounds=3, workers=1
    )
    assert row.brute == 0.1
    assert seen == {"resolution": 9, "coarse_theta_grid": 64, "theta_grid": 128, "pattern_rounds": 3}
