from numidx.settings import EngineSettings, get_settings, reload_settings


def test_defaults():
    s = EngineSettings()
    assert s.grid_resolution == 64
    assert s.theta_grid == 4096
    assert s.condition_grid == 100_000
    assert s.log_level == "WARNING"


def test_env_overrides(monkeypatch):
    monkeypatch.setenv("NIDX_GRID", "32")
    monkeypatch.setenv("NIDX_WORKERS", "2")
    monkeypatch.setenv("NIDX_LOG_LEVEL", "debug")
    try:
        s = reload_settings()
        assert s.grid_resolution == 32
        assert s.workers == 2
        assert s.log_level == "DEBUG"
        assert get_settings() is s
    finally:
        monkeypatch.delenv("NIDX_GRID")
        monkeypatch.delenv("NIDX_WORKERS")
        monkeypatch.delenv("NIDX_LOG_LEVEL")
        reload_settings()


def test_malformed_env_falls_back(monkeypatch):
    monkeypatch.setenv("NIDX_GRID", "lots")
    monkeypatch.setenv("NIDX_LOG_LEVEL", "chatty")
    try:
        s = reload_settings()
        assert s.grid_resolution == 64
        assert s.log_level == "WARNING"
    finally:
        monkeypatch.delenv("NIDX_GRID")
        monkeypatch.delenv("NIDX_LOG_LEVEL")
        reload_settings()
