import logging

import pytest

from robust_cic.config import LOCAL_FILE, global_config_path, load_config, resolve


@pytest.fixture(autouse=True)
def isolate_home(tmp_path, monkeypatch):
    monkeypatch.setenv("XDG_CONFIG_HOME", str(tmp_path / "xdg"))


def write_global(text):
    path = global_config_path()
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def test_no_files_gives_empty_config(tmp_path):
    assert load_config(tmp_path) == {}


def test_local_file_overrides_global(tmp_path):
    write_global('seed = 1\nout = "global"\n[bench-n]\nk = 5\nrepeats = 3\n')
    (tmp_path / LOCAL_FILE).write_text('seed = 2\n[bench-n]\nk = 7\n')
    cfg = load_config(tmp_path)
    assert cfg["seed"] == 2
    assert cfg["out"] == "global"
    assert cfg["bench-n"] == {"k": 7, "repeats": 3}


def test_resolution_order():
    cfg = {"k": 4, "bench-d": {"k": 6}}
    assert resolve(cfg, "bench-d", "k", 9, 10) == 9
    assert resolve(cfg, "bench-d", "k", None, 10) == 6
    assert resolve(cfg, "bench-n", "k", None, 10) == 4
    assert resolve(cfg, "bench-n", "lambda", None, 30.0) == 30.0


def test_invalid_file_is_ignored_with_warning(tmp_path, caplog):
    write_global("seed = [unclosed\n")
    with caplog.at_level(logging.WARNING, logger="robust_cic"):
        assert load_config(tmp_path) == {}
    assert "ignoring unreadable config file" in caplog.text
