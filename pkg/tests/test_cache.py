import numpy as np
import pytest

from affusion import __version__, fusion
from affusion.fusion import _cache_file, build_table, load_table, save_table
from affusion.weights import context


@pytest.fixture(autouse=True)
def fresh_memory_cache(monkeypatch):
    monkeypatch.setattr(fusion, "_TABLES", {})
    monkeypatch.delenv("AFFUSION_CACHE", raising=False)


def test_round_trip(tmp_path):
    ctx = context("B3k3")
    table = build_table(ctx, tmp_path)
    path = _cache_file(tmp_path, ctx)
    assert path.exists()
    assert __version__ in path.name
    again = load_table(ctx, path)
    assert np.array_equal(again.N, table.N)


def test_cache_is_used(tmp_path, monkeypatch):
    ctx = context("A2k3")
    table = build_table(ctx, tmp_path)
    monkeypatch.setattr(fusion, "_TABLES", {})
    monkeypatch.setattr(fusion, "_compute", lambda c: pytest.fail("recomputed despite cache"))
    assert np.array_equal(build_table(ctx, tmp_path).N, table.N)


def test_environment_variable(tmp_path, monkeypatch):
    monkeypatch.setenv("AFFUSION_CACHE", str(tmp_path))
    ctx = context("G2k2")
    build_table(ctx)
    assert _cache_file(tmp_path, ctx).exists()


@pytest.mark.parametrize("damage", ["truncate", "header", "order", "garbage"])
def test_damaged_cache_is_ignored(tmp_path, monkeypatch, damage):
    ctx = context("C2k2")
    table = build_table(ctx, tmp_path)
    path = _cache_file(tmp_path, ctx)
    lines = path.read_text().splitlines()
    if damage == "truncate":
        lines = lines[:-2]
    elif damage == "header":
        lines[0] = "# affusion fusion table 0.0.0"
    elif damage == "order":
        lines[4], lines[5] = lines[5], lines[4]
    else:
        lines[-1] = "x y z"
    path.write_text("\n".join(lines) + "\n")
    assert load_table(ctx, path) is None
    monkeypatch.setattr(fusion, "_TABLES", {})
    rebuilt = build_table(ctx, tmp_path)
    assert np.array_equal(rebuilt.N, table.N)
    assert load_table(ctx, path) is not None


def test_other_context_in_file_is_rejected(tmp_path):
    a, b = context("A1k3"), context("A3k1")
    path = tmp_path / "t.fus"
    save_table(build_table(a), path)
    assert load_table(b, path) is None


def test_no_cache_without_directory(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    build_table(context("A1k2"))
    assert list(tmp_path.iterdir()) == []
