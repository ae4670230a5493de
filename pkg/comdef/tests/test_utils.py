import os

import fsspec
import pytest

from comdef.lattice import FiniteLattice
from comdef.utils import env_int, read_json, read_text, resolve_path, write_json, write_text


def test_resolve_builtin():
    path = resolve_path("builtin:F2")
    assert os.path.exists(path)
    assert path.endswith(os.path.join("fixtures", "F2.json"))
    assert resolve_path("some/dir/file.json") == "some/dir/file.json"
    with pytest.raises(FileNotFoundError, match="nope"):
        resolve_path("builtin:nope")


def test_memory_round_trip(n5):
    url = "memory://comdef-utils/nested/n5.json"
    n5.save(url)
    assert fsspec.filesystem("memory").exists(url)
    assert FiniteLattice.load(url).labels == n5.labels
    write_text("memory://comdef-utils/note.txt", "hello\n")
    assert read_text("memory://comdef-utils/note.txt") == "hello\n"


def test_write_json_creates_parents(tmp_path):
    path = str(tmp_path / "a" / "b" / "doc.json")
    write_json(path, {"label": "N_ω"})
    assert read_json(path) == {"label": "N_ω"}
    assert "N_ω" in read_text(path)


def test_read_json_rejects_bad_documents(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ValueError, match="not valid JSON"):
        read_json(str(path))


def test_env_int(monkeypatch):
    monkeypatch.delenv("COMDEF_TEST_INT", raising=False)
    assert env_int("COMDEF_TEST_INT", None, 3) == 3
    monkeypatch.setenv("COMDEF_TEST_INT", "7")
    assert env_int("COMDEF_TEST_INT", None, 3) == 7
    assert env_int("COMDEF_TEST_INT", 2, 3) == 2
    monkeypatch.setenv("COMDEF_TEST_INT", "")
    assert env_int("COMDEF_TEST_INT", None, 3) == 3
    monkeypatch.setenv("COMDEF_TEST_INT", "many")
    with pytest.raises(ValueError, match="COMDEF_TEST_INT"):
        env_int("COMDEF_TEST_INT", None, 3)
