import json
import logging
import os
from typing import Optional

import fsspec

logger = logging.getLogger(__name__)

_FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "fixtures")
_BUILTIN_PREFIX = "builtin:"


def resolve_path(urlpath: str) -> str:
    """
    Map ``builtin:NAME`` references to the packaged fixture files.

    Parameters
    ----------
    urlpath: str
        A local path, any fsspec url, or ``builtin:F2`` style reference

    Returns
    -------
    str
        A path fsspec can open
    """
    if urlpath.startswith(_BUILTIN_PREFIX):
        name = urlpath[len(_BUILTIN_PREFIX) :]
        path = os.path.join(_FIXTURE_DIR, f"{name}.json")
        if not os.path.exists(path):
            raise FileNotFoundError(f"no packaged recipe named {name!r}")
        return path
    return urlpath


def read_json(urlpath: str):
    """Load a JSON document through fsspec."""
    path = resolve_path(urlpath)
    logger.debug(f"read_json: {path}")
    try:
        with fsspec.open(path, "rt", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{urlpath} is not valid JSON: {exc}") from exc


def read_text(urlpath: str) -> str:
    with fsspec.open(resolve_path(urlpath), "rt", encoding="utf-8") as f:
        return f.read()


def write_text(urlpath: str, text: str, mkdirs: bool = True):
    """
    Write text through fsspec, creating parent directories if needed.

    Parameters
    ----------
    urlpath: str
        Destination path or url

    text: str
        Content to write

    mkdirs: bool
        Create the parent directory first (ignored by stores without directories)
    """
    logger.debug(f"write_text: {urlpath} ({len(text)} chars)")
    fs, path = fsspec.core.url_to_fs(urlpath)
    if mkdirs:
        parent = fs._parent(path)
        if parent:
            fs.makedirs(parent, exist_ok=True)
    with fs.open(path, "wt", encoding="utf-8") as f:
        f.write(text)


def write_json(urlpath: str, document, indent: Optional[int] = 2):
    write_text(urlpath, json.dumps(document, indent=indent, ensure_ascii=False) + "\n")


def env_int(name: str, value: Optional[int], default: int) -> int:
    """Explicit value, else environment variable ``name``, else ``default``."""
    if value is not None:
        return int(value)
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise ValueError(f"environment variable {name} must be an integer, got {raw!r}") from exc
