"""Atomic artifact writers.

Every file the pipeline produces is first written to a temporary file in
the destination directory and then moved into place with ``os.replace``,
so readers never observe a partially written artifact.
"""

from __future__ import annotations

import json
import logging
import os
import tempfile
from pathlib import Path
from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from collections.abc import Iterable

    from pydantic import BaseModel

logger = logging.getLogger(__name__)


def write_bytes_atomic(path: Path | str, data: bytes) -> Path:
    """Write bytes to ``path`` via a temp file and rename.

    Args:
        path: Destination file. Parent directories are created.
        data: File contents.

    Returns:
        The destination path.
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp_name, target)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise
    logger.debug("write_bytes_atomic: %s (%d bytes)", target, len(data))
    return target


def write_text_atomic(path: Path | str, text: str) -> Path:
    """Write UTF-8 text atomically."""
    return write_bytes_atomic(path, text.encode("utf-8"))


def write_json_atomic(path: Path | str, payload: Any) -> Path:
    """Write a JSON document atomically.

    Pydantic models are dumped by alias; anything else goes through ``json``.
    """
    if hasattr(payload, "model_dump_json"):
        text = payload.model_dump_json(indent=2, by_alias=True)
    else:
        text = json.dumps(payload, indent=2, sort_keys=True)
    return write_text_atomic(path, text + "\n")


def write_jsonl_atomic(path: Path | str, records: Iterable[BaseModel]) -> Path:
    """Write one JSON object per line atomically.

    An empty iterable produces a zero-length file.
    """
    lines = [record.model_dump_json(by_alias=True) + "\n" for record in records]
    return write_text_atomic(path, "".join(lines))
