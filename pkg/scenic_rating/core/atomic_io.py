#!/usr/bin/env python
"""
Atomic file output.

Command outputs are written to a temporary file in the destination directory and renamed
into place, so a failing command never leaves a partial file behind.
"""

import os
import tempfile
from pathlib import Path
from typing import Union

from scenic_rating.core.logger import get_logger

logger = get_logger("io")


def atomic_write_text(path: Union[str, Path], text: str) -> Path:
    """
    Write text to a file atomically.

    Arguments:
        path: Destination file
        text: Full file content, written as UTF-8 with LF line endings preserved

    Returns:
        Path: The destination path
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=str(target.parent))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp_name, target)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise
    logger.debug("Wrote %d bytes to %s", len(text.encode("utf-8")), target)
    return target
