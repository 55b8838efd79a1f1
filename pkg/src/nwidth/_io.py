"""Small I/O helpers: lossless float formatting and atomic file writes."""

import os
import tempfile


def fmt(x) -> str:
    """Render a float64 with 17 significant digits (decimal round-trips exactly)."""
    return format(float(x), ".17g")


def atomic_write_text(path, text: str) -> None:
    """Write text to path via a temporary file in the same directory plus rename."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".nwidth-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
