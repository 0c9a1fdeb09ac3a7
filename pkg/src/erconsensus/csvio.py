"""CSV emission: comment-line config echoes and full-precision doubles."""

from __future__ import annotations

import numpy as np


def format_value(x) -> str:
    """Floats at 17 significant digits (lossless round-trip); ints verbatim."""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def render_table(comments: dict, columns: list[tuple[str, np.ndarray]]) -> str:
    """One string for the whole file: ``# key=value`` echo lines, a header
    row, then one row per index. Keeping emission in one place makes output
    byte-reproducible."""
    lines = [f"# {key}={value}" for key, value in comments.items()]
    lines.append(",".join(name for name, _ in columns))
    length = len(columns[0][1])
    arrays = [np.asarray(col) for _, col in columns]
    for arr in arrays:
        if len(arr) != length:
            raise ValueError("all columns must have equal length")
    for row in range(length):
        lines.append(",".join(format_value(arr[row]) for arr in arrays))
    return "\n".join(lines) + "\n"


def write_table(path, comments: dict, columns: list[tuple[str, np.ndarray]]) -> None:
    text = render_table(comments, columns)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)
