#!/usr/bin/env python
"""
This module provides the plain-text table rendering used by the reporting commands.

Functions:
- clean_values: Replaces None values with a placeholder and converts every value to a stripped string.
- column_widths: Computes the width of each column from its header and its longest value.
- format_rows: Renders a header line, a dashed rule and one " | "-separated line per row.
- format_and_print_rows: Prints the output of format_rows.

This module is intended for use in a command-line interface that prints evaluation tables and dataset summaries.
"""

from typing import List, Sequence, Tuple


def clean_values(rows: Sequence[Sequence], placeholder: str = "-") -> List[Tuple[str, ...]]:
    """
    Replace None values with a placeholder and convert all values to strings.

    Arguments:
    - rows (Sequence[Sequence]): Rows of arbitrary values.
    - placeholder (str): The string to replace None values with (default is "-").

    Return:
    - List[Tuple[str, ...]]: Rows of cleaned strings, newlines replaced by spaces.
    """
    cleaned_rows = []
    for row in rows:
        cleaned_row = []
        for val in row:
            if val is None:
                cleaned_row.append(placeholder)
            else:
                cleaned_row.append(str(val).strip().replace("\n", " "))
        cleaned_rows.append(tuple(cleaned_row))
    return cleaned_rows


def column_widths(headers: Sequence[str], rows: Sequence[Sequence[str]]) -> List[int]:
    """
    Calculate the column widths dynamically based on the longest content.

    Arguments:
    - headers (Sequence[str]): Column headers.
    - rows (Sequence[Sequence[str]]): Cleaned rows.

    Return:
    - List[int]: One width per header.
    """
    return [
        max(len(header), max((len(r[i]) if i < len(r) else 0 for r in rows), default=0))
        for i, header in enumerate(headers)
    ]


def format_rows(rows: Sequence[Sequence], headers: Sequence[str]) -> str:
    """
    Format the rows to match the columns.

    Arguments:
    - rows (Sequence[Sequence]): Table rows, one value per header.
    - headers (Sequence[str]): Column headers, printed as given.

    Return:
    - str: The table text ending with a newline; trailing spaces are stripped from every line.
    """
    cleaned = clean_values(rows)
    widths = column_widths(headers, cleaned)

    header_fmt = " | ".join(h.ljust(w) for h, w in zip(headers, widths))
    lines = [header_fmt.rstrip(), "-" * len(header_fmt)]
    for r in cleaned:
        lines.append(" | ".join(val.ljust(widths[i]) for i, val in enumerate(r)).rstrip())
    return "\n".join(lines) + "\n"


def format_and_print_rows(rows: Sequence[Sequence], headers: Sequence[str]) -> None:
    """Print a table rendered by format_rows."""
    print(format_rows(rows, headers), end="")
