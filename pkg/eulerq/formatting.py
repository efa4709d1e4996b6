"""Format numbers and tables as text."""

import textwrap
from typing import List, Sequence

TAB_WIDTH = 2
TEXT_WIDTH = 70


def indented(text: str, tabs: int = 1) -> str:
    """Indent text of string."""
    indent = TAB_WIDTH * tabs * " "
    return textwrap.indent(text, prefix=indent)


def wrapped(text: str, width: int = TEXT_WIDTH) -> str:
    """Wrap text of string."""
    return textwrap.fill(text, width=width)


def format_number(value: float) -> str:
    """
    Get the shortest text that reads back as the same float.

    >>> format_number(-0.0)
    '0.0'
    """
    if value == 0:
        value = 0.0
    return repr(float(value))


def fixed_digits(value: float) -> str:
    """
    Write a float with 17 significant digits.

    >>> fixed_digits(0.5)
    '0.5'
    """
    if value == 0:
        value = 0.0
    return format(float(value), ".17g")


def format_complex(value: complex) -> str:
    """
    Write a complex number, leaving out a zero imaginary part.

    >>> format_complex(1.5 + 0j)
    '1.5'
    >>> format_complex(1 - 2j)
    '1.0-2.0j'
    """
    value = complex(value)
    if value.imag == 0:
        return format_number(value.real)
    sign = "-" if value.imag < 0 else "+"
    return f"{format_number(value.real)}{sign}{format_number(abs(value.imag))}j"


def render_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    """Align columns of text under a header."""
    widths: List[int] = [len(name) for name in header]
    for row in rows:
        widths = [max(width, len(cell)) for width, cell in zip(widths, row)]
    lines = [
        "  ".join(cell.rjust(width) for cell, width in zip(line, widths))
        for line in [list(header), *rows]
    ]
    return "\n".join(lines)
