from .io import FigsError, read_detail, read_table
from .render import FigureSpec, build_figure, render

__all__ = [
    "FigsError",
    "FigureSpec",
    "build_figure",
    "read_detail",
    "read_table",
    "render",
]
