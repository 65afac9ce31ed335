"""Renders tierwave experiment CSVs as figures."""
from .render import (EXPERIMENTS, FigureSpec, SchemaError, load_table, render,
                     render_all)

__all__ = ["EXPERIMENTS", "FigureSpec", "SchemaError", "load_table",
           "render", "render_all"]

__version__ = "0.1.0"
