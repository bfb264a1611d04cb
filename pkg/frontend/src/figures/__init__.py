"""Figure regeneration from experiment output files (CSV/JSON interface)."""

from .render import KINDS, FigureRequest, RenderError, render

__all__ = ["KINDS", "FigureRequest", "RenderError", "render"]
