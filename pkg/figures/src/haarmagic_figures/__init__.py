"""Figure pipeline for haarmagic campaign outputs."""

from .io import MissingSeries, SchemaMismatch, load_summary
from .render import FIGURE_IDS, FigureJob, hist_density, render

__version__ = "0.1.0"
