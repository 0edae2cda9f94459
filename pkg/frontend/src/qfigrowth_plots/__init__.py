"""Chart rendering for qfigrowth CSV outputs."""

from .render import PlotSpec, build_figure, count_optimum_circles, main, render

__version__ = "0.1.0"
