"""Figures for wavereg CLI output.

Renders oracle-vs-adaptive boxplots, selection-constant risk curves,
and function/scatter plots from the CSV and JSON files the estimator's
command line writes. Nothing here recomputes statistics: every number
on a figure comes from the input files, and each maker returns a report
carrying the sha256 of the inputs it consumed, so identical inputs are
verifiably rendered to identical images.
"""

from .plots import (SchemaError, make_boxplots, make_function_plots,
                    make_gamma_curve)

__version__ = "0.1.0"

__all__ = [
    "SchemaError",
    "make_boxplots",
    "make_function_plots",
    "make_gamma_curve",
]
