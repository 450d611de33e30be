"""figkit: plots BER and sum-rate curves from quantmimo sweep CSV files."""

__version__ = "0.1.0"

from .schema import CSV_COLUMNS, SchemaError, load_results
from .render import PlotSpec, NoSeriesError, render

__all__ = ["CSV_COLUMNS", "SchemaError", "load_results",
           "PlotSpec", "NoSeriesError", "render", "__version__"]
