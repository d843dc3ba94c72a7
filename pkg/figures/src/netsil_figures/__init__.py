"""Figure rendering for netsil benchmark outputs.

Consumes the stable file contracts only (replicates.csv, summary.csv,
k-curve CSVs, rings_points.csv, airline_map.geojson); never imports the
primary package. Images are deterministic: fixed style, no timestamps.
"""

__version__ = "0.1.0"

from .render import FigureSpec, RenderResult, SchemaError, discover_specs, render

__all__ = ["FigureSpec", "RenderResult", "SchemaError", "discover_specs", "render", "__version__"]
