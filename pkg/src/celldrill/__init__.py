"""celldrill: OpenCellID drill-down toolkit.

Finds each operator's highest-traffic tracking area and its top cells
from a crowdsourced cell dump, and supports demarcating a 5G deployment
rectangle whose area in km2 is the pipeline's terminal output.
"""

__version__ = "0.1.0"
