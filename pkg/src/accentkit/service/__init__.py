"""HTTP stats service: region browsing, what-if selection queries, heatmaps."""

from .app import create_app
from .state import ServiceState, load_state

__all__ = ["ServiceState", "create_app", "load_state"]
