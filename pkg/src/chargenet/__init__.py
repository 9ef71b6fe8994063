"""chargenet: planning and routing toolkit for EV charging networks.

Core pieces:

- ``geo``: coordinates, great-circle distance, local planar projection
- ``ingest``: CSV/GeoJSON loaders for stations, traffic counts, road networks
- ``charging``: CCCV battery model (driving range, charge-time estimation)
- ``congestion``: traffic-driven demand assignment and station waiting times
- ``robustness``: charger-graph centrality and percolation analysis
- ``siting``: coverage gaps and k-means placement of new stations
- ``router``: congestion-aware charging-stop route optimization
- ``cli`` / ``service``: command-line and HTTP front ends
"""

__version__ = "0.1.0"
