"""salstream: a streaming-analytics DSL, sliding-window sketches, and a
partitioned dataflow engine for netflow feature extraction."""

__version__ = "0.1.0"
