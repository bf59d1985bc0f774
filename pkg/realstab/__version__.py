__version__ = "2026.0.3"
__changes__ = """
- Tolerances can be overridden per block with `with Tolerances(...)`
- Cluster-aware pole/zero cancellation for repeated roots
- `realstab robust --margin` reports the small-gain margin of an S block
"""
