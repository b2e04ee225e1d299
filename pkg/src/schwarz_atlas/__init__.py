"""Hypergeometric monodromy, ADE root-system connections, triangle tessellations,
and exact stratum-condition enumeration."""

__version__ = "0.1.0"
