"""Readout Nonlinearity - dispersive readout of a multilevel qubit beyond the weak-drive limit."""

__version__ = "0.1.0"
