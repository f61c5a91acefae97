"""Onicescu, Uffink and Shannon information measures of mean-field densities."""

__version__ = "0.1.0"
