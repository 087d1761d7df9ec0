"""Partition planning model, solvers, benchmark and sweeps."""
