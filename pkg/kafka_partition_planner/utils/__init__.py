"""Utility functions for seeding, hashing, etc."""
