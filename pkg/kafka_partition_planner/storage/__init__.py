"""Result serialization (CSV)."""
