"""Tests for the Kafka partition planner."""
