"""Tests for the orbit-at-infinity analysis."""
