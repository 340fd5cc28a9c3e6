"""Tests for dynlab."""
