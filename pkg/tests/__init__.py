"""Tests for the entropic package."""
