"""Tests para dphi."""
