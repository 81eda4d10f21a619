"""
Tests for peano_berg
"""
