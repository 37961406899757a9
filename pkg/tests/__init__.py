"""
Test suite for scatter2d.
"""
