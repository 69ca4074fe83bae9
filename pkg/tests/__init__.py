"""
Test package for leibniz-hnn.
"""
