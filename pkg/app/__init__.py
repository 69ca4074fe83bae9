"""
leibniz-hnn command-line application package.

Entry point for ``leibniz-hnn verify|analyze|derivations|hnn|solve|free|fixtures``.
"""

__version__ = "0.1.0"
