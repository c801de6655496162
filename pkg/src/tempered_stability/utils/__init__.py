"""
Utility modules for the tempered stability package.
"""

from .validators import OutputValidator

__all__ = ["OutputValidator"]
