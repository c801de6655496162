"""
Source package for tempered fractional stability modules.
"""
