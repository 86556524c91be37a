"""
potentia - logarithmic potential theory on compact sets and integer polynomial lifting
"""
__version__ = "1.0.0"
