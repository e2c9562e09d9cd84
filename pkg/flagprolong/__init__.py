"""
flagprolong: exact Tanaka prolongations of graded nilpotent symbols over Q.
"""

__version__ = "0.1.0"
