"""Net-zero deployment pathway environment"""

__version__ = "0.1.0"
