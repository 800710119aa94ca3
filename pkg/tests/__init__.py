"""
cyclepack test suite
"""
