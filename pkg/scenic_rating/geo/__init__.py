"""
Geographic inputs: photo and location parsing, the radius join and per-location features.
"""
