"""
Spike Forecaster - Tests Package
"""
