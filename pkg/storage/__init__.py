"""
Spike Forecaster - Artifact Storage
"""
