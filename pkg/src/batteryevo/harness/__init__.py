"""Experiment orchestration: config, calibration, statistics, persistence, figures."""
