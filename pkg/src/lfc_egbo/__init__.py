"""PID tuning benchmark for two-area load frequency control."""

__version__ = "0.1.0"
