"""Battery-aware co-evolution of modular robot bodies and oscillator gaits."""

__version__ = "0.1.0"
