"""Event-by-event simulation of a Mach-Zehnder interferometer built from
memory-bearing learning-machine beamsplitters, with a memoryless wave-theory
baseline and reset-protocol experiments that separate the two."""

__version__ = "0.1.0"

MODEL_VERSION = "dlm-ema/1"
