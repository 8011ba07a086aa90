"""Gaze-driven assistive bot control stack.

A five-class eye-gaze CNN built on a small numpy tensor engine, a
debouncer that turns noisy per-frame classifications into drive
commands, a networked key-value relay that carries them, and a
deterministic virtual-clock simulation of the drive hardware.
"""

__version__ = "0.1.0"
