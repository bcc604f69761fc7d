"""Meeting-time and delay-capacity simulation lab.

Simulates first meeting times and two-hop relay delays of mobile pairs on
a wrapped disc under heavy-tailed flight mobility and i.i.d. per-slot
relocation, with a continuous (mid-slot) contact model, and computes the
matching closed-form bounds, capacity formulas, and scaling checks.
"""

__version__ = "0.1.0"
