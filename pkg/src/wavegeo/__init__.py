"""wavegeo: Monte-Carlo geometry of random Laplace eigenfunctions on the
2-sphere and the 2-torus, with the closed-form oracles to verify against.
"""

__version__ = "0.1.0"
