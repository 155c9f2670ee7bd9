"""Vector-lattice-valued charges, filter convergence and measure decompositions."""

__version__ = "0.1.0"
