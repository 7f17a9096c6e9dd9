"""Monte Carlo convex geometry: L^p-moment quermassintegrals, Steiner
symmetrization and shadow systems, and numerical checks of the sharp
isoperimetric inequalities for affine quermassintegrals."""

__version__ = "0.1.0"
