"""Numerical verification toolkit for cone-edge model operators.

Library layout:

* :mod:`edgespec.bessel` -- modified Bessel functions with error bounds
* :mod:`edgespec.kernels` -- Green kernels on the half-line and Schur integrals
* :mod:`edgespec.grids` -- quadrature grids, Nystrom / finite-difference assembly
* :mod:`edgespec.model` -- model Bessel operators, Witt checker, bound sweeps
* :mod:`edgespec.clifford` -- exact Clifford algebra of the Gauss-Bonnet block
* :mod:`edgespec.parametrix` -- FFT-based right inverses on the model edge
* :mod:`edgespec.scales` -- finite-dimensional interpolation-scale laboratory
* :mod:`edgespec.cli` -- verification harness with JSON/CSV reports
"""

__version__ = "0.1.0"
