#pragma once

#include "toruscohom/lattice_core.hpp"
#include "toruscohom/spectral.hpp"

namespace toruscohom::fixtures {

/// Arnold cat map matrix [[1,1],[1,2]].
IntMatrix cat();

/// Fibonacci shift matrix [[1,1],[1,0]] (determinant -1).
IntMatrix fibonacci();

/// The 3x3 automorphism [[1,1,1],[1,0,0],[0,1,0]] with characteristic
/// polynomial -X^3 + X^2 + X + 1.
IntMatrix cubic3();

/// X^6 - 2X^5 - X^4 + 3X^2 + 2X + 1 = (-X^3 + X^2 + X + 1)^2: hyperbolic with
/// double roots, so its companion matrix is not diagonalizable.
IntPolynomial sextic();

/// Companion matrix of sextic(): subdiagonal ones, last column (-1,-2,-3,0,1,2).
IntMatrix companion_sextic();

/// Quarter-turn rotation [[0,-1],[1,0]]: unimodular but not hyperbolic.
IntMatrix rotation2();

/// Random hyperbolic element of GL(p,Z) built from elementary shears, with
/// entries kept small enough for downstream enumeration.  Deterministic in the
/// seed.  Throws NoConvergenceError if no hyperbolic sample shows up (seeds in
/// practice succeed within a few attempts).
IntMatrix random_unimodular(int p, unsigned seed);

}  // namespace toruscohom::fixtures
