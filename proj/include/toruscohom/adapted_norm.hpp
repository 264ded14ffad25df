#pragma once

#include <utility>

#include "toruscohom/spectral.hpp"

namespace toruscohom {

/// Classification of a nonzero lattice vector by which half of the splitting
/// dominates its adapted norm.
enum class VectorClass { Expanding, Contracting };

/// Norm adapted to a hyperbolic dual map B:
///   |x_-|_* = sum_{k=0}^{n-1} |B^k x_-|_2,   |x_+|_* = sum_{k=0}^{n-1} |B^{-k} x_+|_2,
///   |x|_*   = max(|x_-|_*, |x_+|_*),
/// with n the smallest exponent making both restricted powers contractions.
/// Under this norm B contracts E_- and B^{-1} contracts E_+ with the certified
/// rates thetaMinus and thetaPlusInv.
struct AdaptedNorm {
    HyperbolicSplitting splitting;
    InvariantCoordinates coords;
    Eigen::MatrixXd Bf;     // float copy of B
    Eigen::MatrixXd Binvf;  // float copy of B^{-1}
    int n = 1;
    double thetaMinus = 0.0;   // certified bound on the *-operator norm of B|E_-
    double thetaPlusInv = 0.0; // certified bound on the *-operator norm of B^{-1}|E_+
    double eta = 0.0;          // certified: eta * |x|_* <= |x|_1
    double mu = 0.0;           // certified: |x|_1 <= mu * |x|_*

    int dim() const { return static_cast<int>(Bf.rows()); }
};

/// Throws NotHyperbolicError if no exponent n <= 10000 contracts both halves.
AdaptedNorm build_adapted_norm(const DualMap& B, const HyperbolicSplitting& splitting);

double norm_star_minus(const AdaptedNorm& nm, const Eigen::VectorXd& x);
double norm_star_plus(const AdaptedNorm& nm, const Eigen::VectorXd& x);
double norm_star(const AdaptedNorm& nm, const Eigen::VectorXd& x);
double norm_star(const AdaptedNorm& nm, const LatticeVector& m);

/// Expanding iff |PiPlus m|_* >= |PiMinus m|_* (ties are Expanding).
/// Throws ZeroVectorError on m = 0.
VectorClass classify(const AdaptedNorm& nm, const LatticeVector& m);

/// The certified pair (eta, mu).
std::pair<double, double> equivalence_constants(const AdaptedNorm& nm);

Eigen::VectorXd float_vector(const LatticeVector& m);

}  // namespace toruscohom
