#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "toruscohom/errors.hpp"
#include "toruscohom/lattice_core.hpp"

namespace toruscohom {

/// Polynomial with exact integer coefficients, stored lowest degree first.
class IntPolynomial {
  public:
    explicit IntPolynomial(std::vector<Integer> coeffs);
    IntPolynomial(std::initializer_list<long> coeffs);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const Integer& coeff(int k) const { return coeffs_[static_cast<size_t>(k)]; }
    const std::vector<Integer>& coefficients() const { return coeffs_; }

    /// Exact Horner evaluation.
    Rational evaluate(const Rational& x) const;
    std::complex<double> evaluate(std::complex<double> x) const;

    IntPolynomial operator*(const IntPolynomial& other) const;
    IntPolynomial operator-() const;
    bool operator==(const IntPolynomial& other) const = default;

  private:
    std::vector<Integer> coeffs_;
};

/// One root of a polynomial together with its clustered multiplicity.
struct RootCluster {
    std::complex<double> value;
    int multiplicity = 1;
};

/// Complex spectrum of an integer matrix (or root set of an integer polynomial).
struct Spectrum {
    std::vector<RootCluster> roots;  // sorted by (Re, Im); conjugation-symmetric
    int stableCount = 0;             // roots with |value| < 1, counted with multiplicity

    int degree() const;
};

/// Stable/unstable splitting C^p = E_- (+) E_+ realized by real projectors.
struct HyperbolicSplitting {
    Eigen::MatrixXd PiMinus;  // projector onto E_- (|lambda| < 1) along E_+
    Eigen::MatrixXd PiPlus;   // projector onto E_+ (|lambda| > 1) along E_-
    Spectrum spectrum;
    double rhoMinus = 0.0;    // spectral radius of B restricted to E_-
    double rhoPlusInv = 0.0;  // spectral radius of B^{-1} restricted to E_+
};

/// Orthonormal bases of the invariant subspaces and the matrices of B|E_- and
/// B^{-1}|E_+ in those coordinates.  Powers of the restrictions stay bounded in
/// these coordinates, so large-k operator norms can be computed without the
/// unstable-direction roundoff blow-up that plagues powers of B itself.
struct InvariantCoordinates {
    Eigen::MatrixXd Qminus;        // p x q, orthonormal columns spanning range(PiMinus)
    Eigen::MatrixXd Qplus;         // p x (p-q)
    Eigen::MatrixXd Bstable;       // q x q = Qminus^T B Qminus (contraction)
    Eigen::MatrixXd BinvUnstable;  // (p-q) x (p-q) = Qplus^T B^{-1} Qplus (contraction)
};

/// Characteristic polynomial det(M - XI), exact integer coefficients
/// (Faddeev-LeVerrier; the leading coefficient is (-1)^p).
IntPolynomial char_poly(const IntMatrix& M);

/// All complex roots with multiplicities, via Aberth-Ehrlich simultaneous
/// iteration followed by clustering at radius sqrt(tol).  Conjugate pairs are
/// enforced exactly.  Throws NoConvergenceError if residuals stay above
/// tol * (coefficient scale) after the iteration cap.
Spectrum roots(const IntPolynomial& poly, double tol = 1e-12);

/// True iff every root keeps | |lambda| - 1 | > band.
bool is_hyperbolic(const Spectrum& s, double band = 1e-8);

/// Companion matrix of a (sign-normalized) monic integer polynomial:
/// subdiagonal of ones, last column -(c_0, ..., c_{p-1}).
/// Throws NotUnimodularPolynomialError unless leading and constant terms are +-1.
IntMatrix companion_matrix(const IntPolynomial& poly);

/// Stable/unstable splitting via the Bezout identity u p_s + v p_u = 1 applied
/// to the stable/unstable factors of the characteristic polynomial:
/// PiPlus = u(B) p_s(B), PiMinus = v(B) p_u(B).
/// Throws IllConditionedError if any projector invariant residual exceeds 1e-8.
HyperbolicSplitting splitting(const DualMap& B, const Spectrum& s);

/// Orthonormal invariant coordinates for a computed splitting.
InvariantCoordinates invariant_coordinates(const DualMap& B, const HyperbolicSplitting& S);

/// sigma_max(M^k) for k >= 0 (largest singular value; M^0 = I).
double power_operator_norm(const Eigen::MatrixXd& M, long k);

/// Largest singular value of B^k restricted to range(PiMinus), k >= 0.
double restricted_stable_norm(const InvariantCoordinates& C, long k);

/// Largest singular value of B^{-k} restricted to range(PiPlus), k >= 0.
double restricted_unstable_norm(const InvariantCoordinates& C, long k);

/// Entrywise double conversion (entries exceeding double range saturate to +-inf).
Eigen::MatrixXd float_matrix(const IntMatrix& M);

/// Exact integer entries to double, with the same saturation rule.
double to_double(const Integer& x);

}  // namespace toruscohom
