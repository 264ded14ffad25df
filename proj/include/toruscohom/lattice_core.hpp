#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <utility>
#include <vector>

#include "toruscohom/errors.hpp"

namespace toruscohom {

using Integer = mpz_class;
using Rational = mpq_class;
using LatticeVector = std::vector<Integer>;
using RationalVector = std::vector<Rational>;

/// Dense square matrix over Z, row-major, exact entries.
class IntMatrix {
  public:
    explicit IntMatrix(int p) : p_(p), entries_(static_cast<size_t>(p) * p, Integer(0)) {
        if (p < 1) throw DimensionMismatchError("IntMatrix: dimension must be >= 1");
    }
    IntMatrix(int p, std::vector<Integer> entries) : p_(p), entries_(std::move(entries)) {
        if (p < 1) throw DimensionMismatchError("IntMatrix: dimension must be >= 1");
        if (entries_.size() != static_cast<size_t>(p) * p)
            throw DimensionMismatchError("IntMatrix: entry count does not match dimension");
    }
    IntMatrix(int p, std::initializer_list<long> entries);

    static IntMatrix identity(int p);

    int dim() const { return p_; }
    const Integer& at(int i, int j) const { return entries_[static_cast<size_t>(i) * p_ + j]; }
    Integer& at(int i, int j) { return entries_[static_cast<size_t>(i) * p_ + j]; }

    IntMatrix transpose() const;
    IntMatrix operator*(const IntMatrix& other) const;
    LatticeVector operator*(const LatticeVector& v) const;
    RationalVector operator*(const RationalVector& v) const;
    bool operator==(const IntMatrix& other) const = default;

    /// Exact determinant by fraction-free Bareiss elimination.
    Integer determinant() const;

    /// Adjugate matrix: adj(M) * M = det(M) * I, exact cofactor expansion.
    IntMatrix adjugate() const;

    /// Exact inverse; requires |det| = 1 (then inverse = det * adjugate).
    IntMatrix unimodular_inverse() const;

  private:
    int p_;
    std::vector<Integer> entries_;
};

/// The affine map gamma(x) = A x + b acting on the torus R^p / Z^p.
/// A must lie in GL(p, Z); b is stored as exact rationals.
class AffineTorusMap {
  public:
    AffineTorusMap(IntMatrix A, RationalVector b);

    int dim() const { return A_.dim(); }
    const IntMatrix& A() const { return A_; }
    const IntMatrix& A_inverse() const { return Ainv_; }
    const RationalVector& b() const { return b_; }

  private:
    IntMatrix A_;
    IntMatrix Ainv_;
    RationalVector b_;
};

/// B = (A^{-1})^T, the matrix transporting Fourier frequencies.
/// B^{-1} = A^T, so both directions stay exact.
class DualMap {
  public:
    explicit DualMap(const AffineTorusMap& source);

    /// Treat a raw unimodular matrix as a dual map (its source is reconstructed).
    static DualMap from_matrix(const IntMatrix& B);

    int dim() const { return B_.dim(); }
    const IntMatrix& B() const { return B_; }
    const IntMatrix& B_inverse() const { return Binv_; }
    const AffineTorusMap& source() const { return source_; }

  private:
    DualMap(IntMatrix B, IntMatrix Binv, AffineTorusMap source)
        : B_(std::move(B)), Binv_(std::move(Binv)), source_(std::move(source)) {}

    IntMatrix B_;
    IntMatrix Binv_;
    AffineTorusMap source_;
};

/// Exact determinant together with the |det| = 1 verdict.
std::pair<Integer, bool> det_unimodular(const IntMatrix& M);

DualMap dual_matrix(const AffineTorusMap& map);

/// b_k = gamma^k(0), exact rational, any k in Z.
RationalVector translation_term(const AffineTorusMap& map, long k);

/// Exact B^k m for any k in Z; arbitrary precision, entries grow like rho(B)^k.
LatticeVector apply_power(const DualMap& dual, long k, const LatticeVector& m);

// Small helpers shared across modules.
LatticeVector lattice_vector(std::initializer_list<long> entries);
bool is_zero(const LatticeVector& v);
RationalVector rational_vector(std::initializer_list<Rational> entries);

}  // namespace toruscohom
