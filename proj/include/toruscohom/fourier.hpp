#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "toruscohom/lattice_core.hpp"

namespace toruscohom {

/// Trigonometric polynomial on the p-torus: a finite map from integer
/// frequencies to complex amplitudes.  Amplitudes below 1e-15 in modulus are
/// pruned on insertion, and iteration order (std::map, lexicographic on the
/// exact frequency vectors) is deterministic.
class FourierSeries {
  public:
    using TermMap = std::map<LatticeVector, std::complex<double>>;

    static constexpr double kPruneThreshold = 1e-15;

    explicit FourierSeries(int p, bool hermitian = false);

    int dim() const { return p_; }

    /// Marker for series known to represent real-valued functions; preserved
    /// by pullback, coboundary, and arithmetic.
    bool hermitian() const { return hermitian_; }
    void set_hermitian(bool value) { hermitian_ = value; }

    /// Verify conjugate symmetry of the stored coefficients directly.
    bool hermitian_symmetric(double tol = 1e-12) const;

    std::complex<double> coefficient(const LatticeVector& m) const;
    void add_term(const LatticeVector& m, std::complex<double> amplitude);
    size_t support_size() const { return coeffs_.size(); }
    const TermMap& terms() const { return coeffs_; }

    FourierSeries operator+(const FourierSeries& other) const;
    FourierSeries operator-(const FourierSeries& other) const;
    FourierSeries operator*(const FourierSeries& other) const;  // convolution
    FourierSeries operator*(std::complex<double> scalar) const;

  private:
    int p_;
    bool hermitian_;
    TermMap coeffs_;
};

/// amplitude * Theta_m where Theta_m(x) = exp(2 pi i <x, m>).
FourierSeries basis_mode(int p, const LatticeVector& m, std::complex<double> amplitude);

/// h o gamma^k.  Coefficient transport: the result's coefficient at B^{-k} a
/// is exp(2 pi i <b_k, a>) h^(a); the phase inner product is computed in exact
/// rationals mod 1 before a single exponentiation.
FourierSeries pullback(const FourierSeries& h, const AffineTorusMap& map, long k);

/// delta(h) = h - h o gamma.  The 0-frequency always cancels exactly.
FourierSeries coboundary(const FourierSeries& h, const AffineTorusMap& map);

/// |h^(0)| + sum_{m != 0} |m|_1^r |h^(m)|.
double seminorm_1r(const FourierSeries& h, int r);

/// sum over stored terms of h^(m) exp(2 pi i <x, m>).
std::complex<double> evaluate(const FourierSeries& h, const std::vector<double>& x);

/// exp(2 pi i <b, a>) with the inner product reduced mod 1 in exact rationals.
std::complex<double> unit_phase(const RationalVector& b, const LatticeVector& a);

/// Shortest-round-trip-safe decimal rendering (printf %.17g).
std::string json_number(double x);

/// Series file format: {"p": int, "terms": [{"m": [int,...], "re": f, "im": f}]}.
/// Output lists terms in lexicographic frequency order and is byte-deterministic.
std::string emit_series_json(const FourierSeries& h);

/// Parse the same format; duplicate frequencies accumulate.
/// Throws ConfigError on malformed input.
FourierSeries parse_series_json(const std::string& text);

/// Truncated Fourier interpolation of uniform grid samples (row-major over
/// [0,1)^p with N points per axis, last coordinate fastest).  Modes with
/// |m|_inf <= radius are kept; discardedTail reports the l1 amplitude mass of
/// the dropped modes, so callers can see how lossy the ingestion was.
struct GridImport {
    FourierSeries series;
    double discardedTail = 0.0;
};
GridImport import_grid(const std::vector<std::complex<double>>& samples, int p, int N,
                       long radius);

}  // namespace toruscohom
