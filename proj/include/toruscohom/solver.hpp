#pragma once

#include <complex>
#include <string>
#include <vector>

#include "toruscohom/adapted_norm.hpp"
#include "toruscohom/fourier.hpp"

namespace toruscohom {

/// Which half of the two-sided orbit sum to evaluate.
enum class PhiMode { Plus, Minus, Total };

/// One full-orbit obstruction value at a canonical representative frequency.
struct OrbitCheck {
    LatticeVector representative;
    std::complex<double> value;  // sum over the whole orbit
    double magnitude = 0.0;
    bool pass = false;
};

/// Outcome of testing every obstruction functional against g.
struct ObstructionReport {
    std::complex<double> phiZero;  // mean of g
    std::vector<OrbitCheck> orbitChecks;
    double tol = 0.0;
    bool solvable = false;
};

/// One row of the operator-continuity table: |f|_{1,r} against the two
/// right-hand sides (the literal bound with the truncated inverse-square
/// lattice sum, and the convergent corrected-exponent bound).
struct ContinuityRow {
    int r = 0;
    double lhs = 0.0;
    double rhsPaper = 0.0;
    double rhsCorrected = 0.0;
    bool holdsPaper = false;
    bool holdsCorrected = false;
};

struct SolveResult {
    FourierSeries f;
    double residualNorm = 0.0;  // |delta(f) - g|_{1,0}
    double searchRadius = 0.0;  // adapted-norm ball radius covering supp(g)
    long candidateCount = 0;    // frequencies whose coefficient was evaluated
    std::vector<ContinuityRow> continuity;
};

struct SolveOptions {
    double tol = 1e-9;
    long enumerationCap = 10000000;  // abort if the orbit walks exceed this
    std::vector<int> continuityOrders = {0, 1, 2};
};

/// Raised by solve() when the obstruction check fails; carries the report.
class ObstructionViolatedError : public Error {
  public:
    explicit ObstructionViolatedError(ObstructionReport report);
    const ObstructionReport& report() const { return report_; }

  private:
    ObstructionReport report_;
};

/// Mean of g (the order-zero obstruction).
std::complex<double> phi_zero(const FourierSeries& g);

/// Orbit sums Sigma_k e^{2 pi i <b_k, B^k m>} g_hat(B^k m):
///   Plus  = sum over k >= 0, Minus = -(sum over k < 0), Total = Plus - Minus.
/// Finite-support g makes these finite sums; the walk stops once the orbit
/// provably leaves the adapted-norm ball containing supp(g) for good.
std::complex<double> phi(const FourierSeries& g, const AffineTorusMap& map, const LatticeVector& m,
                         PhiMode mode, const AdaptedNorm& nm);

/// One canonical frequency per dual orbit meeting supp(g) away from zero:
/// the visited orbit point of minimal adapted norm, ties lexicographic.
std::vector<LatticeVector> orbit_representatives(const FourierSeries& g, const DualMap& B,
                                                 const AdaptedNorm& nm);

/// Evaluates the mean and every per-orbit functional against the tolerance.
ObstructionReport check_obstructions(const FourierSeries& g, const AffineTorusMap& map,
                                     const AdaptedNorm& nm, double tol = 1e-9);

/// Exact solution of f - f(gamma(x)) = g with mean-zero normalization.
/// Throws ObstructionViolatedError when the equation has no solution and
/// EnumerationOverflowError when the frequency search exceeds the cap.
SolveResult solve(const FourierSeries& g, const AffineTorusMap& map,
                  const HyperbolicSplitting& splitting, const AdaptedNorm& nm,
                  const SolveOptions& options = {});

/// The continuity table for a solved pair (f, g).
std::vector<ContinuityRow> continuity_report(const FourierSeries& f, const FourierSeries& g,
                                             const AdaptedNorm& nm, const std::vector<int>& rList);

/// Sigma_{m != 0} |m|_1^{-(p+1)} over Z^p, relative error <= 1e-6, cached.
double lattice_zeta(int p);

/// Sigma_{0 < |m|_1 <= M} |m|_1^{-2} over Z^p (the divergent sum, truncated).
double lattice_sum_inverse_square(int p, long M);

std::string emit_obstruction_json(const ObstructionReport& report);
std::string emit_solve_report_json(const SolveResult& result, const ObstructionReport& report);

/// Everything derived from the matrix side of a problem, bundled.
struct Analysis {
    DualMap dual;
    Spectrum spectrum;
    HyperbolicSplitting splitting;
    AdaptedNorm norm;
};

/// Builds the dual map, certifies hyperbolicity (NotHyperbolicError if the
/// spectrum touches the unit-circle band), and assembles the adapted norm.
Analysis analyze(const AffineTorusMap& map, double band = 1e-8, double rootTol = 1e-12);

}  // namespace toruscohom
