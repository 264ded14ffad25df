#include "toruscohom/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>

namespace toruscohom {

namespace {

constexpr long kWalkCap = 1000000;

// b_{k+1} = A b_k + b
RationalVector step_translation_forward(const AffineTorusMap& map, const RationalVector& bk) {
    RationalVector next = map.A() * bk;
    for (size_t i = 0; i < next.size(); ++i) next[i] += map.b()[i];
    return next;
}

// b_{k-1} = A^{-1}(b_k - b)
RationalVector step_translation_backward(const AffineTorusMap& map, const RationalVector& bk) {
    RationalVector shifted = bk;
    for (size_t i = 0; i < shifted.size(); ++i) shifted[i] -= map.b()[i];
    return map.A_inverse() * shifted;
}

double support_radius(const FourierSeries& g, const AdaptedNorm& nm) {
    double radius = 0.0;
    for (const auto& [m, amp] : g.terms())
        if (!is_zero(m)) radius = std::max(radius, norm_star(nm, m));
    return radius;
}

// Slightly inflated stopping/filter radius: pushing the frontier outward only
// adds provably-zero terms, while guarding boundary points against rounding.
double padded(double radius) { return radius * (1.0 + 1e-9) + 1e-12; }

// An orbit point inside this region stays inside it under B, with strictly
// growing adapted norm, so it can never re-enter the support ball forward.
bool forward_frontier(const AdaptedNorm& nm, const LatticeVector& v, double radius) {
    return classify(nm, v) == VectorClass::Expanding && norm_star(nm, v) > radius;
}

// Mirror image under B^{-1}: strict contracting dominance with norm beyond
// the ball is backward-absorbing.
bool backward_frontier(const AdaptedNorm& nm, const LatticeVector& v, double radius) {
    return classify(nm, v) == VectorClass::Contracting && norm_star(nm, v) > radius;
}

// Sigma_{k>=0} (forward) or Sigma_{k<0} (backward) of
// e^{2 pi i <b_k, B^k m>} g_hat(B^k m); exact phases, finite by the frontier
// rule; `radius` must cover supp(g) \ {0}.
std::complex<double> half_orbit_sum(const FourierSeries& g, const AffineTorusMap& map,
                                    const DualMap& dual, const AdaptedNorm& nm,
                                    const LatticeVector& m, bool forward, double radius) {
    std::complex<double> acc(0.0, 0.0);
    LatticeVector cur = forward ? m : dual.B_inverse() * m;
    RationalVector bk(static_cast<size_t>(map.dim()), Rational(0));
    if (!forward) bk = step_translation_backward(map, bk);
    for (long steps = 0; steps < kWalkCap; ++steps) {
        std::complex<double> c = g.coefficient(cur);
        if (c != std::complex<double>(0.0, 0.0)) acc += c * unit_phase(bk, cur);
        if (forward ? forward_frontier(nm, cur, radius) : backward_frontier(nm, cur, radius))
            return acc;
        if (forward) {
            cur = dual.B() * cur;
            bk = step_translation_forward(map, bk);
        } else {
            cur = dual.B_inverse() * cur;
            bk = step_translation_backward(map, bk);
        }
    }
    throw NoConvergenceError("orbit walk failed to leave the support ball");
}

// All orbit points of s strictly between the two stopping frontiers. Every
// frequency whose coefficient the solution operator can make nonzero lies in
// the union of these windows over supp(g) \ {0}.
std::vector<LatticeVector> orbit_window(const DualMap& dual, const AdaptedNorm& nm,
                                        const LatticeVector& s, double radius, long& budget) {
    std::vector<LatticeVector> window;
    auto collect = [&](const LatticeVector& v) {
        if (--budget < 0)
            throw EnumerationOverflowError("candidate frequency enumeration exceeded the cap");
        window.push_back(v);
    };
    LatticeVector cur = s;
    for (long steps = 0;; ++steps) {
        if (steps >= kWalkCap)
            throw NoConvergenceError("orbit walk failed to leave the support ball");
        if (forward_frontier(nm, cur, radius)) break;
        collect(cur);
        cur = dual.B() * cur;
    }
    cur = dual.B_inverse() * s;
    for (long steps = 0;; ++steps) {
        if (steps >= kWalkCap)
            throw NoConvergenceError("orbit walk failed to leave the support ball");
        if (backward_frontier(nm, cur, radius)) break;
        collect(cur);
        cur = dual.B_inverse() * cur;
    }
    return window;
}

// Exact count C(n, r) in floating point, n arbitrary, r small.
double binomial(double n, int r) {
    double value = 1.0;
    for (int i = 1; i <= r; ++i) value = value * (n - r + i) / i;
    return value;
}

// Number of points of Z^p on the shell |m|_1 = s.
double shell_count(int p, long s) {
    if (s == 0) return 1.0;
    double total = 0.0;
    for (int k = 1; k <= p && k <= s; ++k)
        total += binomial(p, k) * std::ldexp(1.0, k) * binomial(static_cast<double>(s - 1), k - 1);
    return total;
}

void append_complex(std::string& out, const char* name, std::complex<double> z) {
    out += '"';
    out += name;
    out += "\": {\"re\": ";
    out += json_number(z.real());
    out += ", \"im\": ";
    out += json_number(z.imag());
    out += '}';
}

void append_lattice_vector(std::string& out, const LatticeVector& m) {
    out += '[';
    for (size_t i = 0; i < m.size(); ++i) {
        if (i) out += ", ";
        out += m[i].get_str();
    }
    out += ']';
}

void append_obstructions(std::string& out, const ObstructionReport& report,
                         const std::string& indent) {
    out += "{\n";
    out += indent + "  ";
    append_complex(out, "phiZero", report.phiZero);
    out += ",\n";
    out += indent + "  \"tol\": " + json_number(report.tol) + ",\n";
    out += indent + "  \"solvable\": " + (report.solvable ? "true" : "false") + ",\n";
    out += indent + "  \"orbitChecks\": [";
    for (size_t i = 0; i < report.orbitChecks.size(); ++i) {
        const OrbitCheck& c = report.orbitChecks[i];
        out += i ? ",\n" : "\n";
        out += indent + "    {\"m\": ";
        append_lattice_vector(out, c.representative);
        out += ", ";
        append_complex(out, "value", c.value);
        out += ", \"magnitude\": " + json_number(c.magnitude);
        out += ", \"pass\": ";
        out += c.pass ? "true" : "false";
        out += '}';
    }
    if (!report.orbitChecks.empty()) out += "\n" + indent + "  ";
    out += "]\n";
    out += indent + "}";
}

std::string describe_violation(const ObstructionReport& report) {
    std::string msg = "cohomological equation unsolvable:";
    if (std::abs(report.phiZero) > report.tol)
        msg += " the mean of g is " + json_number(std::abs(report.phiZero)) + ";";
    long failing = 0;
    for (const auto& c : report.orbitChecks)
        if (!c.pass) ++failing;
    if (failing > 0) msg += " " + std::to_string(failing) + " orbit functional(s) do not vanish;";
    msg += " see the obstruction report";
    return msg;
}

}  // namespace

ObstructionViolatedError::ObstructionViolatedError(ObstructionReport report)
    : Error(describe_violation(report)), report_(std::move(report)) {}

std::complex<double> phi_zero(const FourierSeries& g) {
    return g.coefficient(LatticeVector(static_cast<size_t>(g.dim()), Integer(0)));
}

std::complex<double> phi(const FourierSeries& g, const AffineTorusMap& map, const LatticeVector& m,
                         PhiMode mode, const AdaptedNorm& nm) {
    if (m.size() != static_cast<size_t>(g.dim()))
        throw DimensionMismatchError("phi: frequency dimension does not match the series");
    if (is_zero(m))
        throw ZeroFrequencyError("phi: the zero frequency is handled by phi_zero");
    const DualMap dual(map);
    const double radius = padded(support_radius(g, nm));
    switch (mode) {
        case PhiMode::Plus:
            return half_orbit_sum(g, map, dual, nm, m, true, radius);
        case PhiMode::Minus:
            return -half_orbit_sum(g, map, dual, nm, m, false, radius);
        case PhiMode::Total:
        default:
            return half_orbit_sum(g, map, dual, nm, m, true, radius) +
                   half_orbit_sum(g, map, dual, nm, m, false, radius);
    }
}

std::vector<LatticeVector> orbit_representatives(const FourierSeries& g, const DualMap& B,
                                                 const AdaptedNorm& nm) {
    const double radius = padded(support_radius(g, nm));
    std::set<LatticeVector> reps;
    for (const auto& [s, amp] : g.terms()) {
        if (is_zero(s)) continue;
        long budget = kWalkCap;
        std::vector<LatticeVector> window = orbit_window(B, nm, s, radius, budget);
        const LatticeVector* best = nullptr;
        double bestNorm = 0.0;
        for (const LatticeVector& w : window) {
            double nw = norm_star(nm, w);
            if (!best || nw < bestNorm || (nw == bestNorm && w < *best)) {
                best = &w;
                bestNorm = nw;
            }
        }
        reps.insert(*best);
    }
    return std::vector<LatticeVector>(reps.begin(), reps.end());
}

ObstructionReport check_obstructions(const FourierSeries& g, const AffineTorusMap& map,
                                     const AdaptedNorm& nm, double tol) {
    ObstructionReport report;
    report.tol = tol;
    report.phiZero = phi_zero(g);
    bool ok = std::abs(report.phiZero) <= tol;
    const DualMap dual(map);
    const double radius = padded(support_radius(g, nm));
    for (const LatticeVector& m : orbit_representatives(g, dual, nm)) {
        OrbitCheck check;
        check.representative = m;
        check.value = half_orbit_sum(g, map, dual, nm, m, true, radius) +
                      half_orbit_sum(g, map, dual, nm, m, false, radius);
        check.magnitude = std::abs(check.value);
        check.pass = check.magnitude <= tol;
        ok = ok && check.pass;
        report.orbitChecks.push_back(std::move(check));
    }
    report.solvable = ok;
    return report;
}

SolveResult solve(const FourierSeries& g, const AffineTorusMap& map,
                  const HyperbolicSplitting& splitting, const AdaptedNorm& nm,
                  const SolveOptions& options) {
    if (splitting.PiMinus.rows() != g.dim() || nm.dim() != g.dim())
        throw DimensionMismatchError("solve: series dimension does not match the map data");
    ObstructionReport report = check_obstructions(g, map, nm, options.tol);
    if (!report.solvable) throw ObstructionViolatedError(std::move(report));

    const DualMap dual(map);
    const double searchRadius = support_radius(g, nm);
    const double radius = padded(searchRadius);

    // Union of orbit windows: outside it both half-orbit sums vanish, because
    // a frequency with a forward (resp. backward) support hit sits inside the
    // window of that support point by the frontier absorption argument.
    std::set<LatticeVector> candidates;
    long budget = options.enumerationCap;
    for (const auto& [s, amp] : g.terms()) {
        if (is_zero(s)) continue;
        for (const LatticeVector& w : orbit_window(dual, nm, s, radius, budget))
            if (!is_zero(w) && norm_star(nm, w) <= radius) candidates.insert(w);
    }

    FourierSeries f(g.dim(), g.hermitian());
    for (const LatticeVector& m : candidates) {
        bool expanding = classify(nm, m) == VectorClass::Expanding;
        std::complex<double> value =
            expanding ? half_orbit_sum(g, map, dual, nm, m, true, radius)
                      : -half_orbit_sum(g, map, dual, nm, m, false, radius);
        f.add_term(m, value);
    }

    FourierSeries difference = coboundary(f, map) - g;
    double residualNorm = seminorm_1r(difference, 0);
    if (residualNorm > options.tol)
        throw NoConvergenceError("solve: residual " + json_number(residualNorm) +
                                 " exceeds the tolerance " + json_number(options.tol));

    SolveResult result{std::move(f), residualNorm, searchRadius,
                       static_cast<long>(candidates.size()), {}};
    result.continuity = continuity_report(result.f, g, nm, options.continuityOrders);
    return result;
}

std::vector<ContinuityRow> continuity_report(const FourierSeries& f, const FourierSeries& g,
                                             const AdaptedNorm& nm, const std::vector<int>& rList) {
    const int p = g.dim();
    const double radius = support_radius(g, nm);
    const long box = static_cast<long>(std::ceil(nm.mu * radius));
    const double truncated = lattice_sum_inverse_square(p, box);
    const double zeta = lattice_zeta(p);
    const double ratio = nm.mu / nm.eta;
    std::vector<ContinuityRow> rows;
    rows.reserve(rList.size());
    for (int r : rList) {
        ContinuityRow row;
        row.r = r;
        row.lhs = seminorm_1r(f, r);
        row.rhsPaper = std::pow(ratio, r + 2) * truncated * seminorm_1r(g, r + 2);
        row.rhsCorrected = std::pow(ratio, r + p + 1) * zeta * seminorm_1r(g, r + p + 1);
        row.holdsPaper = row.lhs <= row.rhsPaper;
        row.holdsCorrected = row.lhs <= row.rhsCorrected;
        rows.push_back(row);
    }
    return rows;
}

double lattice_zeta(int p) {
    if (p < 1) throw DimensionMismatchError("lattice_zeta: dimension must be >= 1");
    static std::map<int, double> cache;
    auto it = cache.find(p);
    if (it != cache.end()) return it->second;

    double factorial = 1.0;
    for (int i = 2; i <= p - 1; ++i) factorial *= i;
    double partial = 0.0;
    long s = 1;
    long shells = 100000;
    double value = 0.0;
    for (;;) {
        for (; s <= shells; ++s)
            partial += shell_count(p, s) / std::pow(static_cast<double>(s), p + 1);
        // Tail bound: shell counts obey N_p(s) <= 2^p (s+p-1)^{p-1}/(p-1)!, and
        // Sigma_{s > S} s^{-2} < 1/S, so the dropped mass is under this value.
        double tail = std::ldexp(1.0, p) / factorial *
                      std::pow(1.0 + static_cast<double>(p - 1) / shells, p - 1) / shells;
        if (tail <= 2e-6 * partial) {
            value = partial + tail / 2.0;
            break;
        }
        shells *= 2;
    }
    cache[p] = value;
    return value;
}

double lattice_sum_inverse_square(int p, long M) {
    if (p < 1) throw DimensionMismatchError("lattice_sum_inverse_square: dimension must be >= 1");
    double total = 0.0;
    for (long s = 1; s <= M; ++s)
        total += shell_count(p, s) / (static_cast<double>(s) * static_cast<double>(s));
    return total;
}

std::string emit_obstruction_json(const ObstructionReport& report) {
    std::string out;
    append_obstructions(out, report, "");
    out += '\n';
    return out;
}

std::string emit_solve_report_json(const SolveResult& result, const ObstructionReport& report) {
    std::string out = "{\n  \"obstructions\": ";
    append_obstructions(out, report, "  ");
    out += ",\n  \"solve\": {\n";
    out += "    \"residualNorm\": " + json_number(result.residualNorm) + ",\n";
    out += "    \"searchRadius\": " + json_number(result.searchRadius) + ",\n";
    out += "    \"candidateCount\": " + std::to_string(result.candidateCount) + ",\n";
    out += "    \"continuity\": [";
    for (size_t i = 0; i < result.continuity.size(); ++i) {
        const ContinuityRow& row = result.continuity[i];
        out += i ? ",\n" : "\n";
        out += "      {\"r\": " + std::to_string(row.r);
        out += ", \"lhs\": " + json_number(row.lhs);
        out += ", \"rhsPaper\": " + json_number(row.rhsPaper);
        out += ", \"rhsCorrected\": " + json_number(row.rhsCorrected);
        out += ", \"holdsPaper\": ";
        out += row.holdsPaper ? "true" : "false";
        out += ", \"holdsCorrected\": ";
        out += row.holdsCorrected ? "true" : "false";
        out += '}';
    }
    if (!result.continuity.empty()) out += "\n    ";
    out += "]\n  }\n}\n";
    return out;
}

Analysis analyze(const AffineTorusMap& map, double band, double rootTol) {
    DualMap dual(map);
    Spectrum spectrum = roots(char_poly(dual.B()), rootTol);
    if (!is_hyperbolic(spectrum, band))
        throw NotHyperbolicError("analyze: the dual spectrum meets the unit-circle band");
    HyperbolicSplitting split = splitting(dual, spectrum);
    AdaptedNorm norm = build_adapted_norm(dual, split);
    return Analysis{std::move(dual), std::move(spectrum), std::move(split), std::move(norm)};
}

}  // namespace toruscohom
