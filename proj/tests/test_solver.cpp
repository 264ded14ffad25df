#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <set>
#include <vector>

#include <toruscohom/config.hpp>
#include <toruscohom/fixtures.hpp>
#include <toruscohom/solver.hpp>

using namespace toruscohom;
using Complex = std::complex<double>;

namespace {

// Trig-based phase, written independently of the library's exact-lattice
// special cases: e^{2 pi i <b, a>} with the inner product reduced mod 1.
Complex oracle_phase(const RationalVector& b, const LatticeVector& a) {
    Rational t(0);
    for (size_t i = 0; i < b.size(); ++i) t += b[i] * Rational(a[i]);
    Integer num;
    mpz_fdiv_r(num.get_mpz_t(), t.get_num().get_mpz_t(), t.get_den().get_mpz_t());
    Rational frac(num, t.get_den());
    frac.canonicalize();
    double angle = 2.0 * M_PI * frac.get_d();
    return {std::cos(angle), std::sin(angle)};
}

// Direct truncated orbit sum with no stopping rule: the oracle for phi.
Complex brute_phi(const FourierSeries& g, const AffineTorusMap& map, const LatticeVector& m,
                  PhiMode mode, long K = 60) {
    const DualMap dual(map);
    long lo = mode == PhiMode::Plus ? 0 : -K;
    long hi = mode == PhiMode::Minus ? -1 : K;
    Complex acc(0.0, 0.0);
    for (long k = lo; k <= hi; ++k) {
        LatticeVector mk = apply_power(dual, k, m);
        Complex c = g.coefficient(mk);
        if (c != Complex(0.0, 0.0)) acc += c * oracle_phase(translation_term(map, k), mk);
    }
    return mode == PhiMode::Minus ? -acc : acc;
}

// Whether s and t lie on one dual orbit, by scanning |k| <= 30 directly.
bool same_orbit(const DualMap& dual, const LatticeVector& s, const LatticeVector& t) {
    for (long k = -30; k <= 30; ++k)
        if (apply_power(dual, k, s) == t) return true;
    return false;
}

long count_orbits(const DualMap& dual, const std::vector<LatticeVector>& points) {
    long orbits = 0;
    for (size_t i = 0; i < points.size(); ++i) {
        bool seen = false;
        for (size_t j = 0; j < i && !seen; ++j) seen = same_orbit(dual, points[i], points[j]);
        if (!seen) ++orbits;
    }
    return orbits;
}

FourierSeries random_series(int p, int boxRadius, std::mt19937& rng, bool real_valued = false) {
    std::uniform_int_distribution<int> freq(-boxRadius, boxRadius);
    std::uniform_int_distribution<int> count(5, 10);
    std::uniform_real_distribution<double> amp(-2.0, 2.0);
    FourierSeries h(p);
    int terms = count(rng);
    for (int t = 0; t < terms; ++t) {
        LatticeVector m(static_cast<size_t>(p));
        for (auto& e : m) e = freq(rng);
        if (is_zero(m)) continue;
        Complex a(amp(rng), amp(rng));
        h.add_term(m, a);
        if (real_valued) {
            LatticeVector neg(m.size());
            for (size_t i = 0; i < m.size(); ++i) neg[i] = -m[i];
            h.add_term(neg, std::conj(a));
        }
    }
    h.set_hermitian(h.hermitian_symmetric());
    return h;
}

RationalVector random_translation(int p, std::mt19937& rng) {
    std::uniform_int_distribution<int> num(-3, 3);
    std::uniform_int_distribution<int> den(1, 8);
    RationalVector b(static_cast<size_t>(p), Rational(0));
    for (auto& e : b) {
        e = Rational(num(rng), den(rng));
        e.canonicalize();
    }
    return b;
}

double max_coeff_diff(const FourierSeries& a, const FourierSeries& b) {
    double worst = 0.0;
    for (const auto& [m, amp] : a.terms()) worst = std::max(worst, std::abs(amp - b.coefficient(m)));
    for (const auto& [m, amp] : b.terms()) worst = std::max(worst, std::abs(amp - a.coefficient(m)));
    return worst;
}

AffineTorusMap cat_half() {
    return AffineTorusMap(fixtures::cat(), rational_vector({Rational(1, 2), Rational(0)}));
}

FourierSeries theta(int p, const LatticeVector& m) { return basis_mode(p, m, 1.0); }

}  // namespace

TEST_CASE("phi: pinned examples on the half-shift cat map") {
    AffineTorusMap gamma = cat_half();
    Analysis an = analyze(gamma);
    FourierSeries g = coboundary(theta(2, lattice_vector({1, 1})), gamma);

    CHECK(std::abs(phi(g, gamma, lattice_vector({1, 1}), PhiMode::Plus, an.norm) - Complex(1.0)) <
          1e-12);

    FourierSeries single = theta(2, lattice_vector({1, 0}));
    CHECK(std::abs(phi(single, gamma, lattice_vector({1, 0}), PhiMode::Total, an.norm) -
                   Complex(1.0)) < 1e-12);

    LatticeVector zero = lattice_vector({0, 0});
    CHECK_THROWS_AS(phi(g, gamma, zero, PhiMode::Plus, an.norm), ZeroFrequencyError);
    CHECK_THROWS_AS(phi(g, gamma, zero, PhiMode::Minus, an.norm), ZeroFrequencyError);
    CHECK_THROWS_AS(phi(g, gamma, zero, PhiMode::Total, an.norm), ZeroFrequencyError);
}

TEST_CASE("phi: agrees with the direct truncated orbit sum") {
    std::mt19937 rng(314);
    std::uniform_int_distribution<int> freq(-3, 3);
    struct Case {
        IntMatrix A;
        int p;
    };
    std::vector<Case> cases{{fixtures::cat(), 2}, {fixtures::cubic3(), 3}};
    for (const Case& c : cases) {
        AffineTorusMap gamma(c.A, random_translation(c.p, rng));
        Analysis an = analyze(gamma);
        FourierSeries g = random_series(c.p, 3, rng);  // no solvability assumed
        for (int trial = 0; trial < 20; ++trial) {
            LatticeVector m(static_cast<size_t>(c.p));
            for (auto& e : m) e = freq(rng);
            if (is_zero(m)) m[0] = 1;
            Complex plus = phi(g, gamma, m, PhiMode::Plus, an.norm);
            Complex minus = phi(g, gamma, m, PhiMode::Minus, an.norm);
            Complex total = phi(g, gamma, m, PhiMode::Total, an.norm);
            CHECK(std::abs(plus - brute_phi(g, gamma, m, PhiMode::Plus)) < 1e-10);
            CHECK(std::abs(minus - brute_phi(g, gamma, m, PhiMode::Minus)) < 1e-10);
            CHECK(std::abs(total - brute_phi(g, gamma, m, PhiMode::Total)) < 1e-10);
            CHECK(std::abs(total - (plus - minus)) < 1e-12);
        }
    }
}

TEST_CASE("phi_zero: mean extraction") {
    CHECK(phi_zero(FourierSeries(2)) == Complex(0.0));
    CHECK(phi_zero(basis_mode(2, lattice_vector({0, 0}), 3.0)) == Complex(3.0));

    std::mt19937 rng(99);
    AffineTorusMap gamma = cat_half();
    for (int trial = 0; trial < 20; ++trial) {
        FourierSeries h = random_series(2, 4, rng);
        CHECK(std::abs(phi_zero(coboundary(h, gamma))) < 1e-15);
    }
}

TEST_CASE("orbit_representatives: counting and orbit invariance") {
    AffineTorusMap gamma = cat_half();
    Analysis an = analyze(gamma);

    FourierSeries pair(2);
    pair.add_term(lattice_vector({1, 1}), 1.0);
    pair.add_term(lattice_vector({2, 3}), 1.0);
    CHECK(orbit_representatives(pair, an.dual, an.norm).size() == 1);

    CHECK(orbit_representatives(theta(2, lattice_vector({3, -2})), an.dual, an.norm).size() == 1);

    FourierSeries split(2);
    split.add_term(lattice_vector({1, 0}), 1.0);
    split.add_term(lattice_vector({0, 1}), 1.0);
    std::vector<LatticeVector> reps = orbit_representatives(split, an.dual, an.norm);
    CHECK(static_cast<long>(reps.size()) ==
          count_orbits(an.dual, {lattice_vector({1, 0}), lattice_vector({0, 1})}));

    std::mt19937 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        FourierSeries g = random_series(2, 3, rng);
        std::vector<LatticeVector> support;
        for (const auto& [m, amp] : g.terms())
            if (!is_zero(m)) support.push_back(m);
        std::vector<LatticeVector> got = orbit_representatives(g, an.dual, an.norm);
        CHECK(static_cast<long>(got.size()) == count_orbits(an.dual, support));
        // Distinct representatives sit on distinct orbits, and each support
        // point shares an orbit with exactly one representative.
        for (size_t i = 0; i < got.size(); ++i)
            for (size_t j = i + 1; j < got.size(); ++j)
                CHECK_FALSE(same_orbit(an.dual, got[i], got[j]));
        for (const LatticeVector& s : support) {
            int matches = 0;
            for (const LatticeVector& r : got)
                if (same_orbit(an.dual, s, r)) ++matches;
            CHECK(matches == 1);
        }
    }

    // |Phi| is an orbit invariant: evaluating at any orbit point of the
    // representative gives the same magnitude.
    FourierSeries g = random_series(2, 3, rng);
    for (const LatticeVector& r : orbit_representatives(g, an.dual, an.norm)) {
        double base = std::abs(phi(g, gamma, r, PhiMode::Total, an.norm));
        for (long k : {-2L, 1L, 3L}) {
            LatticeVector shifted = apply_power(an.dual, k, r);
            CHECK(std::abs(std::abs(phi(g, gamma, shifted, PhiMode::Total, an.norm)) - base) <
                  1e-12);
        }
    }
}

TEST_CASE("check_obstructions: coboundaries pass, single modes fail") {
    AffineTorusMap gamma = cat_half();
    Analysis an = analyze(gamma);

    std::mt19937 rng(2024);
    for (int seed = 0; seed < 50; ++seed) {
        FourierSeries g = coboundary(random_series(2, 4, rng), gamma);
        ObstructionReport report = check_obstructions(g, gamma, an.norm);
        CHECK(report.solvable);
        CHECK(std::abs(report.phiZero) <= 1e-10);
        for (const OrbitCheck& c : report.orbitChecks) CHECK(c.magnitude <= 1e-10);
    }

    ObstructionReport bad = check_obstructions(theta(2, lattice_vector({1, 0})), gamma, an.norm);
    CHECK_FALSE(bad.solvable);
    REQUIRE(bad.orbitChecks.size() == 1);
    CHECK_FALSE(bad.orbitChecks[0].pass);
    CHECK(bad.orbitChecks[0].magnitude == doctest::Approx(1.0).epsilon(1e-12));

    ObstructionReport mean =
        check_obstructions(basis_mode(2, lattice_vector({0, 0}), Complex(2.5, 0.0)), gamma,
                           an.norm);
    CHECK_FALSE(mean.solvable);
    CHECK(mean.orbitChecks.empty());
    CHECK(std::abs(mean.phiZero - Complex(2.5, 0.0)) < 1e-15);

    // The tolerance separates a planted violation from a genuine coboundary.
    FourierSeries nearly = coboundary(random_series(2, 3, rng), gamma);
    nearly.add_term(lattice_vector({1, 0}), Complex(1e-6, 0.0));
    CHECK_FALSE(check_obstructions(nearly, gamma, an.norm, 1e-9).solvable);
    CHECK(check_obstructions(nearly, gamma, an.norm, 1e-3).solvable);
}

TEST_CASE("check_obstructions: solvability is a pullback invariant") {
    AffineTorusMap gamma = cat_half();
    Analysis an = analyze(gamma);
    std::mt19937 rng(55);

    FourierSeries good = coboundary(random_series(2, 3, rng), gamma);
    CHECK(check_obstructions(good, gamma, an.norm).solvable ==
          check_obstructions(pullback(good, gamma, 1), gamma, an.norm).solvable);

    FourierSeries bad = theta(2, lattice_vector({1, 0}));
    CHECK(check_obstructions(bad, gamma, an.norm).solvable ==
          check_obstructions(pullback(bad, gamma, 1), gamma, an.norm).solvable);
}

TEST_CASE("solve: pinned fixture, zero input, violation and overflow errors") {
    AffineTorusMap gamma = cat_half();
    Analysis an = analyze(gamma);

    FourierSeries g = coboundary(theta(2, lattice_vector({1, 1})), gamma);
    SolveResult result = solve(g, gamma, an.splitting, an.norm);
    CHECK(result.f.support_size() == 1);
    CHECK(std::abs(result.f.coefficient(lattice_vector({1, 1})) - Complex(1.0)) < 1e-12);
    CHECK(result.residualNorm < 1e-12);
    CHECK(result.searchRadius > 0.0);
    CHECK(result.candidateCount >= 1);

    SolveResult empty = solve(FourierSeries(2), gamma, an.splitting, an.norm);
    CHECK(empty.f.support_size() == 0);
    CHECK(empty.residualNorm == 0.0);
    CHECK(empty.candidateCount == 0);
    CHECK(empty.searchRadius == 0.0);

    try {
        solve(theta(2, lattice_vector({1, 0})), gamma, an.splitting, an.norm);
        FAIL("expected ObstructionViolatedError");
    } catch (const ObstructionViolatedError& e) {
        CHECK_FALSE(e.report().solvable);
        REQUIRE(e.report().orbitChecks.size() == 1);
        CHECK_FALSE(e.report().orbitChecks[0].pass);
    }

    SolveOptions tiny;
    tiny.enumerationCap = 2;
    CHECK_THROWS_AS(solve(g, gamma, an.splitting, an.norm, tiny), EnumerationOverflowError);
}

TEST_CASE("solve: coboundary round trip recovers the generator exactly") {
    struct Case {
        IntMatrix A;
        int p;
    };
    std::vector<Case> cases{{fixtures::cat(), 2}, {fixtures::cubic3(), 3}};
    for (const Case& c : cases) {
        for (int seed = 1; seed <= 12; ++seed) {
            CAPTURE(c.p);
            CAPTURE(seed);
            std::mt19937 rng(static_cast<unsigned>(seed));
            FourierSeries h = random_series(c.p, 4, rng, seed % 3 == 0);
            RationalVector b = seed % 2 == 0
                                   ? RationalVector(static_cast<size_t>(c.p), Rational(0))
                                   : random_translation(c.p, rng);
            AffineTorusMap gamma(c.A, b);
            Analysis an = analyze(gamma);
            FourierSeries g = coboundary(h, gamma);
            SolveResult result = solve(g, gamma, an.splitting, an.norm);
            CHECK(max_coeff_diff(result.f, h) < 1e-9);
            CHECK(result.residualNorm < 1e-9);
            CHECK(phi_zero(result.f) == Complex(0.0));
            CHECK(result.f.hermitian() == h.hermitian());
            if (h.hermitian()) CHECK(result.f.hermitian_symmetric());
        }
    }
}

TEST_CASE("solve: matches brute-force box enumeration of the candidate ball") {
    AffineTorusMap gamma(fixtures::cat(), rational_vector({Rational(1, 3), Rational(2, 5)}));
    Analysis an = analyze(gamma);
    std::mt19937 rng(71);
    FourierSeries h = random_series(2, 2, rng);
    FourierSeries g = coboundary(h, gamma);

    SolveResult result = solve(g, gamma, an.splitting, an.norm);

    double radius = 0.0;
    for (const auto& [m, amp] : g.terms())
        if (!is_zero(m)) radius = std::max(radius, norm_star(an.norm, m));
    long M = static_cast<long>(std::ceil(an.norm.mu * radius));
    FourierSeries brute(2);
    for (long i = -M; i <= M; ++i)
        for (long j = -(M - std::labs(i)); j <= M - std::labs(i); ++j) {
            if (i == 0 && j == 0) continue;
            LatticeVector m = lattice_vector({i, j});
            if (norm_star(an.norm, m) > radius * (1 + 1e-9) + 1e-12) continue;
            bool expanding = classify(an.norm, m) == VectorClass::Expanding;
            brute.add_term(m, phi(g, gamma, m, expanding ? PhiMode::Plus : PhiMode::Minus,
                                  an.norm));
        }
    CHECK(max_coeff_diff(result.f, brute) < 1e-12);
}

TEST_CASE("solve: linearity of the solution operator") {
    AffineTorusMap gamma = cat_half();
    Analysis an = analyze(gamma);
    std::mt19937 rng(808);
    FourierSeries g1 = coboundary(random_series(2, 3, rng), gamma);
    FourierSeries g2 = coboundary(random_series(2, 3, rng), gamma);
    Complex a(0.5, -1.25);

    FourierSeries combined = g1 * a + g2;
    SolveResult sum = solve(combined, gamma, an.splitting, an.norm);
    SolveResult f1 = solve(g1, gamma, an.splitting, an.norm);
    SolveResult f2 = solve(g2, gamma, an.splitting, an.norm);
    CHECK(max_coeff_diff(sum.f, f1.f * a + f2.f) < 1e-9);
}

TEST_CASE("solve: consistency of the two half-orbit series on candidates") {
    AffineTorusMap gamma = cat_half();
    Analysis an = analyze(gamma);
    std::mt19937 rng(606);
    FourierSeries g = coboundary(random_series(2, 3, rng), gamma);
    SolveResult result = solve(g, gamma, an.splitting, an.norm);
    for (const auto& [m, amp] : result.f.terms()) {
        Complex plus = phi(g, gamma, m, PhiMode::Plus, an.norm);
        Complex minus = phi(g, gamma, m, PhiMode::Minus, an.norm);
        CHECK(std::abs(plus - minus) < 1e-10);
    }
}

TEST_CASE("continuity_report: certified bound holds, trivial and pinned rows") {
    AffineTorusMap gamma = cat_half();
    Analysis an = analyze(gamma);

    std::vector<ContinuityRow> trivial =
        continuity_report(FourierSeries(2), FourierSeries(2), an.norm, {0, 1, 2});
    for (const ContinuityRow& row : trivial) {
        CHECK(row.lhs == 0.0);
        CHECK(row.rhsCorrected == 0.0);
        CHECK(row.holdsPaper);
        CHECK(row.holdsCorrected);
    }

    std::mt19937 rng(11);
    FourierSeries h = random_series(2, 4, rng);
    FourierSeries g = coboundary(h, gamma);
    SolveResult result = solve(g, gamma, an.splitting, an.norm);
    REQUIRE(result.continuity.size() == 3);
    for (const ContinuityRow& row : result.continuity) {
        CHECK(row.holdsCorrected);  // the convergent bound is asserted
        CHECK(row.lhs == seminorm_1r(result.f, row.r));
        double expected = std::pow(an.norm.mu / an.norm.eta, row.r + 2 + 1) * lattice_zeta(2) *
                          seminorm_1r(g, row.r + 2 + 1);
        CHECK(row.rhsCorrected == doctest::Approx(expected).epsilon(1e-12));
    }
    // f equals the mean-zero generator, so the r = 0 row matches its mass.
    CHECK(result.continuity[0].lhs == doctest::Approx(seminorm_1r(h, 0)).epsilon(1e-12));
}

TEST_CASE("lattice_zeta: closed forms in low dimension") {
    const double zeta2 = 1.6449340668482264;
    const double zeta4 = 1.0823232337111382;
    CHECK(lattice_zeta(1) == doctest::Approx(2 * zeta2).epsilon(2e-6));
    CHECK(lattice_zeta(2) == doctest::Approx(4 * zeta2).epsilon(2e-6));
    CHECK(lattice_zeta(3) == doctest::Approx(4 * zeta2 + 2 * zeta4).epsilon(2e-6));
    CHECK(lattice_zeta(3) == lattice_zeta(3));  // cached value is stable
    CHECK(lattice_zeta(6) > 0.0);
    CHECK(lattice_zeta(6) < 1000.0);

    CHECK(lattice_sum_inverse_square(1, 3) == doctest::Approx(2.0 * (1 + 0.25 + 1.0 / 9)));
    CHECK(lattice_sum_inverse_square(2, 2) == doctest::Approx(6.0));
    CHECK(lattice_sum_inverse_square(2, 0) == 0.0);
}

TEST_CASE("report JSON: deterministic and structurally sound") {
    AffineTorusMap gamma = cat_half();
    Analysis an = analyze(gamma);
    FourierSeries g = coboundary(theta(2, lattice_vector({1, 1})), gamma);
    ObstructionReport report = check_obstructions(g, gamma, an.norm);
    SolveResult result = solve(g, gamma, an.splitting, an.norm);

    std::string obs = emit_obstruction_json(report);
    CHECK(obs == emit_obstruction_json(report));
    CHECK(obs.find("\"phiZero\"") != std::string::npos);
    CHECK(obs.find("\"solvable\": true") != std::string::npos);

    std::string rep = emit_solve_report_json(result, report);
    CHECK(rep == emit_solve_report_json(result, report));
    for (const char* key : {"\"obstructions\"", "\"residualNorm\"", "\"searchRadius\"",
                            "\"candidateCount\"", "\"continuity\"", "\"rhsPaper\"",
                            "\"rhsCorrected\"", "\"magnitude\""})
        CHECK(rep.find(key) != std::string::npos);

    ObstructionReport bad = check_obstructions(theta(2, lattice_vector({1, 0})), gamma, an.norm);
    CHECK(emit_obstruction_json(bad).find("\"pass\": false") != std::string::npos);
}

TEST_CASE("analyze: bundles the dual-side data and rejects non-hyperbolic maps") {
    Analysis an = analyze(cat_half());
    CHECK(an.spectrum.stableCount == 1);
    CHECK(an.norm.n == 1);
    CHECK(an.dual.B() == fixtures::cat().unimodular_inverse().transpose());

    AffineTorusMap rot(fixtures::rotation2(), rational_vector({Rational(0), Rational(0)}));
    CHECK_THROWS_AS(analyze(rot), NotHyperbolicError);
}
