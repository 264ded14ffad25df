#pragma once

#include <string>

#include "toruscohom/fourier.hpp"
#include "toruscohom/lattice_core.hpp"

namespace toruscohom {

/// A batch problem: the affine map (A, b), the right-hand side g, optionally
/// a claimed solution f (for verification), and numeric knobs.
struct ProblemConfig {
    int p = 0;
    IntMatrix A{1};
    RationalVector b;
    FourierSeries g{1};
    FourierSeries f{1};
    bool hasG = false;
    bool hasF = false;
    double tol = 1e-9;
    double band = 1e-8;

    AffineTorusMap map() const { return AffineTorusMap(A, b); }
};

/// Parse the JSON problem description. Series given as file paths are loaded
/// relative to baseDir. Throws ConfigError on any malformation.
ProblemConfig parse_problem_config(const std::string& text, const std::string& baseDir);

/// Exact rational from "num/den", decimal ("-0.25", "1.5e-3"), or integer
/// text. Throws ConfigError on anything else (including zero denominators).
Rational parse_rational(const std::string& text);

}  // namespace toruscohom
