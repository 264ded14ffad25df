#include <CLI11.hpp>

#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <toruscohom/config.hpp>
#include <toruscohom/fixtures.hpp>
#include <toruscohom/fourier.hpp>
#include <toruscohom/solver.hpp>

using namespace toruscohom;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitUnsolvable = 2;
constexpr int kExitNotHyperbolic = 3;

std::string read_input(const std::string& path) {
    std::ostringstream buffer;
    if (path == "-") {
        buffer << std::cin.rdbuf();
    } else {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open '" + path + "'");
        buffer << in.rdbuf();
    }
    return buffer.str();
}

std::string base_dir(const std::string& configPath) {
    if (configPath == "-") return ".";
    std::filesystem::path parent = std::filesystem::path(configPath).parent_path();
    return parent.empty() ? std::string(".") : parent.string();
}

ProblemConfig load_config(const std::string& path, double tolOverride, double bandOverride) {
    ProblemConfig cfg = parse_problem_config(read_input(path), base_dir(path));
    if (tolOverride > 0) cfg.tol = tolOverride;
    if (bandOverride > 0) cfg.band = bandOverride;
    return cfg;
}

void write_file(const std::string& outDir, const std::string& name, const std::string& content) {
    std::filesystem::create_directories(outDir);
    std::filesystem::path path = std::filesystem::path(outDir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << content;
}

std::string format_complex(std::complex<double> z) {
    std::string out = json_number(z.real());
    out += z.imag() < 0 ? " - " : " + ";
    out += json_number(std::abs(z.imag())) + "i";
    return out;
}

std::string format_lattice_vector(const LatticeVector& m) {
    std::string out = "(";
    for (size_t i = 0; i < m.size(); ++i) {
        if (i) out += ", ";
        out += m[i].get_str();
    }
    out += ")";
    return out;
}

int run_spectrum(const ProblemConfig& cfg) {
    AffineTorusMap map = cfg.map();
    IntPolynomial charPoly = char_poly(map.A());
    Spectrum spectrum = roots(charPoly);

    std::cout << "p: " << cfg.p << "\n";
    std::cout << "characteristic polynomial (low to high): [";
    for (size_t i = 0; i < charPoly.coefficients().size(); ++i) {
        if (i) std::cout << ", ";
        std::cout << charPoly.coefficients()[i].get_str();
    }
    std::cout << "]\n";
    for (const RootCluster& root : spectrum.roots)
        std::cout << "root: " << format_complex(root.value) << "  modulus "
                  << json_number(std::abs(root.value)) << "  multiplicity " << root.multiplicity
                  << "\n";

    bool hyperbolic = is_hyperbolic(spectrum, cfg.band);
    std::cout << "hyperbolic: " << (hyperbolic ? "yes" : "no") << "\n";
    if (!hyperbolic) return kExitUnsolvable;  // the report's negative verdict

    Analysis analysis = analyze(map, cfg.band);
    std::cout << "stable rank: " << analysis.spectrum.stableCount
              << ", unstable rank: " << cfg.p - analysis.spectrum.stableCount << "\n";
    std::cout << "adapted norm: n = " << analysis.norm.n
              << ", thetaMinus = " << json_number(analysis.norm.thetaMinus)
              << ", thetaPlusInv = " << json_number(analysis.norm.thetaPlusInv)
              << ", eta = " << json_number(analysis.norm.eta)
              << ", mu = " << json_number(analysis.norm.mu) << "\n";
    return kExitOk;
}

int run_check(const ProblemConfig& cfg, const std::string& outDir) {
    if (!cfg.hasG) throw ConfigError("check: the config must provide 'g'");
    AffineTorusMap map = cfg.map();
    Analysis analysis = analyze(map, cfg.band);
    ObstructionReport report = check_obstructions(cfg.g, map, analysis.norm, cfg.tol);
    write_file(outDir, "report.json", emit_obstruction_json(report));

    std::cout << "mean |g_hat(0)| = " << json_number(std::abs(report.phiZero)) << "\n";
    for (const OrbitCheck& check : report.orbitChecks)
        std::cout << "orbit " << format_lattice_vector(check.representative) << ": |Phi| = "
                  << json_number(check.magnitude) << (check.pass ? "  ok" : "  VIOLATED") << "\n";
    std::cout << "solvable: " << (report.solvable ? "yes" : "no") << "\n";
    return report.solvable ? kExitOk : kExitUnsolvable;
}

int run_solve(const ProblemConfig& cfg, const std::string& outDir) {
    if (!cfg.hasG) throw ConfigError("solve: the config must provide 'g'");
    AffineTorusMap map = cfg.map();
    Analysis analysis = analyze(map, cfg.band);
    ObstructionReport report = check_obstructions(cfg.g, map, analysis.norm, cfg.tol);
    if (!report.solvable) {
        write_file(outDir, "report.json", emit_obstruction_json(report));
        std::cout << "solvable: no (report.json written)\n";
        return kExitUnsolvable;
    }
    SolveOptions options;
    options.tol = cfg.tol;
    SolveResult result = solve(cfg.g, map, analysis.splitting, analysis.norm, options);
    write_file(outDir, "f.json", emit_series_json(result.f));
    write_file(outDir, "report.json", emit_solve_report_json(result, report));
    std::cout << "solved: " << result.f.support_size() << " coefficient(s), residual "
              << json_number(result.residualNorm) << ", candidates " << result.candidateCount
              << "\n";
    std::cout << "wrote f.json and report.json\n";
    return kExitOk;
}

int run_verify(const ProblemConfig& cfg) {
    if (!cfg.hasG || !cfg.hasF) throw ConfigError("verify: the config must provide 'g' and 'f'");
    AffineTorusMap map = cfg.map();
    double residual = seminorm_1r(coboundary(cfg.f, map) - cfg.g, 0);
    std::cout << "residual |delta(f) - g|_{1,0} = " << json_number(residual) << "\n";
    std::cout << "verified: " << (residual <= cfg.tol ? "yes" : "no") << "\n";
    return residual <= cfg.tol ? kExitOk : kExitUnsolvable;
}

FourierSeries random_test_series(int p, int boxRadius, std::mt19937& rng) {
    std::uniform_int_distribution<int> freq(-boxRadius, boxRadius);
    std::uniform_int_distribution<int> count(5, 10);
    std::uniform_real_distribution<double> amp(-2.0, 2.0);
    FourierSeries h(p);
    int terms = count(rng);
    for (int t = 0; t < terms; ++t) {
        LatticeVector m(static_cast<size_t>(p));
        for (auto& e : m) e = freq(rng);
        if (is_zero(m)) continue;
        h.add_term(m, std::complex<double>(amp(rng), amp(rng)));
    }
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

int run_oracle(int p, int boxRadius, int seeds, double tol) {
    if (p != 2 && p != 3) throw ConfigError("oracle: p must be 2 or 3");
    IntMatrix A = p == 2 ? fixtures::cat() : fixtures::cubic3();
    int passed = 0;
    for (int seed = 1; seed <= seeds; ++seed) {
        std::mt19937 rng(static_cast<unsigned>(seed));
        FourierSeries h = random_test_series(p, boxRadius, rng);
        RationalVector b = seed % 2 == 0 ? RationalVector(static_cast<size_t>(p), Rational(0))
                                         : random_translation(p, rng);
        AffineTorusMap map(A, b);
        Analysis analysis = analyze(map);
        FourierSeries g = coboundary(h, map);
        SolveOptions options;
        options.tol = tol;
        bool ok = false;
        try {
            SolveResult result = solve(g, map, analysis.splitting, analysis.norm, options);
            double worst = seminorm_1r(result.f - h, 0);
            ok = worst < tol && result.residualNorm < tol;
        } catch (const Error&) {
            ok = false;
        }
        if (ok) ++passed;
    }
    std::cout << passed << "/" << seeds << " pass\n";
    return passed == seeds ? kExitOk : kExitUnsolvable;
}

int run_sample(const std::string& seriesPath, int gridN, const std::string& outDir,
               bool toFile) {
    FourierSeries h = parse_series_json(read_input(seriesPath));
    if (h.dim() != 2) throw ConfigError("sample: only p = 2 series can be gridded");
    if (gridN < 1) throw ConfigError("sample: grid size must be positive");
    std::string csv = "x1,x2,re,im\n";
    for (int i = 0; i < gridN; ++i)
        for (int j = 0; j < gridN; ++j) {
            double x1 = static_cast<double>(i) / gridN;
            double x2 = static_cast<double>(j) / gridN;
            std::complex<double> value = evaluate(h, {x1, x2});
            csv += json_number(x1);
            csv += ',';
            csv += json_number(x2);
            csv += ',';
            csv += json_number(value.real());
            csv += ',';
            csv += json_number(value.imag());
            csv += '\n';
        }
    if (toFile) {
        write_file(outDir, "sample.csv", csv);
        std::cout << "wrote sample.csv (" << gridN * gridN << " rows)\n";
    } else {
        std::cout << csv;
    }
    return kExitOk;
}

std::string config_json_for(const IntMatrix& A) {
    std::string out = "{\n  \"p\": " + std::to_string(A.dim()) + ",\n  \"A\": [";
    for (int i = 0; i < A.dim(); ++i) {
        out += i ? ",\n       [" : "[";
        for (int j = 0; j < A.dim(); ++j) {
            if (j) out += ", ";
            out += A.at(i, j).get_str();
        }
        out += "]";
    }
    out += "],\n  \"b\": [";
    for (int i = 0; i < A.dim(); ++i) {
        if (i) out += ", ";
        out += "\"0\"";
    }
    out += "]\n}\n";
    return out;
}

int run_gen(const std::string& which, const std::string& coeffs, int p, unsigned seed) {
    IntMatrix A(1);
    if (which == "cat") {
        A = fixtures::cat();
    } else if (which == "fib") {
        A = fixtures::fibonacci();
    } else if (which == "cubic3") {
        A = fixtures::cubic3();
    } else if (which == "companionQ") {
        A = fixtures::companion_sextic();
    } else if (which == "rot2") {
        A = fixtures::rotation2();
    } else if (which == "random-unimodular") {
        A = fixtures::random_unimodular(p, seed);
    } else if (which == "companion") {
        if (coeffs.empty()) throw ConfigError("gen companion: --coeffs is required");
        std::vector<Integer> parsed;
        std::string entry;
        std::istringstream stream(coeffs);
        while (std::getline(stream, entry, ','))
            parsed.emplace_back(entry);
        A = companion_matrix(IntPolynomial(parsed));
    } else {
        throw ConfigError("gen: unknown fixture '" + which + "'");
    }
    std::cout << config_json_for(A);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact solver for f - f(Ax + b) = g on the torus"};
    app.require_subcommand(1);

    std::string configPath = "-";
    std::string outDir = ".";
    std::string seriesPath;
    std::string genCoeffs;
    std::string genWhich;
    double tol = -1.0;
    double band = -1.0;
    int oracleP = 2;
    int oracleRadius = 4;
    int oracleSeeds = 50;
    int gridN = 16;
    int genP = 2;
    unsigned seed = 1;

    CLI::App* spectrum = app.add_subcommand("spectrum", "spectral and norm report for A");
    spectrum->add_option("--config", configPath, "problem JSON path, '-' for stdin");
    spectrum->add_option("--band", band, "hyperbolicity band around |z| = 1");

    CLI::App* check = app.add_subcommand("check", "evaluate the obstruction functionals on g");
    check->add_option("--config", configPath, "problem JSON path, '-' for stdin");
    check->add_option("--tol", tol, "obstruction tolerance");
    check->add_option("--band", band, "hyperbolicity band around |z| = 1");
    check->add_option("--out", outDir, "directory for report.json");

    CLI::App* solveCmd = app.add_subcommand("solve", "solve the equation and write f.json");
    solveCmd->add_option("--config", configPath, "problem JSON path, '-' for stdin");
    solveCmd->add_option("--tol", tol, "obstruction and residual tolerance");
    solveCmd->add_option("--band", band, "hyperbolicity band around |z| = 1");
    solveCmd->add_option("--out", outDir, "directory for f.json and report.json");

    CLI::App* verify = app.add_subcommand("verify", "check a claimed solution f against g");
    verify->add_option("--config", configPath, "problem JSON with 'f' and 'g'");
    verify->add_option("--tol", tol, "residual tolerance");

    CLI::App* oracle = app.add_subcommand("oracle", "random coboundary round-trip suite");
    oracle->add_option("--p", oracleP, "torus dimension (2 or 3)");
    oracle->add_option("--radius", oracleRadius, "frequency box radius for the generated h");
    oracle->add_option("--seeds", oracleSeeds, "number of random cases");
    oracle->add_option("--tol", tol, "pass tolerance");

    CLI::App* sample = app.add_subcommand("sample", "evaluate a p = 2 series on a grid as CSV");
    sample->add_option("--series", seriesPath, "series JSON path, '-' for stdin")->required();
    sample->add_option("--grid", gridN, "grid resolution per axis");
    CLI::Option* sampleOut = sample->add_option("--out", outDir, "directory for sample.csv");

    CLI::App* gen = app.add_subcommand("gen", "print a fixture config JSON");
    gen->add_option("fixture", genWhich,
                    "cat | fib | cubic3 | companionQ | rot2 | random-unimodular | companion")
        ->required();
    gen->add_option("--coeffs", genCoeffs, "companion coefficients, low to high, comma-separated");
    gen->add_option("--p", genP, "dimension for random-unimodular");
    gen->add_option("--seed", seed, "seed for random-unimodular");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (spectrum->parsed()) return run_spectrum(load_config(configPath, tol, band));
        if (check->parsed()) return run_check(load_config(configPath, tol, band), outDir);
        if (solveCmd->parsed()) return run_solve(load_config(configPath, tol, band), outDir);
        if (verify->parsed()) return run_verify(load_config(configPath, tol, band));
        if (oracle->parsed()) return run_oracle(oracleP, oracleRadius, oracleSeeds,
                                                tol > 0 ? tol : 1e-9);
        if (sample->parsed()) return run_sample(seriesPath, gridN, outDir, sampleOut->count() > 0);
        if (gen->parsed()) return run_gen(genWhich, genCoeffs, genP, seed);
    } catch (const NotHyperbolicError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNotHyperbolic;
    } catch (const ObstructionViolatedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnsolvable;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
