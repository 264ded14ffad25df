#include "toruscohom/fourier.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "toruscohom/spectral.hpp"

namespace toruscohom {

namespace {

LatticeVector negated(const LatticeVector& m) {
    LatticeVector r(m.size());
    for (size_t i = 0; i < m.size(); ++i) r[i] = -m[i];
    return r;
}

}  // namespace

FourierSeries::FourierSeries(int p, bool hermitian) : p_(p), hermitian_(hermitian) {
    if (p < 1) throw DimensionMismatchError("FourierSeries: dimension must be >= 1");
}

bool FourierSeries::hermitian_symmetric(double tol) const {
    for (const auto& [m, a] : coeffs_) {
        std::complex<double> mirror = coefficient(negated(m));
        if (std::abs(mirror - std::conj(a)) > tol) return false;
    }
    return true;
}

std::complex<double> FourierSeries::coefficient(const LatticeVector& m) const {
    auto it = coeffs_.find(m);
    return it == coeffs_.end() ? std::complex<double>(0.0) : it->second;
}

void FourierSeries::add_term(const LatticeVector& m, std::complex<double> amplitude) {
    if (static_cast<int>(m.size()) != p_)
        throw DimensionMismatchError("FourierSeries: frequency length mismatch");
    auto it = coeffs_.find(m);
    std::complex<double> total = amplitude + (it == coeffs_.end() ? 0.0 : it->second);
    if (std::abs(total) < kPruneThreshold) {
        if (it != coeffs_.end()) coeffs_.erase(it);
        return;
    }
    if (it == coeffs_.end())
        coeffs_.emplace(m, total);
    else
        it->second = total;
}

FourierSeries FourierSeries::operator+(const FourierSeries& other) const {
    if (p_ != other.p_) throw DimensionMismatchError("FourierSeries add: dimension mismatch");
    FourierSeries r = *this;
    r.hermitian_ = hermitian_ && other.hermitian_;
    for (const auto& [m, a] : other.coeffs_) r.add_term(m, a);
    return r;
}

FourierSeries FourierSeries::operator-(const FourierSeries& other) const {
    if (p_ != other.p_) throw DimensionMismatchError("FourierSeries subtract: dimension mismatch");
    FourierSeries r = *this;
    r.hermitian_ = hermitian_ && other.hermitian_;
    for (const auto& [m, a] : other.coeffs_) r.add_term(m, -a);
    return r;
}

FourierSeries FourierSeries::operator*(const FourierSeries& other) const {
    if (p_ != other.p_) throw DimensionMismatchError("FourierSeries multiply: dimension mismatch");
    FourierSeries r(p_, hermitian_ && other.hermitian_);
    for (const auto& [m1, a1] : coeffs_)
        for (const auto& [m2, a2] : other.coeffs_) {
            LatticeVector sum(m1.size());
            for (size_t i = 0; i < m1.size(); ++i) sum[i] = m1[i] + m2[i];
            r.add_term(sum, a1 * a2);
        }
    return r;
}

FourierSeries FourierSeries::operator*(std::complex<double> scalar) const {
    FourierSeries r(p_, hermitian_ && scalar.imag() == 0.0);
    for (const auto& [m, a] : coeffs_) r.add_term(m, a * scalar);
    return r;
}

FourierSeries basis_mode(int p, const LatticeVector& m, std::complex<double> amplitude) {
    FourierSeries h(p);
    h.add_term(m, amplitude);
    h.set_hermitian(h.hermitian_symmetric());
    return h;
}

std::complex<double> unit_phase(const RationalVector& b, const LatticeVector& a) {
    if (b.size() != a.size()) throw DimensionMismatchError("unit_phase: length mismatch");
    Rational t(0);
    for (size_t i = 0; i < b.size(); ++i) t += b[i] * Rational(a[i]);
    t.canonicalize();
    // Fractional part in [0, 1): num mod den with the sign of den (positive).
    Integer frac_num;
    mpz_fdiv_r(frac_num.get_mpz_t(), t.get_num().get_mpz_t(), t.get_den().get_mpz_t());
    if (frac_num == 0) return {1.0, 0.0};
    Rational frac(frac_num, t.get_den());
    frac.canonicalize();
    // Quarter turns are exact lattice points of the unit circle; returning
    // them directly keeps half-integer translations free of trig roundoff.
    if (frac.get_den() == 2) return {-1.0, 0.0};
    if (frac.get_den() == 4) return frac.get_num() == 1 ? std::complex<double>(0.0, 1.0)
                                                        : std::complex<double>(0.0, -1.0);
    const double angle = 2.0 * M_PI * frac.get_d();
    return {std::cos(angle), std::sin(angle)};
}

FourierSeries pullback(const FourierSeries& h, const AffineTorusMap& map, long k) {
    if (h.dim() != map.dim()) throw DimensionMismatchError("pullback: dimension mismatch");
    const DualMap dual(map);
    const RationalVector bk = translation_term(map, k);
    FourierSeries r(h.dim(), h.hermitian());
    for (const auto& [alpha, amp] : h.terms())
        r.add_term(apply_power(dual, -k, alpha), amp * unit_phase(bk, alpha));
    return r;
}

FourierSeries coboundary(const FourierSeries& h, const AffineTorusMap& map) {
    FourierSeries r = h - pullback(h, map, 1);
    r.set_hermitian(h.hermitian());
    return r;
}

double seminorm_1r(const FourierSeries& h, int r) {
    double total = 0.0;
    for (const auto& [m, a] : h.terms()) {
        Integer l1(0);
        for (const auto& mi : m) l1 += abs(mi);
        if (l1 == 0) {
            total += std::abs(a);
            continue;
        }
        double weight = 1.0;
        const double l1d = to_double(l1);
        for (int t = 0; t < r; ++t) weight *= l1d;
        total += weight * std::abs(a);
    }
    return total;
}

std::complex<double> evaluate(const FourierSeries& h, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != h.dim())
        throw DimensionMismatchError("evaluate: point length mismatch");
    std::complex<double> total(0.0);
    for (const auto& [m, a] : h.terms()) {
        double dot = 0.0;
        for (size_t i = 0; i < x.size(); ++i) dot += x[i] * to_double(m[i]);
        const double angle = 2.0 * M_PI * dot;
        total += a * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    return total;
}

std::string json_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string emit_series_json(const FourierSeries& h) {
    std::string out = "{\n  \"p\": " + std::to_string(h.dim()) + ",\n  \"terms\": [";
    bool first = true;
    for (const auto& [m, a] : h.terms()) {
        out += first ? "\n" : ",\n";
        first = false;
        out += "    {\"m\": [";
        for (size_t i = 0; i < m.size(); ++i) {
            if (i > 0) out += ", ";
            out += m[i].get_str();
        }
        out += "], \"re\": " + json_number(a.real()) + ", \"im\": " + json_number(a.imag()) + "}";
    }
    out += first ? "]\n}\n" : "\n  ]\n}\n";
    return out;
}

FourierSeries parse_series_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw ConfigError("series: not a JSON object");
    if (!j.contains("p") || !j["p"].is_number_integer() || j["p"].get<long>() < 1)
        throw ConfigError("series: field \"p\" must be a positive integer");
    const int p = j["p"].get<int>();
    if (!j.contains("terms") || !j["terms"].is_array())
        throw ConfigError("series: field \"terms\" must be an array");

    FourierSeries h(p);
    for (const auto& term : j["terms"]) {
        if (!term.is_object() || !term.contains("m") || !term["m"].is_array() ||
            !term.contains("re") || !term["re"].is_number() || !term.contains("im") ||
            !term["im"].is_number())
            throw ConfigError("series: each term needs \"m\" (int array), \"re\", \"im\"");
        if (static_cast<int>(term["m"].size()) != p)
            throw ConfigError("series: frequency length does not match p");
        LatticeVector m;
        m.reserve(static_cast<size_t>(p));
        for (const auto& mi : term["m"]) {
            if (!mi.is_number_integer()) throw ConfigError("series: frequencies must be integers");
            m.emplace_back(static_cast<long>(mi.get<long long>()));
        }
        h.add_term(m, {term["re"].get<double>(), term["im"].get<double>()});
    }
    h.set_hermitian(h.hermitian_symmetric());
    return h;
}

GridImport import_grid(const std::vector<std::complex<double>>& samples, int p, int N,
                       long radius) {
    if (p < 1 || N < 1) throw DimensionMismatchError("import_grid: p and N must be positive");
    size_t expected = 1;
    for (int i = 0; i < p; ++i) expected *= static_cast<size_t>(N);
    if (samples.size() != expected)
        throw DimensionMismatchError("import_grid: sample count is not N^p");

    // Separable DFT, one axis at a time (row-major, last coordinate fastest).
    std::vector<std::complex<double>> data = samples;
    std::vector<std::complex<double>> twiddle(static_cast<size_t>(N) * N);
    for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k) {
            const double angle = -2.0 * M_PI * ((j * k) % N) / N;
            twiddle[static_cast<size_t>(j) * N + k] = {std::cos(angle), std::sin(angle)};
        }
    std::vector<std::complex<double>> line(static_cast<size_t>(N));
    for (int axis = p - 1; axis >= 0; --axis) {
        size_t stride = 1;
        for (int a = axis + 1; a < p; ++a) stride *= static_cast<size_t>(N);
        const size_t block = stride * static_cast<size_t>(N);
        for (size_t base = 0; base < data.size(); base += block)
            for (size_t off = 0; off < stride; ++off) {
                for (int k = 0; k < N; ++k) {
                    std::complex<double> acc(0.0);
                    for (int j = 0; j < N; ++j)
                        acc += data[base + off + static_cast<size_t>(j) * stride] *
                               twiddle[static_cast<size_t>(j) * N + k];
                    line[static_cast<size_t>(k)] = acc;
                }
                for (int k = 0; k < N; ++k)
                    data[base + off + static_cast<size_t>(k) * stride] =
                        line[static_cast<size_t>(k)];
            }
    }
    const double scale = 1.0 / static_cast<double>(expected);

    GridImport out{FourierSeries(p), 0.0};
    std::vector<int> idx(static_cast<size_t>(p), 0);
    for (size_t flat = 0; flat < data.size(); ++flat) {
        const std::complex<double> c = data[flat] * scale;
        bool keep = true;
        LatticeVector m(static_cast<size_t>(p));
        for (int i = 0; i < p; ++i) {
            const int f = idx[static_cast<size_t>(i)] > N / 2 ? idx[static_cast<size_t>(i)] - N
                                                              : idx[static_cast<size_t>(i)];
            m[static_cast<size_t>(i)] = f;
            if (std::labs(f) > radius) keep = false;
        }
        if (keep)
            out.series.add_term(m, c);
        else
            out.discardedTail += std::abs(c);
        // Odometer over DFT indices, last coordinate fastest.
        for (int d = p - 1; d >= 0; --d) {
            if (++idx[static_cast<size_t>(d)] < N) break;
            idx[static_cast<size_t>(d)] = 0;
        }
    }
    out.series.set_hermitian(out.series.hermitian_symmetric());
    return out;
}

}  // namespace toruscohom
