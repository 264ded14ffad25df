#include "toruscohom/config.hpp"

#include <json.hpp>

#include <cctype>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>

namespace toruscohom {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw ConfigError("config: " + what); }

Rational fraction_from(const std::string& text) {
    Rational q;
    if (mpq_set_str(q.get_mpq_t(), text.c_str(), 10) != 0)
        fail("cannot parse rational '" + text + "'");
    if (q.get_den() == 0) fail("zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
}

// [sign] digits [. digits] [ (e|E) [sign] digits ]  ->  exact rational
Rational decimal_from(const std::string& text) {
    size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';
    std::string digits;
    long fracDigits = 0;
    bool sawDigit = false;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
        digits += text[i];
        sawDigit = true;
    }
    if (i < text.size() && text[i] == '.') {
        ++i;
        for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
            digits += text[i];
            ++fracDigits;
            sawDigit = true;
        }
    }
    long exponent = 0;
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        bool expNegative = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) expNegative = text[i++] == '-';
        if (i >= text.size()) fail("truncated exponent in '" + text + "'");
        for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i)
            exponent = exponent * 10 + (text[i] - '0');
        if (expNegative) exponent = -exponent;
    }
    if (!sawDigit || i != text.size()) fail("cannot parse number '" + text + "'");

    Rational value(Integer(digits.empty() ? "0" : digits));
    long shift = exponent - fracDigits;
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
    if (shift >= 0)
        value *= scale;
    else
        value /= scale;
    if (negative) value = -value;
    return value;
}

json parse_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) fail("input is not valid JSON");
    return j;
}

int read_dimension(const json& j) {
    if (!j.contains("p") || !j["p"].is_number_integer()) fail("missing integer field 'p'");
    int p = j["p"].get<int>();
    if (p < 1) fail("'p' must be positive");
    return p;
}

IntMatrix read_matrix(const json& j, int p) {
    if (!j.contains("A") || !j["A"].is_array() || j["A"].size() != static_cast<size_t>(p))
        fail("'A' must be an array of " + std::to_string(p) + " rows");
    IntMatrix A(p);
    for (int i = 0; i < p; ++i) {
        const json& row = j["A"][static_cast<size_t>(i)];
        if (!row.is_array() || row.size() != static_cast<size_t>(p))
            fail("row " + std::to_string(i) + " of 'A' must have " + std::to_string(p) +
                 " entries");
        for (int k = 0; k < p; ++k) {
            const json& e = row[static_cast<size_t>(k)];
            if (!e.is_number_integer()) fail("entries of 'A' must be integers");
            A.at(i, k) = Integer(static_cast<long>(e.get<long long>()));
        }
    }
    return A;
}

RationalVector read_translation(const json& j, int p) {
    RationalVector b(static_cast<size_t>(p), Rational(0));
    if (!j.contains("b")) return b;
    const json& arr = j["b"];
    if (!arr.is_array() || arr.size() != static_cast<size_t>(p))
        fail("'b' must be an array of " + std::to_string(p) + " entries");
    for (size_t i = 0; i < arr.size(); ++i) {
        const json& e = arr[i];
        if (e.is_string())
            b[i] = parse_rational(e.get<std::string>());
        else if (e.is_number_integer())
            b[i] = Rational(Integer(static_cast<long>(e.get<long long>())));
        else if (e.is_number())
            b[i] = decimal_from(json_number(e.get<double>()));
        else
            fail("entries of 'b' must be rational strings or numbers");
    }
    return b;
}

FourierSeries read_series(const json& node, int p, const std::string& baseDir,
                          const char* field) {
    if (node.is_string()) {
        std::filesystem::path path(node.get<std::string>());
        if (path.is_relative() && !baseDir.empty()) path = std::filesystem::path(baseDir) / path;
        std::ifstream in(path);
        if (!in) fail(std::string("cannot open series file for '") + field + "': " + path.string());
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return parse_series_json(buffer.str());
    }
    if (node.is_object()) {
        json series = node;
        if (!series.contains("p")) series["p"] = p;
        FourierSeries h = parse_series_json(series.dump());
        if (h.dim() != p) fail(std::string("series '") + field + "' has mismatched dimension");
        return h;
    }
    fail(std::string("'") + field + "' must be a series object or a file path");
}

double read_positive(const json& j, const char* field, double fallback) {
    if (!j.contains(field)) return fallback;
    if (!j[field].is_number()) fail(std::string("'") + field + "' must be a number");
    double v = j[field].get<double>();
    if (!(v > 0)) fail(std::string("'") + field + "' must be positive");
    return v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
    std::string trimmed;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
    if (trimmed.empty()) fail("empty rational literal");
    if (trimmed.find('/') != std::string::npos) return fraction_from(trimmed);
    return decimal_from(trimmed);
}

ProblemConfig parse_problem_config(const std::string& text, const std::string& baseDir) {
    json j = parse_json(text);
    if (!j.is_object()) fail("top level must be an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "p" && key != "A" && key != "b" && key != "g" && key != "f" && key != "tol" &&
            key != "hyperbolicityBand" && key != "band")
            fail("unknown field '" + key + "'");
    }

    ProblemConfig cfg;
    cfg.p = read_dimension(j);
    cfg.A = read_matrix(j, cfg.p);
    cfg.b = read_translation(j, cfg.p);
    if (j.contains("g")) {
        cfg.g = read_series(j["g"], cfg.p, baseDir, "g");
        cfg.hasG = true;
    }
    if (j.contains("f")) {
        cfg.f = read_series(j["f"], cfg.p, baseDir, "f");
        cfg.hasF = true;
    }
    cfg.tol = read_positive(j, "tol", 1e-9);
    cfg.band = read_positive(j, "hyperbolicityBand", read_positive(j, "band", 1e-8));
    return cfg;
}

}  // namespace toruscohom
