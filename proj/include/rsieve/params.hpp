#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "errors.hpp"
#include "integer.hpp"

namespace rsieve {

/// Knobs of the structure-finding pipeline. kappa and alpha are exact so that
/// residue-count bounds can be compared without rounding.
struct FitParams {
    std::size_t n = 2;
    Rational kappa = 1;
    double tau = 1.0;
    double eta = 1.0;
    double epsilon = 0.1;
    std::optional<long> r_override;
    std::size_t num_candidates = 32;
    double theta = 0.25;
    std::size_t max_iterations = 8;
    std::uint64_t seed = 0;
    Rational alpha = 1;
    /// Multiplier standing in for the implicit constant of the small-solution bound.
    long slack = 4;

    double kappa_double() const { return kappa.get_d(); }

    void validate() const {
        if (n < 1) throw ParameterError("n must be at least 1");
        if (kappa < 0 || kappa >= Rational(static_cast<unsigned long>(n))) throw ParameterError("kappa must satisfy 0 <= kappa < n");
        if (!(tau >= 1.0)) throw ParameterError("tau must be >= 1");
        if (!(eta >= 1.0)) throw ParameterError("eta must be >= 1");
        if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must lie in (0, 1)");
        if (!(theta > 0.0 && theta < 1.0)) throw ParameterError("theta must lie in (0, 1)");
        if (r_override && *r_override < 1) throw ParameterError("r must be positive");
        if (num_candidates < 1) throw ParameterError("at least one candidate tuple is required");
        if (max_iterations < 1) throw ParameterError("max_iterations must be positive");
        if (alpha < 1) throw ParameterError("alpha must be >= 1");
        if (slack < 1) throw ParameterError("slack must be >= 1");
    }
};

/// Parses "3", "-2/7" or a plain decimal such as "1.25" into an exact rational.
inline Rational parse_rational(const std::string& s) {
    if (s.empty()) throw InputError("empty rational");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Integer num = parse_integer(s.substr(0, slash));
        Integer den = parse_integer(s.substr(slash + 1));
        if (den == 0) throw InputError("zero denominator in '" + s + "'");
        Rational r(num, den);
        r.canonicalize();
        return r;
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(parse_integer(s));
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t frac_len = s.size() - dot - 1;
    if (digits == "-" || digits.empty()) throw InputError("not a number: '" + s + "'");
    Rational r(parse_integer(digits), ipow(10ul, frac_len));
    r.canonicalize();
    return r;
}

inline std::string rational_to_string(const Rational& r) { return r.get_str(); }

}  // namespace rsieve
