#pragma once

// File formats: JSON Lines point sets, certificates, linear systems and
// reports. Everything exact travels as a string.

#include <algorithm>
#include <cctype>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "field.hpp"
#include "params.hpp"
#include "points.hpp"
#include "polynomial.hpp"
#include "siegel.hpp"
#include "structure_fit.hpp"

namespace rsieve::io {

using json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

inline json report_header(const std::string& kind) {
    json j;
    j["schema_version"] = schema_version;
    j["kind"] = kind;
    return j;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// scalars

/// "Q", "F7(T)" or "F_7(T)".
inline FieldDescriptor parse_field(const std::string& s) {
    if (s == "Q") return FieldDescriptor::rationals();
    std::string body = s;
    if (body.size() > 4 && body[0] == 'F' && body.ends_with("(T)")) {
        body = body.substr(1, body.size() - 4);
        if (!body.empty() && body[0] == '_') body.erase(0, 1);
        if (!body.empty() && std::all_of(body.begin(), body.end(), [](unsigned char c) { return std::isdigit(c); }) && body.size() < 11)
            return FieldDescriptor::rational_functions(static_cast<std::uint32_t>(std::stoul(body)));
    }
    throw InputError("unknown field '" + s + "', expected \"Q\" or \"F<q>(T)\"");
}

/// Integer literal, optionally "a^b".
inline Integer parse_integer_expr(std::string s) {
    std::erase_if(s, [](unsigned char c) { return std::isspace(c); });
    auto caret = s.find('^');
    if (caret == std::string::npos) return parse_integer(s);
    Integer base = parse_integer(s.substr(0, caret));
    Integer e = parse_integer(s.substr(caret + 1));
    if (e < 0 || !e.fits_ulong_p()) throw InputError("bad exponent in '" + s + "'");
    return ipow(base, e.get_ui());
}

/// The declared height bound; over F_q(T) it must be a power of q.
inline HeightValue parse_bound(const json& v, const FieldDescriptor& fd) {
    Integer N;
    if (v.is_number_integer())
        N = Integer(v.dump());
    else if (v.is_string())
        N = parse_integer_expr(v.get<std::string>());
    else
        throw InputError("N must be an integer or a string");
    if (N < 1) throw InputError("N must be at least 1");
    if (!fd.is_function_field()) return HeightValue::of(N);
    long e = 0;
    Integer x = N;
    while (x % fd.q == 0) {
        x /= fd.q;
        ++e;
    }
    if (x != 1) throw InputError("over " + fd.name() + " the bound N must be a power of q, got " + N.get_str());
    return HeightValue::q_power(fd.q, e);
}

/// Polynomial in T over F_q, e.g. "T^2 + 2*T + 1", "-T + 3", "5".
inline FpPoly parse_fp_poly(const std::string& text, std::uint32_t q) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw InputError("empty polynomial");
    FpPoly out(q);
    std::size_t i = 0;
    while (i < s.size()) {
        bool neg = false;
        if (s[i] == '+' || s[i] == '-') {
            neg = s[i] == '-';
            ++i;
        } else if (i != 0) {
            throw InputError("malformed polynomial '" + text + "'");
        }
        std::size_t j = i;
        while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
        std::string term = s.substr(i, j - i);
        if (term.empty()) throw InputError("malformed polynomial '" + text + "'");
        i = j;

        Integer coef = 1;
        unsigned long deg = 0;
        auto t = term.find_first_of("Tt");
        if (t == std::string::npos) {
            coef = parse_integer(term);
        } else {
            std::string c = term.substr(0, t);
            if (!c.empty()) {
                if (c.back() == '*') c.pop_back();
                coef = parse_integer(c);
            }
            std::string rest = term.substr(t + 1);
            if (rest.empty()) {
                deg = 1;
            } else if (rest[0] == '^') {
                Integer e = parse_integer(rest.substr(1));
                if (e < 0 || e > 1'000'000) throw InputError("bad exponent in '" + text + "'");
                deg = e.get_ui();
            } else {
                throw InputError("malformed term '" + term + "'");
            }
        }
        if (neg) coef = -coef;
        const auto c = static_cast<std::uint64_t>(mpz_fdiv_ui(coef.get_mpz_t(), q));
        out += FpPoly::monomial(q, deg, static_cast<FpPoly::Coeff>(c));
    }
    return out;
}

/// Splits "a/b" or "(a)/(b)" at the top-level slash.
inline std::pair<std::string, std::optional<std::string>> split_fraction(const std::string& s) {
    int depth = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')') --depth;
        if (s[i] == '/' && depth == 0) return {s.substr(0, i), s.substr(i + 1)};
    }
    return {s, std::nullopt};
}

inline std::string strip_parens(std::string s) {
    while (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
    return s;
}

template <class R>
R parse_ring(const json& v, const FieldDescriptor& fd) {
    if constexpr (std::is_same_v<R, Integer>) {
        if (v.is_number_integer()) return Integer(v.dump());
        if (v.is_string()) return parse_integer(v.get<std::string>());
        throw InputError("expected an integer, got " + v.dump());
    } else {
        if (v.is_string()) return parse_fp_poly(strip_parens(v.get<std::string>()), fd.q);
        if (v.is_number_integer()) return parse_fp_poly(v.dump(), fd.q);
        if (v.is_array()) {
            std::vector<FpPoly::Coeff> c;
            for (const auto& x : v) {
                if (!x.is_number_integer()) throw InputError("coefficient arrays hold integers");
                c.push_back(static_cast<FpPoly::Coeff>(mpz_fdiv_ui(Integer(x.dump()).get_mpz_t(), fd.q)));
            }
            return FpPoly(fd.q, std::move(c));
        }
        throw InputError("expected a polynomial, got " + v.dump());
    }
}

template <class R>
FieldElement<R> parse_field_element(const json& v, const FieldDescriptor& fd) {
    if (v.is_object()) {
        for (const auto& [k, x] : v.items())
            if (k != "num" && k != "den") throw InputError("unknown key '" + k + "' in a fraction");
        if (!v.contains("num")) throw InputError("fraction without 'num'");
        R num = parse_ring<R>(v["num"], fd);
        R den = v.contains("den") ? parse_ring<R>(v["den"], fd) : RingOps<R>::one(fd);
        return FieldElement<R>(std::move(num), std::move(den));
    }
    if (v.is_string()) {
        auto [a, b] = split_fraction(v.get<std::string>());
        R num = parse_ring<R>(json(strip_parens(a)), fd);
        if (!b) return FieldElement<R>(std::move(num), fd);
        return FieldElement<R>(std::move(num), parse_ring<R>(json(strip_parens(*b)), fd));
    }
    return FieldElement<R>(parse_ring<R>(v, fd), fd);
}

template <class R>
json ring_to_json(const R& x) {
    return RingOps<R>::to_string(x);
}

// ---------------------------------------------------------------------------
// point sets

using AnyPointSet = std::variant<PointSet<Integer>, PointSet<FpPoly>>;

struct LoadedPointSet {
    AnyPointSet set;
    std::size_t records = 0;
    std::size_t duplicates = 0;
};

struct PointSetHeader {
    FieldDescriptor field;
    std::size_t n = 0;
    HeightValue bound;
    bool affine = false;
};

inline PointSetHeader parse_header(const json& h) {
    if (!h.is_object()) throw InputError("line 1: header must be a JSON object");
    for (const auto& [k, v] : h.items())
        if (k != "field" && k != "n" && k != "N" && k != "affine") throw InputError("line 1: unknown header key '" + k + "'");
    if (!h.contains("field") || !h.contains("n") || !h.contains("N")) throw InputError("line 1: header must declare field, n and N");
    PointSetHeader out;
    if (!h["field"].is_string()) throw InputError("line 1: field must be a string");
    out.field = parse_field(h["field"].get<std::string>());
    if (!h["n"].is_number_unsigned() || h["n"].get<std::uint64_t>() < 1) throw InputError("line 1: n must be a positive integer");
    out.n = h["n"].get<std::size_t>();
    out.bound = parse_bound(h["N"], out.field);
    if (h.contains("affine")) {
        if (!h["affine"].is_boolean()) throw InputError("line 1: affine must be a boolean");
        out.affine = h["affine"].get<bool>();
    }
    return out;
}

inline LoadedPointSet read_pointset(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    std::optional<PointSetHeader> header;
    std::optional<LoadedPointSet> out;
    while (std::getline(in, line)) {
        ++lineno;
        if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::parse_error& e) {
            throw InputError("line " + std::to_string(lineno) + ": malformed JSON");
        }
        if (!header) {
            try {
                header = parse_header(rec);
            } catch (const Error& e) {
                std::string msg = e.what();
                if (!msg.starts_with("line ")) msg = "line " + std::to_string(lineno) + ": " + msg;
                throw InputError(msg);
            }
            out = with_ring(header->field, [&]<class R>(std::type_identity<R>) {
                return LoadedPointSet{AnyPointSet(PointSet<R>(header->field, header->n, header->bound)), 0, 0};
            });
            continue;
        }
        try {
            std::visit(
                [&]<class R>(PointSet<R>& X) {
                    if (!rec.is_array()) throw InputError("expected a coordinate array");
                    const std::size_t want = header->affine ? header->n : header->n + 1;
                    if (rec.size() != want) throw InputError("expected " + std::to_string(want) + " coordinates, got " + std::to_string(rec.size()));
                    std::vector<FieldElement<R>> xs;
                    xs.reserve(rec.size());
                    for (const auto& v : rec) xs.push_back(parse_field_element<R>(v, header->field));
                    ProjPoint<R> p;
                    if (header->affine) {
                        p = ProjPoint<R>::from_affine(xs, header->field);
                    } else {
                        if (std::all_of(xs.begin(), xs.end(), [](const auto& x) { return x.is_zero(); })) throw InputError("the zero vector is not a projective point");
                        p = ProjPoint<R>::from_field(xs);
                    }
                    ++out->records;
                    if (!X.insert(std::move(p))) ++out->duplicates;
                },
                out->set);
        } catch (const DivisionByZero&) {
            throw InputError("line " + std::to_string(lineno) + ": zero denominator");
        } catch (const Error& e) {
            throw InputError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (!header) throw InputError("empty point-set file: missing header");
    return std::move(*out);
}

template <class R>
void write_pointset(std::ostream& os, const PointSet<R>& X) {
    json h;
    h["field"] = X.field().name();
    h["n"] = X.n();
    h["N"] = X.bound().to_string();
    os << h.dump() << "\n";
    for (const auto& p : X.points()) {
        json row = json::array();
        for (const auto& c : p.coords()) row.push_back(ring_to_json(c));
        os << row.dump() << "\n";
    }
}

// ---------------------------------------------------------------------------
// polynomials and certificates

inline std::string exponent_key(const Exponent& e) {
    std::string s;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(e[i]);
    }
    return s;
}

inline Exponent parse_exponent_key(const std::string& s, std::size_t nvars) {
    Exponent e;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        Integer v = parse_integer(part);
        if (v < 0 || v > 100000) throw InputError("bad exponent tuple '" + s + "'");
        e.push_back(static_cast<unsigned>(v.get_ui()));
    }
    if (e.size() != nvars) throw InputError("exponent tuple '" + s + "' has the wrong length");
    return e;
}

template <class R>
json polynomial_to_json(const HomogeneousPolynomial<R>& p, const FieldDescriptor& fd) {
    json j;
    j["degree"] = p.degree;
    j["terms"] = p.terms.size();
    j["coefficient_height"] = p.coefficient_height(fd).to_string();
    json coeffs = json::object();
    for (const auto& [e, c] : p.terms) coeffs[exponent_key(e)] = ring_to_json(c);
    j["coefficients"] = std::move(coeffs);
    return j;
}

template <class R>
HomogeneousPolynomial<R> polynomial_from_json(const json& j, std::size_t nvars, const FieldDescriptor& fd) {
    if (!j.is_object() || !j.contains("degree") || !j.contains("coefficients")) throw InputError("factor needs degree and coefficients");
    HomogeneousPolynomial<R> p{nvars, j["degree"].get<unsigned>(), {}};
    for (const auto& [k, v] : j["coefficients"].items()) {
        Exponent e = parse_exponent_key(k, nvars);
        unsigned deg = 0;
        for (auto x : e) deg += x;
        if (deg != p.degree) throw IntegrityError("factor term " + k + " is not of degree " + std::to_string(p.degree));
        p.add_term(e, parse_ring<R>(v, fd));
    }
    return p;
}

inline json params_to_json(const FitParams& p) {
    json j;
    j["n"] = p.n;
    j["kappa"] = rational_to_string(p.kappa);
    j["alpha"] = rational_to_string(p.alpha);
    j["tau"] = p.tau;
    j["eta"] = p.eta;
    j["epsilon"] = p.epsilon;
    j["r"] = p.r_override ? json(*p.r_override) : json(nullptr);
    j["candidates"] = p.num_candidates;
    j["theta"] = p.theta;
    j["max_iterations"] = p.max_iterations;
    j["seed"] = p.seed;
    j["slack"] = p.slack;
    return j;
}

inline FitParams params_from_json(const json& j) {
    FitParams p;
    p.n = j.at("n").get<std::size_t>();
    p.kappa = parse_rational(j.at("kappa").get<std::string>());
    p.alpha = parse_rational(j.at("alpha").get<std::string>());
    p.tau = j.at("tau").get<double>();
    p.eta = j.at("eta").get<double>();
    p.epsilon = j.at("epsilon").get<double>();
    if (!j.at("r").is_null()) p.r_override = j.at("r").get<long>();
    p.num_candidates = j.at("candidates").get<std::size_t>();
    p.theta = j.at("theta").get<double>();
    p.max_iterations = j.at("max_iterations").get<std::size_t>();
    p.seed = j.at("seed").get<std::uint64_t>();
    p.slack = j.at("slack").get<long>();
    return p;
}

inline json window_to_json(const PrimeWindow& w) {
    json j;
    j["mode"] = w.mode == WindowMode::NormInInterval ? "norm_in_interval" : "norm_equals_target";
    j["lower"] = static_cast<double>(w.lower);
    j["upper"] = static_cast<double>(w.upper);
    if (w.field.is_function_field()) {
        j["degree_lo"] = w.degree_lo;
        j["degree_hi"] = w.degree_hi;
    }
    return j;
}

inline json iteration_to_json(const IterationRecord& r) {
    json j;
    j["iteration"] = r.iteration;
    j["remainder"] = r.remainder;
    j["dense_size"] = r.dense_size;
    j["x_prime_size"] = r.x_prime_size;
    j["x_prime_covered"] = r.x_prime_covered;
    j["degree"] = r.degree;
    j["monomials"] = r.monomials.get_str();
    j["rank"] = r.rank;
    j["coefficient_height"] = r.coefficient_height.to_string();
    j["strategy"] = r.strategy;
    j["siegel_bound_ok"] = r.siegel_bound_ok;
    j["coefficient_bound_ok"] = r.coefficient_bound_ok;
    j["newly_covered"] = r.newly_covered;
    j["covered"] = r.covered;
    return j;
}

template <class R>
json certificate_to_json(const VanishingCertificate<R>& c) {
    json j = report_header("vanishing_certificate");
    j["field"] = c.field.name();
    j["n"] = c.n;
    j["N"] = c.bound.to_string();
    j["params"] = params_to_json(c.params);
    j["r"] = c.r;
    j["window"] = window_to_json(c.window);
    j["prime_count"] = c.prime_count;
    j["status"] = to_string(c.status);
    j["covered"] = c.covered;
    j["total"] = c.total;
    j["coverage"] = c.coverage();
    j["iterations"] = c.iterations;
    j["total_degree"] = c.total_degree;
    j["max_coefficient_height"] = c.max_coeff_height.to_string();
    j["siegel_bounds_ok"] = c.siegel_bounds_ok;
    j["coefficient_bounds_ok"] = c.coefficient_bounds_ok;
    json fs = json::array();
    for (const auto& f : c.factors) fs.push_back(polynomial_to_json(f, c.field));
    j["factors"] = std::move(fs);
    json log = json::array();
    for (const auto& r : c.log) log.push_back(iteration_to_json(r));
    j["log"] = std::move(log);
    return j;
}

/// Reads back what verify needs: field, factors, counts and params. The
/// iteration log is informational and is not parsed.
template <class R>
VanishingCertificate<R> certificate_from_json(const json& j) {
    try {
        if (j.value("kind", "") != "vanishing_certificate") throw InputError("not a vanishing certificate");
        if (j.at("schema_version").get<int>() != schema_version) throw InputError("unsupported schema_version");
        VanishingCertificate<R> c;
        c.field = parse_field(j.at("field").get<std::string>());
        if (c.field.is_function_field() != std::is_same_v<R, FpPoly>) throw InputError("certificate field does not match");
        c.n = j.at("n").get<std::size_t>();
        c.bound = parse_bound(j.at("N"), c.field);
        c.params = params_from_json(j.at("params"));
        c.r = j.at("r").get<long>();
        c.prime_count = j.at("prime_count").get<std::size_t>();
        c.status = j.at("status").get<std::string>() == "success" ? FitStatus::Success : FitStatus::MaxIterations;
        c.covered = j.at("covered").get<std::size_t>();
        c.total = j.at("total").get<std::size_t>();
        c.iterations = j.at("iterations").get<std::size_t>();
        c.siegel_bounds_ok = j.at("siegel_bounds_ok").get<bool>();
        c.coefficient_bounds_ok = j.at("coefficient_bounds_ok").get<bool>();
        c.max_coeff_height = RingOps<R>::height(RingOps<R>::zero(c.field));
        for (const auto& f : j.at("factors")) {
            c.factors.push_back(polynomial_from_json<R>(f, c.n + 1, c.field));
            c.total_degree += c.factors.back().degree;
            c.max_coeff_height = std::max(c.max_coeff_height, c.factors.back().coefficient_height(c.field));
        }
        if (c.total_degree != j.at("total_degree").get<unsigned>()) throw IntegrityError("total_degree does not match the factors");
        return c;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed certificate: ") + e.what());
    }
}

inline FieldDescriptor certificate_field(const json& j) {
    if (!j.is_object() || !j.contains("field") || !j["field"].is_string()) throw InputError("certificate without a field");
    return parse_field(j["field"].get<std::string>());
}

// ---------------------------------------------------------------------------
// linear systems

/// {"field": "Q", "rows": [["1","2","3"], ...]}; "columns" is needed only
/// when there are no rows.
template <class R>
LinearSystem<R> system_from_json(const json& j, const FieldDescriptor& fd) {
    for (const auto& [k, v] : j.items())
        if (k != "field" && k != "rows" && k != "columns") throw InputError("unknown key '" + k + "' in a linear system");
    if (!j.contains("rows") || !j["rows"].is_array()) throw InputError("linear system needs a rows array");
    Matrix<R> rows;
    for (const auto& r : j["rows"]) {
        if (!r.is_array()) throw InputError("each row must be an array");
        std::vector<R> row;
        for (const auto& v : r) row.push_back(parse_ring<R>(v, fd));
        rows.push_back(std::move(row));
    }
    std::size_t t = rows.empty() ? 0 : rows[0].size();
    if (j.contains("columns")) {
        t = j["columns"].get<std::size_t>();
    } else if (rows.empty()) {
        throw InputError("a system without rows must declare columns");
    }
    return LinearSystem<R>(fd, std::move(rows), t);
}

template <class R>
json solution_to_json(const SmallSolution<R>& s, const LinearSystem<R>& A) {
    json j = report_header("small_solution");
    j["field"] = A.field.name();
    j["rows"] = A.s;
    j["columns"] = A.t;
    j["entry_height"] = A.C.to_string();
    json c = json::array();
    for (const auto& x : s.c) c.push_back(ring_to_json(x));
    j["solution"] = std::move(c);
    j["height"] = s.height.to_string();
    j["strategy"] = to_string(s.strategy_used);
    j["rank"] = s.rank;
    j["moduli_used"] = s.moduli_used;
    j["log_bound"] = s.log_bound;
    j["within_bound"] = s.within_bound;
    return j;
}

}  // namespace rsieve::io
