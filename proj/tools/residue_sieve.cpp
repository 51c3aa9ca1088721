// residue-sieve: command-line front end to the rsieve library.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <rsieve/io.hpp>
#include <rsieve/parallel.hpp>
#include <rsieve/probe.hpp>
#include <rsieve/random.hpp>
#include <rsieve/residue.hpp>
#include <rsieve/siegel.hpp>
#include <rsieve/structure_fit.hpp>

namespace {

using namespace rsieve;
using io::json;

enum ExitCode { kOk = 0, kInvalid = 1, kBelowCoverage = 2, kViolation = 3 };

std::size_t resolve_threads(const CLI::Option* opt, std::size_t value) {
    if (opt->count()) {
        if (value < 1) throw ParameterError("--threads must be positive");
        return value;
    }
    return default_threads();
}

std::string read_file(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write '" + path + "'");
    f << text;
}

io::LoadedPointSet load_points(const std::string& path) {
    std::istringstream in(read_file(path));
    try {
        auto loaded = io::read_pointset(in);
        if (loaded.duplicates) std::cerr << "warning: " << loaded.duplicates << " duplicate point(s) in '" << path << "' ignored\n";
        return loaded;
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error&) {
        throw InputError(what + " is not valid JSON");
    }
}

WindowMode parse_mode(const std::string& s) { return s == "interval" ? WindowMode::NormInInterval : WindowMode::NormEqualsTarget; }

SiegelOptions::Choice parse_strategy(const std::string& s) {
    if (s == "kernel") return SiegelOptions::Choice::KernelReduce;
    if (s == "enumeration") return SiegelOptions::Choice::BoundedEnumeration;
    return SiegelOptions::Choice::Auto;
}

template <class R>
std::vector<Prime<R>> parse_primes(const std::vector<std::string>& items, const FieldDescriptor& fd) {
    std::vector<Prime<R>> out;
    for (const auto& s : items) {
        if constexpr (std::is_same_v<R, Integer>) {
            Integer p = parse_integer(s);
            if (p < 2 || !is_probable_prime(p)) throw ParameterError(s + " is not prime");
            out.push_back({p, p});
        } else {
            FpPoly f = io::parse_fp_poly(s, fd.q);
            if (f.degree() < 1 || !f.is_monic() || !f.is_irreducible()) throw ParameterError("'" + s + "' is not a monic irreducible polynomial");
            out.push_back({f, ipow(static_cast<unsigned long>(fd.q), static_cast<unsigned long>(f.degree()))});
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

template <class R>
json prime_to_json(const Prime<R>& p) {
    json j;
    j["prime"] = RingOps<R>::to_string(p.generator);
    j["norm"] = p.norm.get_str();
    return j;
}

std::string fixed6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

// ---------------------------------------------------------------------------

struct ProfileArgs {
    std::string input, output, kappa = "1", mode = "target";
    double tau = 1.0;
    std::vector<std::string> primes;
    std::size_t threads = 1;
    CLI::Option* threads_opt = nullptr;
};

int run_profile(const ProfileArgs& a) {
    auto loaded = load_points(a.input);
    const std::size_t threads = resolve_threads(a.threads_opt, a.threads);
    return std::visit(
        [&]<class R>(const PointSet<R>& X) {
            FitParams p;
            p.n = X.n();
            p.kappa = parse_rational(a.kappa);
            p.tau = a.tau;
            json rep = io::report_header("residue_profile");
            rep["field"] = X.field().name();
            rep["n"] = X.n();
            rep["N"] = X.bound().to_string();
            rep["points"] = X.size();
            std::vector<Prime<R>> primes;
            if (a.primes.empty()) {
                PrimeWindow w = window_from_params(p, X.field(), X.bound(), parse_mode(a.mode));
                rep["window"] = io::window_to_json(w);
                primes = enumerate_primes<R>(w);
            } else {
                rep["window"] = nullptr;
                primes = parse_primes<R>(a.primes, X.field());
            }
            if (primes.empty()) throw ParameterError("no primes to profile");
            auto prof = profile(X, primes, threads);
            rep["prime_count"] = primes.size();
            rep["kappa_max"] = fixed6(prof.kappa_max);
            json list = json::array();
            for (const auto& e : prof.per_prime) {
                json j = prime_to_json(e.prime);
                j["class_count"] = e.class_count;
                j["kappa"] = fixed6(e.kappa);
                list.push_back(std::move(j));
            }
            rep["primes"] = std::move(list);
            emit(a.output, io::dump(rep));
            return static_cast<int>(kOk);
        },
        loaded.set);
}

// ---------------------------------------------------------------------------

struct FitArgs {
    std::string input, output, kappa = "1", alpha = "1", strategy = "auto", mode = "target";
    double tau = 1.0, eta = 1.0, epsilon = 0.1, theta = 0.25;
    long r = 0, slack = 4;
    std::uint64_t seed = 0;
    std::size_t candidates = 32, max_iter = 8, threads = 1;
    CLI::Option* r_opt = nullptr;
    CLI::Option* threads_opt = nullptr;
};

int run_fit(const FitArgs& a) {
    auto loaded = load_points(a.input);
    FitOptions opt;
    opt.threads = resolve_threads(a.threads_opt, a.threads);
    opt.siegel.strategy = parse_strategy(a.strategy);
    opt.siegel.slack = a.slack;
    opt.mode = parse_mode(a.mode);
    return std::visit(
        [&]<class R>(const PointSet<R>& X) {
            FitParams p;
            p.n = X.n();
            p.kappa = parse_rational(a.kappa);
            p.alpha = parse_rational(a.alpha);
            p.tau = a.tau;
            p.eta = a.eta;
            p.epsilon = a.epsilon;
            if (a.r_opt->count()) p.r_override = a.r;
            p.num_candidates = a.candidates;
            p.theta = a.theta;
            p.max_iterations = a.max_iter;
            p.seed = a.seed;
            p.slack = a.slack;
            auto cert = fit_polynomial(X, p, opt);
            emit(a.output, io::dump(io::certificate_to_json(cert)));
            std::cerr << "status " << to_string(cert.status) << ", covered " << cert.covered << "/" << cert.total << ", " << cert.factors.size() << " factor(s), total degree " << cert.total_degree << "\n";
            if (cert.status != FitStatus::Success) return static_cast<int>(kBelowCoverage);
            if (!cert.siegel_bounds_ok || !cert.coefficient_bounds_ok) {
                std::cerr << "bound violation recorded in the certificate\n";
                return static_cast<int>(kViolation);
            }
            return static_cast<int>(kOk);
        },
        loaded.set);
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
    std::string certificate, input, output;
    std::size_t threads = 1;
    CLI::Option* threads_opt = nullptr;
};

int run_verify(const VerifyArgs& a) {
    json cj = parse_json(read_file(a.certificate), "certificate '" + a.certificate + "'");
    auto loaded = load_points(a.input);
    const std::size_t threads = resolve_threads(a.threads_opt, a.threads);
    const FieldDescriptor cfd = io::certificate_field(cj);
    return std::visit(
        [&]<class R>(const PointSet<R>& X) {
            if (!(cfd == X.field())) throw InputError("certificate is over " + cfd.name() + ", points over " + X.field().name());
            auto cert = io::certificate_from_json<R>(cj);
            if (cert.n != X.n()) throw InputError("certificate dimension does not match the points");
            json rep = io::report_header("verification");
            rep["total"] = X.size();
            rep["claimed"] = cert.covered;
            auto res = verify_certificate(X, cert, threads);
            rep["covered"] = res.covered;
            rep["per_factor"] = res.per_factor;
            rep["matches"] = true;
            emit(a.output, io::dump(rep));
            return static_cast<int>(kOk);
        },
        loaded.set);
}

// ---------------------------------------------------------------------------

struct OracleArgs {
    std::string input, output;
    unsigned dmax = 4;
    std::size_t sample = 0;
    std::uint64_t seed = 0;
};

int run_oracle(const OracleArgs& a) {
    auto loaded = load_points(a.input);
    return std::visit(
        [&]<class R>(const PointSet<R>& X) {
            PointSet<R> Y = X;
            if (a.sample && a.sample < X.size()) {
                Rng rng(a.seed);
                Y = X.subset(sample_indices(rng, X.size(), a.sample));
            }
            auto res = oracle_min_degree(Y, a.dmax);
            json rep = io::report_header("oracle");
            rep["field"] = X.field().name();
            rep["points"] = Y.size();
            rep["dmax"] = a.dmax;
            rep["D_min"] = res.D_min ? json(*res.D_min) : json(nullptr);
            rep["polynomial"] = res.polynomial ? io::polynomial_to_json(*res.polynomial, X.field()) : json(nullptr);
            emit(a.output, io::dump(rep));
            return static_cast<int>(kOk);
        },
        loaded.set);
}

// ---------------------------------------------------------------------------

struct SiegelArgs {
    std::string input, output, strategy = "auto";
    long slack = 4;
    std::size_t threads = 1;
    CLI::Option* threads_opt = nullptr;
};

int run_siegel(const SiegelArgs& a) {
    json j = parse_json(read_file(a.input), "system '" + a.input + "'");
    if (!j.is_object() || !j.contains("field") || !j["field"].is_string()) throw InputError("linear system needs a field");
    const FieldDescriptor fd = io::parse_field(j["field"].get<std::string>());
    SiegelOptions opt;
    opt.strategy = parse_strategy(a.strategy);
    opt.slack = a.slack;
    opt.threads = resolve_threads(a.threads_opt, a.threads);
    return with_ring(fd, [&]<class R>(std::type_identity<R>) {
        auto A = io::system_from_json<R>(j, fd);
        auto sol = small_kernel(A, opt);
        emit(a.output, io::dump(io::solution_to_json(sol, A)));
        if (!sol.within_bound) {
            std::cerr << "solution height exceeds the small-solution bound\n";
            return static_cast<int>(kViolation);
        }
        return static_cast<int>(kOk);
    });
}

// ---------------------------------------------------------------------------

struct PrimesArgs {
    std::string field = "Q", N, kappa = "1", mode = "target", output;
    std::size_t n = 2;
    double tau = 1.0;
    bool quiet = false;
};

int run_primes(const PrimesArgs& a) {
    const FieldDescriptor fd = io::parse_field(a.field);
    const HeightValue bound = io::parse_bound(json(a.N), fd);
    FitParams p;
    p.n = a.n;
    p.kappa = parse_rational(a.kappa);
    p.tau = a.tau;
    const PrimeWindow w = window_from_params(p, fd, bound, parse_mode(a.mode));
    return with_ring(fd, [&]<class R>(std::type_identity<R>) {
        auto primes = enumerate_primes<R>(w);
        json rep = io::report_header("prime_window");
        rep["field"] = fd.name();
        rep["n"] = a.n;
        rep["N"] = bound.to_string();
        rep["kappa"] = rational_to_string(p.kappa);
        rep["tau"] = p.tau;
        rep["window"] = io::window_to_json(w);
        rep["count"] = primes.size();
        if (!a.quiet) {
            json list = json::array();
            for (const auto& q : primes) list.push_back(prime_to_json(q));
            rep["primes"] = std::move(list);
        }
        emit(a.output, io::dump(rep));
        return static_cast<int>(kOk);
    });
}

// ---------------------------------------------------------------------------

struct ProbeArgs {
    std::string input, output, alpha = "1", kappa = "1", exp_graph;
    double tau = 1.0, prime_cap = 0;
    unsigned long base = 2;
    std::vector<std::string> primes;
    std::size_t threads = 1;
    CLI::Option* threads_opt = nullptr;
    CLI::Option* cap_opt = nullptr;
    CLI::Option* base_opt = nullptr;
};

int run_probe(const ProbeArgs& a) {
    if (a.input.empty() == a.exp_graph.empty()) throw ParameterError("probe needs exactly one of --input and --exp-graph");
    ProbeOptions opt;
    opt.alpha = parse_rational(a.alpha);
    opt.kappa = parse_rational(a.kappa);
    opt.tau = a.tau;
    opt.threads = resolve_threads(a.threads_opt, a.threads);
    if (a.cap_opt->count()) opt.prime_cap = a.prime_cap;

    io::AnyPointSet set = a.exp_graph.empty() ? load_points(a.input).set : io::AnyPointSet(exp_graph_sample(io::parse_integer_expr(a.exp_graph), a.base));
    const bool orders = !a.exp_graph.empty() || a.base_opt->count();
    return std::visit(
        [&]<class R>(const PointSet<R>& X) {
            std::optional<std::vector<Prime<R>>> explicit_primes;
            if (!a.primes.empty()) explicit_primes = parse_primes<R>(a.primes, X.field());
            auto rep = conjecture_probe(X, opt, explicit_primes);
            json j = io::report_header("probe");
            j["field"] = X.field().name();
            j["n"] = X.n();
            j["N"] = X.bound().to_string();
            j["points"] = X.size();
            j["alpha"] = rational_to_string(rep.alpha);
            j["kappa"] = rational_to_string(rep.kappa);
            j["tau"] = rep.tau;
            json w;
            w["explicit_primes"] = rep.explicit_primes;
            w["lower"] = static_cast<double>(rep.lower);
            w["prime_cap"] = static_cast<double>(rep.prime_cap);
            j["window"] = std::move(w);
            j["primes_checked"] = rep.entries.size();
            auto entry_json = [](const ProbeEntry<R>& e) {
                json x = prime_to_json(e.prime);
                x["class_count"] = e.class_count;
                x["bound"] = e.bound;
                x["violation"] = e.violation;
                return x;
            };
            json ents = json::array(), viol = json::array();
            for (const auto& e : rep.entries) ents.push_back(entry_json(e));
            for (const auto& e : rep.violations) viol.push_back(entry_json(e));
            j["pass"] = rep.pass;
            j["violations"] = std::move(viol);
            j["entries"] = std::move(ents);
            if constexpr (std::is_same_v<R, Integer>) {
                if (orders) {
                    std::vector<std::uint64_t> ps;
                    for (const auto& e : rep.entries) ps.push_back(e.prime.generator.get_ui());
                    json op = json::array();
                    for (const auto& e : multiplicative_order_profile(X, ps, a.base, opt.threads)) {
                        json x;
                        x["prime"] = e.prime;
                        if (e.skipped) {
                            x["skipped"] = true;
                            x["note"] = e.note;
                        } else {
                            x["order"] = e.order;
                            x["class_count"] = e.class_count;
                            x["predicted"] = e.predicted;
                            x["predicted_truncated"] = e.predicted_truncated;
                        }
                        op.push_back(std::move(x));
                    }
                    j["base"] = a.base;
                    j["order_profile"] = std::move(op);
                }
            }
            emit(a.output, io::dump(j));
            return static_cast<int>(kOk);
        },
        set);
}

void add_threads(CLI::App* cmd, std::size_t& value, CLI::Option*& opt) {
    opt = cmd->add_option("--threads", value, "worker threads (default: RSIEVE_THREADS or 1)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Residue-class sieving, small solutions and vanishing certificates"};
    app.set_config("--config", "", "TOML file with option values; unknown keys are rejected");
    app.allow_config_extras(false);
    app.require_subcommand(1, 1);

    ProfileArgs pa;
    auto* profile_cmd = app.add_subcommand("profile", "residue-class counts of a point set over a prime window");
    profile_cmd->add_option("input,--input", pa.input, "point-set file (JSON Lines)")->required();
    profile_cmd->add_option("--kappa", pa.kappa, "exponent kappa, rational");
    profile_cmd->add_option("--tau", pa.tau, "window scale tau >= 1");
    profile_cmd->add_option("--primes", pa.primes, "explicit primes instead of the window");
    profile_cmd->add_option("--window-mode", pa.mode, "function fields: target or interval")->check(CLI::IsMember({"target", "interval"}));
    profile_cmd->add_option("-o,--output", pa.output, "report path (default stdout)");
    add_threads(profile_cmd, pa.threads, pa.threads_opt);

    FitArgs fa;
    auto* fit_cmd = app.add_subcommand("fit", "find a low-complexity polynomial vanishing on most of a point set");
    fit_cmd->add_option("input,--input", fa.input, "point-set file (JSON Lines)")->required();
    fit_cmd->add_option("--kappa", fa.kappa, "ill-distribution exponent kappa");
    fit_cmd->add_option("--alpha", fa.alpha, "ill-distribution constant alpha >= 1");
    fit_cmd->add_option("--tau", fa.tau, "window scale tau >= 1");
    fit_cmd->add_option("--eta", fa.eta, "scale of r, eta >= 1");
    fit_cmd->add_option("--epsilon", fa.epsilon, "allowed uncovered fraction");
    fa.r_opt = fit_cmd->add_option("--r", fa.r, "override the dense-set size r");
    fit_cmd->add_option("--seed", fa.seed, "random seed");
    fit_cmd->add_option("--candidates", fa.candidates, "candidate tuples per dense set");
    fit_cmd->add_option("--theta", fa.theta, "threshold fraction for X'");
    fit_cmd->add_option("--max-iter", fa.max_iter, "maximum iterations");
    fit_cmd->add_option("--slack", fa.slack, "constant of the small-solution bound");
    fit_cmd->add_option("--strategy", fa.strategy, "small-solution strategy")->check(CLI::IsMember({"auto", "kernel", "enumeration"}));
    fit_cmd->add_option("--window-mode", fa.mode, "function fields: target or interval")->check(CLI::IsMember({"target", "interval"}));
    fit_cmd->add_option("-o,--output", fa.output, "certificate path (default stdout)");
    add_threads(fit_cmd, fa.threads, fa.threads_opt);

    VerifyArgs va;
    auto* verify_cmd = app.add_subcommand("verify", "recount the points covered by a certificate");
    verify_cmd->add_option("certificate,--certificate", va.certificate, "certificate JSON")->required();
    verify_cmd->add_option("input,--input", va.input, "point-set file (JSON Lines)")->required();
    verify_cmd->add_option("-o,--output", va.output, "report path (default stdout)");
    add_threads(verify_cmd, va.threads, va.threads_opt);

    OracleArgs oa;
    auto* oracle_cmd = app.add_subcommand("oracle", "least degree of a form vanishing on all points, by exact elimination");
    oracle_cmd->add_option("input,--input", oa.input, "point-set file (JSON Lines)")->required();
    oracle_cmd->add_option("--dmax", oa.dmax, "largest degree to try")->check(CLI::Range(1u, 12u));
    oracle_cmd->add_option("--sample", oa.sample, "use a seeded subsample of this size (0 = all)");
    oracle_cmd->add_option("--seed", oa.seed, "seed for --sample");
    oracle_cmd->add_option("-o,--output", oa.output, "report path (default stdout)");

    SiegelArgs sa;
    auto* siegel_cmd = app.add_subcommand("siegel", "small nonzero solution of a homogeneous linear system");
    siegel_cmd->add_option("input,--input", sa.input, "system JSON: {\"field\", \"rows\"}")->required();
    siegel_cmd->add_option("--strategy", sa.strategy, "auto, kernel or enumeration")->check(CLI::IsMember({"auto", "kernel", "enumeration"}));
    siegel_cmd->add_option("--slack", sa.slack, "constant of the small-solution bound");
    siegel_cmd->add_option("-o,--output", sa.output, "report path (default stdout)");
    add_threads(siegel_cmd, sa.threads, sa.threads_opt);

    PrimesArgs ra;
    auto* primes_cmd = app.add_subcommand("primes", "list the primes of a window");
    primes_cmd->add_option("--field", ra.field, "Q or F<q>(T)");
    primes_cmd->add_option("--n", ra.n, "projective dimension");
    primes_cmd->add_option("--N", ra.N, "height bound, e.g. 1000000 or 2^20")->required();
    primes_cmd->add_option("--kappa", ra.kappa, "exponent kappa");
    primes_cmd->add_option("--tau", ra.tau, "window scale tau >= 1");
    primes_cmd->add_option("--window-mode", ra.mode, "function fields: target or interval")->check(CLI::IsMember({"target", "interval"}));
    primes_cmd->add_flag("-q,--quiet", ra.quiet, "print only the window and the count");
    primes_cmd->add_option("-o,--output", ra.output, "report path (default stdout)");

    ProbeArgs ba;
    auto* probe_cmd = app.add_subcommand("probe", "check |X_P| <= alpha N(P)^kappa over a range of primes");
    probe_cmd->add_option("input,--input", ba.input, "point-set file (JSON Lines)");
    probe_cmd->add_option("--exp-graph", ba.exp_graph, "use {(1 : x : base^x)} with base^x <= this bound");
    ba.base_opt = probe_cmd->add_option("--base", ba.base, "base of the exponential graph");
    probe_cmd->add_option("--alpha", ba.alpha, "constant alpha > 0");
    probe_cmd->add_option("--kappa", ba.kappa, "exponent kappa < n");
    probe_cmd->add_option("--tau", ba.tau, "window scale tau >= 1");
    ba.cap_opt = probe_cmd->add_option("--prime-cap", ba.prime_cap, "largest norm examined (default 10x the lower edge)");
    probe_cmd->add_option("--primes", ba.primes, "explicit primes instead of the range");
    probe_cmd->add_option("-o,--output", ba.output, "report path (default stdout)");
    add_threads(probe_cmd, ba.threads, ba.threads_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kInvalid;
    }

    try {
        if (*profile_cmd) return run_profile(pa);
        if (*fit_cmd) return run_fit(fa);
        if (*verify_cmd) return run_verify(va);
        if (*oracle_cmd) return run_oracle(oa);
        if (*siegel_cmd) return run_siegel(sa);
        if (*primes_cmd) return run_primes(ra);
        if (*probe_cmd) return run_probe(ba);
    } catch (const IntegrityError& e) {
        std::cerr << "integrity violation: " << e.what() << "\n";
        return kViolation;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    }
    return kInvalid;
}
