// Command-line front end: classify / solve / uniqueness / simulate / verify.
//
// Exit codes: 0 success, 2 parse error, 3 assumption violation, 4 out of
// scope, 5 numerical breakdown, 1 anything else.

#include <srn/chain.hpp>
#include <srn/closed.hpp>
#include <srn/errors.hpp>
#include <srn/json_io.hpp>
#include <srn/measure.hpp>
#include <srn/network.hpp>
#include <srn/oracle.hpp>
#include <srn/solve.hpp>
#include <srn/upskip.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw srn::ParseError("cannot open file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw srn::Error("cannot write file '" + path + "'");
    out << content;
}

// Precedence: explicit --precision, then SRN_PRECISION, then the backend the
// rate table supports exactly.
srn::Backend resolve_backend(std::string p, bool rational_ok) {
    if (p.empty() || p == "auto") {
        const char* env = std::getenv("SRN_PRECISION");
        if (env && *env) p = env;
    }
    if (p.empty() || p == "auto") p = rational_ok ? "exact" : "binary64";
    if (p == "binary64") return srn::make_backend(srn::Precision::Binary64);
    if (p == "exact") {
        if (!rational_ok)
            throw srn::ScopeError(
                "exact mode unavailable: a rate uses non-rational operations; "
                "use --precision binary64 or high[:bits]");
        return srn::make_backend(srn::Precision::Exact);
    }
    if (p == "high") return srn::make_backend(srn::Precision::High, 256);
    if (p.rfind("high:", 0) == 0) {
        const long bits = std::stol(p.substr(5));
        if (bits < 24 || bits > 65536) throw srn::ScopeError("precision bits out of range");
        return srn::make_backend(srn::Precision::High, static_cast<unsigned>(bits));
    }
    throw srn::ScopeError("unknown precision '" + p + "' (binary64 | high[:bits] | exact | auto)");
}

template <class Fn>
auto dispatch(const srn::Backend& b, Fn&& fn) {
    switch (b.mode) {
    case srn::Precision::Binary64: return fn(double{});
    case srn::Precision::High: return fn(srn::HighFloat{});
    case srn::Precision::Exact: return fn(srn::Rational{});
    }
    throw srn::InternalError("unhandled backend");
}

long pick_pic(const srn::TransitionSystem& ts, std::optional<long> requested) {
    const auto cls = srn::classify(ts);
    if (requested) {
        for (long s : cls.pics)
            if (s == *requested) return s;
        throw srn::ScopeError("state " + std::to_string(*requested) +
                              " is not a positive irreducible class representative");
    }
    return srn::default_pic(ts);
}

// ---------------------------------------------------------------------------

struct ClassifyArgs {
    std::string file;
    std::string out;
};

int run_classify(const ClassifyArgs& a) {
    const auto ts = srn::load_network(read_file(a.file));
    const auto cls = srn::classify(ts);
    json doc;
    doc["manifest"] = srn::make_manifest("classify", a.file, json::object(),
                                         srn::make_backend(srn::Precision::Exact));
    doc["classification"] = srn::classification_to_json(cls);
    const std::string text = doc.dump(2) + "\n";
    if (a.out.empty())
        std::cout << text;
    else
        write_file(a.out, text);
    return 0;
}

// ---------------------------------------------------------------------------

struct SolveArgs {
    std::string file;
    std::string method = "auto";
    long n = -1;     // generator horizon; -1 = automatic sweep
    long nmax = -1;  // table/series horizon; -1 = derived
    std::string precision = "auto";
    bool normalize = true;
    std::optional<long> pic;
    std::string out, report, gamma_out;
};

int run_solve(const SolveArgs& a) {
    const auto ts = srn::load_network(read_file(a.file));
    const long s = pick_pic(ts, a.pic);
    const auto tr = srn::translate(ts, s);
    const auto backend = resolve_backend(a.precision, tr.rational_capable);

    std::string method = a.method;
    if (method == "auto") method = (tr.omega_minus == -1) ? "closed" : "linear";
    if (method == "closed" && tr.omega_minus != -1)
        throw srn::ScopeError("closed form unavailable: minimal translated jump is " +
                              std::to_string(tr.omega_minus) + ", not -1");

    json params;
    params["method"] = method;
    params["n"] = a.n;
    params["nmax"] = a.nmax;
    params["normalize"] = a.normalize;
    params["pic"] = s;
    json manifest = srn::make_manifest("solve", a.file, params, backend);

    json doc;
    doc["manifest"] = manifest;

    dispatch(backend, [&](auto tag) {
        using T = decltype(tag);
        if (method == "closed") {
            const long horizon = a.nmax > 0 ? a.nmax : (a.n > 0 ? a.n : 200);
            srn::MeasureSeries<T> m =
                (tr.omega == std::vector<long>{-1, 1})
                    ? srn::birth_death_measure<T>(tr, horizon, a.normalize)
                    : srn::downward_skipfree_measure<T>(tr, horizon, a.normalize);
            srn::Generator<T> gen;
            gen.pic = s;
            gen.L = tr.L;
            gen.U = tr.U;
            gen.v = {T(1)};
            gen.method = "closed";
            gen.n_used = horizon;
            doc["generator"] = srn::generator_to_json(gen);
            doc["measure"] = srn::measure_summary_to_json(m);
            if (!a.out.empty()) write_file(a.out, srn::measure_to_csv(m, manifest));
            return 0;
        }

        const long n_default = tr.U + 25;
        long nmax = a.nmax > 0 ? a.nmax : std::max({2 * (a.n > 0 ? a.n : n_default), tr.U + 60, 100L});
        if (a.n > 0 && nmax < a.n) nmax = a.n;
        auto table = srn::build_gamma_table<T>(tr, nmax);
        if (!a.gamma_out.empty()) write_file(a.gamma_out, srn::gamma_table_to_csv(table, manifest));

        srn::Generator<T> gen;
        if (method == "linear") {
            if (a.n > 0) {
                gen = srn::linear_scheme(table, a.n);
            } else {
                auto sweep = srn::linear_scheme_auto(table);
                gen = sweep.gen;
                doc["sweep"] = {{"n_final", sweep.n_final},
                                {"movement", sweep.movement},
                                {"converged", sweep.converged}};
            }
        } else if (method == "qp") {
            const long n = a.n > 0 ? a.n : std::min<long>(18, nmax);
            auto gq = srn::qp_generator(table, n);
            gen.pic = gq.pic;
            gen.L = gq.L;
            gen.U = gq.U;
            gen.method = gq.method;
            gen.n_used = gq.n_used;
            gen.kkt_residual = gq.kkt_residual;
            for (double x : gq.v) gen.v.push_back(T(x));
        } else {
            throw srn::ScopeError("unknown method '" + method + "' (auto | linear | qp | closed)");
        }
        doc["generator"] = srn::generator_to_json(gen);

        // Cross-check the linear generator against the quadratic scheme on a
        // small horizon whenever the latter is numerically admissible.
        if (method == "linear") {
            const long n_qp = std::min<long>(gen.n_used, 18);
            if (n_qp > tr.U) {
                try {
                    auto gq = srn::qp_generator(table, n_qp);
                    double diff = 0;
                    for (size_t j = 0; j < gq.v.size(); ++j)
                        diff = std::max(diff, std::abs(gq.v[j] - srn::to_double(gen.v[j])));
                    doc["qp_crosscheck"] = {{"n", n_qp},
                                            {"max_diff", diff},
                                            {"kkt_residual", gq.kkt_residual}};
                } catch (const srn::NumericalError& e) {
                    doc["qp_crosscheck"] = {{"skipped", e.what()}};
                }
            }
        }

        auto m = srn::assemble_measure(table, gen, a.normalize);
        doc["measure"] = srn::measure_summary_to_json(m);
        if (!a.out.empty()) write_file(a.out, srn::measure_to_csv(m, manifest));
        return 0;
    });

    const std::string text = doc.dump(2) + "\n";
    std::cout << text;
    if (!a.report.empty()) write_file(a.report, text);
    return 0;
}

// ---------------------------------------------------------------------------

struct UniquenessArgs {
    std::string file;
    long terms = 200000;
    long depth = 700;
    long nmax = 400;
    std::string precision = "auto";
    std::optional<long> pic;
    std::string out, csv;
};

int run_uniqueness(const UniquenessArgs& a) {
    const auto ts = srn::load_network(read_file(a.file));
    const long s = pick_pic(ts, a.pic);
    const auto tr = srn::translate(ts, s);
    const auto backend = resolve_backend(a.precision, tr.rational_capable);

    json params;
    params["terms"] = a.terms;
    params["depth"] = a.depth;
    params["pic"] = s;
    json manifest = srn::make_manifest("uniqueness", a.file, params, backend);

    json doc;
    doc["manifest"] = manifest;
    dispatch(backend, [&](auto tag) {
        using T = decltype(tag);
        auto rep = srn::uniqueness_test<T>(tr, a.terms, a.depth);
        doc["uniqueness"] = srn::uniqueness_to_json(rep);
        if (!a.csv.empty()) write_file(a.csv, srn::h_series_to_csv(rep, manifest));
        if (tr.d() == 2) {
            auto table = srn::build_gamma_table<T>(tr, a.nmax);
            doc["ratio_bounds"] = srn::ratio_bounds_to_json(srn::ratio_bounds(table));
        }
        return 0;
    });

    const std::string text = doc.dump(2) + "\n";
    std::cout << text;
    if (!a.out.empty()) write_file(a.out, text);
    return 0;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
    std::string file;
    long x0 = 0;
    double t = 1e5;
    double burn = 0.0;
    std::uint64_t seed = 1;
    std::uint64_t max_events = 1ull << 34;
    std::string out;
};

int run_simulate(const SimulateArgs& a) {
    const auto ts = srn::load_network(read_file(a.file));
    srn::SsaOptions opt;
    opt.x0 = a.x0;
    opt.t_total = a.t;
    opt.t_burn = a.burn;
    opt.seed = a.seed;
    opt.max_events = a.max_events;
    const auto res = srn::ssa_occupancy(ts, opt);

    json params;
    params["x0"] = a.x0;
    params["t"] = a.t;
    params["burn"] = a.burn;
    json manifest = srn::make_manifest("simulate", a.file, params,
                                       srn::make_backend(srn::Precision::Binary64), &a.seed);
    const std::string csv = srn::occupancy_to_csv(res, manifest);
    if (a.out.empty()) {
        std::cout << csv;
    } else {
        write_file(a.out, csv);
        json doc;
        doc["manifest"] = manifest;
        doc["events"] = res.events;
        doc["termination"] = res.termination;
        doc["window"] = res.window;
        doc["states_visited"] = res.occupancy.size();
        std::cout << doc.dump(2) << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
    std::string file;
    std::string csv;
    std::string precision = "auto";
    std::string out;
};

int run_verify(const VerifyArgs& a) {
    const auto ts = srn::load_network(read_file(a.file));
    const auto rows = srn::read_measure_csv(read_file(a.csv));
    if (rows.empty()) throw srn::ParseError("no data rows in '" + a.csv + "'");
    const auto backend = resolve_backend(a.precision, ts.rational_capable);

    json params;
    params["measure"] = a.csv;
    json manifest = srn::make_manifest("verify", a.file, params, backend);
    json doc;
    doc["manifest"] = manifest;

    dispatch(backend, [&](auto tag) {
        using T = decltype(tag);
        long max_state = 0;
        for (const auto& [x, _] : rows) {
            if (x < 0) throw srn::ParseError("negative state in measure file");
            max_state = std::max(max_state, x);
        }
        std::vector<T> pi(static_cast<size_t>(max_state) + 1, T(0));
        bool signed_measure = false;
        for (const auto& [x, text] : rows) {
            T v;
            if constexpr (srn::scalar_traits<T>::is_exact)
                v = srn::rational_from_decimal(text);
            else if constexpr (std::is_same_v<T, double>)
                v = std::stod(text);
            else
                v = srn::HighFloat(text);
            pi[static_cast<size_t>(x)] = v;
            if (v < T(0)) signed_measure = true;
        }
        auto rep = srn::master_residual_base(ts, pi);
        doc["residuals"] = srn::residuals_to_json(rep);
        doc["signed"] = signed_measure;
        if (signed_measure) doc["note"] = "signed measure accepted for verification";
        return 0;
    });

    const std::string text = doc.dump(2) + "\n";
    std::cout << text;
    if (!a.out.empty()) write_file(a.out, text);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stationary measures of one-species reaction networks on the nonnegative integers"};
    app.require_subcommand(1);

    ClassifyArgs ca;
    auto* c_cls = app.add_subcommand("classify", "state-space classification and irreducible classes");
    c_cls->add_option("file", ca.file, "network file")->required();
    c_cls->add_option("--out", ca.out, "write JSON here instead of stdout");

    SolveArgs sa;
    auto* c_sol = app.add_subcommand("solve", "compute a stationary measure");
    c_sol->add_option("file", sa.file, "network file")->required();
    c_sol->add_option("--method", sa.method, "auto | linear | qp | closed")->default_val("auto");
    c_sol->add_option("--n", sa.n, "generator horizon (default: automatic sweep)");
    c_sol->add_option("--nmax", sa.nmax, "series horizon (default: derived from --n)");
    c_sol->add_option("--precision", sa.precision, "binary64 | high[:bits] | exact | auto");
    c_sol->add_flag("--normalize,!--no-normalize", sa.normalize, "normalize to a distribution");
    long sa_pic = -1;
    c_sol->add_option("--pic", sa_pic, "irreducible-class representative state");
    c_sol->add_option("--out", sa.out, "measure CSV path");
    c_sol->add_option("--report", sa.report, "also write the JSON report here");
    c_sol->add_option("--gamma-out", sa.gamma_out, "basis-table CSV path");

    UniquenessArgs ua;
    auto* c_unq = app.add_subcommand("uniqueness", "uniqueness analysis for upwardly skip-free chains");
    c_unq->add_option("file", ua.file, "network file")->required();
    c_unq->add_option("--terms", ua.terms, "series terms to accumulate")->default_val(200000);
    c_unq->add_option("--depth", ua.depth, "continued-fraction convergent depth")->default_val(700);
    c_unq->add_option("--nmax", ua.nmax, "basis horizon for ratio bounds")->default_val(400);
    c_unq->add_option("--precision", ua.precision, "binary64 | high[:bits] | exact | auto");
    long ua_pic = -1;
    c_unq->add_option("--pic", ua_pic, "irreducible-class representative state");
    c_unq->add_option("--out", ua.out, "write JSON here as well");
    c_unq->add_option("--csv", ua.csv, "series trace CSV path");

    SimulateArgs ma;
    auto* c_sim = app.add_subcommand("simulate", "stochastic simulation occupancy");
    c_sim->add_option("file", ma.file, "network file")->required();
    c_sim->add_option("--x0", ma.x0, "initial state")->default_val(0);
    c_sim->add_option("--t", ma.t, "total simulated time")->default_val(1e5);
    c_sim->add_option("--burn", ma.burn, "burn-in time excluded from occupancy")->default_val(0.0);
    c_sim->add_option("--seed", ma.seed, "random seed")->default_val(1);
    c_sim->add_option("--max-events", ma.max_events, "event cap");
    c_sim->add_option("--out", ma.out, "occupancy CSV path (default: stdout)");

    VerifyArgs va;
    auto* c_ver = app.add_subcommand("verify", "master-equation residual of a measure file");
    c_ver->add_option("file", va.file, "network file")->required();
    c_ver->add_option("measure", va.csv, "measure CSV (state,value)")->required();
    c_ver->add_option("--precision", va.precision, "binary64 | high[:bits] | exact | auto");
    c_ver->add_option("--out", va.out, "write JSON here as well");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // command-line usage errors map to the parse exit code
    }

    try {
        if (c_cls->parsed()) return run_classify(ca);
        if (c_sol->parsed()) {
            if (sa_pic >= 0) sa.pic = sa_pic;
            return run_solve(sa);
        }
        if (c_unq->parsed()) {
            if (ua_pic >= 0) ua.pic = ua_pic;
            return run_uniqueness(ua);
        }
        if (c_sim->parsed()) return run_simulate(ma);
        if (c_ver->parsed()) return run_verify(va);
        throw srn::InternalError("no subcommand dispatched");
    } catch (const srn::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
