// Python bindings.  Operations take the network source text; values cross the
// boundary as plain floats/dicts (exact-mode results also carry strings).

#include <srn/chain.hpp>
#include <srn/closed.hpp>
#include <srn/errors.hpp>
#include <srn/json_io.hpp>
#include <srn/measure.hpp>
#include <srn/network.hpp>
#include <srn/oracle.hpp>
#include <srn/solve.hpp>
#include <srn/upskip.hpp>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using nlohmann::json;

namespace {

py::object json_to_py(const json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

srn::Backend backend_from(const std::string& precision, bool rational_ok) {
    std::string p = precision.empty() ? "auto" : precision;
    if (p == "auto") p = rational_ok ? "exact" : "binary64";
    if (p == "binary64") return srn::make_backend(srn::Precision::Binary64);
    if (p == "exact") {
        if (!rational_ok) throw srn::ScopeError("exact mode unavailable for these rates");
        return srn::make_backend(srn::Precision::Exact);
    }
    if (p == "high") return srn::make_backend(srn::Precision::High, 256);
    if (p.rfind("high:", 0) == 0)
        return srn::make_backend(srn::Precision::High,
                                 static_cast<unsigned>(std::stol(p.substr(5))));
    throw srn::ScopeError("unknown precision '" + p + "'");
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

srn::TranslatedSystem translated(const std::string& text, std::optional<long> pic) {
    auto ts = srn::load_network(text);
    long s = pic ? *pic : srn::default_pic(ts);
    if (pic) {
        bool ok = false;
        for (long c : srn::classify(ts).pics) ok = ok || c == *pic;
        if (!ok) throw srn::ScopeError("state is not a positive irreducible class representative");
    }
    return srn::translate(ts, s);
}

template <class T>
py::dict measure_to_dict(const srn::MeasureSeries<T>& m) {
    py::dict d;
    std::vector<long> states;
    std::vector<double> values;
    for (long ell = 0; ell < static_cast<long>(m.values.size()); ++ell) {
        states.push_back(m.original_state(ell));
        values.push_back(srn::to_double(m.values[static_cast<size_t>(ell)]));
    }
    d["states"] = states;
    d["values"] = values;
    if constexpr (srn::scalar_traits<T>::is_exact) {
        std::vector<std::string> exact;
        for (const auto& v : m.values) exact.push_back(srn::scalar_to_string(v));
        d["values_exact"] = exact;
    }
    d["normalized"] = m.normalized;
    d["normalization_converged"] = m.norm_converged;
    d["normalization_constant"] = srn::to_double(m.norm_constant);
    d["provenance"] = m.provenance;
    d["residual_master"] = m.residual_master;
    d["residual_flux"] = m.residual_flux;
    if (m.instability_onset) {
        d["instability_onset"] = *m.instability_onset;
        d["instability_onset_value"] = srn::to_double(m.onset_value);
    } else {
        d["instability_onset"] = py::none();
    }
    return d;
}

} // namespace

PYBIND11_MODULE(srnstat, m) {
    m.doc() = "stationary measures of one-species reaction networks";

    py::register_exception<srn::ParseError>(m, "NetworkParseError", PyExc_ValueError);
    py::register_exception<srn::AssumptionError>(m, "AssumptionError", PyExc_ValueError);
    py::register_exception<srn::ScopeError>(m, "ScopeError", PyExc_ValueError);
    py::register_exception<srn::NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    m.def("canonical", [](const std::string& text) {
        return srn::render_network(srn::parse_network(text));
    }, py::arg("text"), "parse and re-render a network in canonical form");

    m.def("classify", [](const std::string& text) {
        return json_to_py(srn::classification_to_json(srn::classify(srn::load_network(text))));
    }, py::arg("text"));

    m.def("gamma_table", [](const std::string& text, long n, const std::string& precision,
                            std::optional<long> pic) {
        auto tr = translated(text, pic);
        auto backend = backend_from(precision, tr.rational_capable);
        return dispatch(backend, [&](auto tag) -> py::dict {
            using T = decltype(tag);
            auto t = srn::build_gamma_table<T>(tr, n);
            py::dict d;
            d["L"] = t.L;
            d["U"] = t.U;
            d["d"] = t.d;
            d["m_star"] = t.m_star;
            d["pic"] = tr.s;
            d["omega_star"] = tr.omega_star;
            std::vector<std::vector<double>> rows;
            for (long ell = 0; ell <= t.n_max; ++ell) {
                std::vector<double> row;
                for (long j = t.L; j <= t.U; ++j) row.push_back(srn::to_double(t.gamma(ell, j)));
                rows.push_back(std::move(row));
            }
            d["gamma"] = rows;
            d["row_cond"] = t.row_cond;
            d["overflowed"] = t.overflowed;
            return d;
        });
    }, py::arg("text"), py::arg("n"), py::arg("precision") = "binary64",
       py::arg("pic") = py::none());

    m.def("linear_generator", [](const std::string& text, long n, std::optional<long> nmax,
                                 const std::string& precision, std::optional<long> pic) {
        auto tr = translated(text, pic);
        auto backend = backend_from(precision, tr.rational_capable);
        return dispatch(backend, [&](auto tag) -> py::dict {
            using T = decltype(tag);
            auto t = srn::build_gamma_table<T>(tr, nmax ? *nmax : n);
            auto g = srn::linear_scheme(t, n);
            py::dict d;
            std::vector<double> v;
            for (const auto& x : g.v) v.push_back(srn::to_double(x));
            d["v"] = v;
            if constexpr (srn::scalar_traits<T>::is_exact) {
                std::vector<std::string> vx;
                for (const auto& x : g.v) vx.push_back(srn::scalar_to_string(x));
                d["v_exact"] = vx;
            }
            d["L"] = g.L;
            d["U"] = g.U;
            d["n"] = g.n_used;
            d["note"] = g.note;
            return d;
        });
    }, py::arg("text"), py::arg("n"), py::arg("nmax") = py::none(),
       py::arg("precision") = "binary64", py::arg("pic") = py::none());

    m.def("qp_generator", [](const std::string& text, long n, std::optional<long> nmax,
                             std::optional<long> pic) {
        auto tr = translated(text, pic);
        auto t = srn::build_gamma_table<double>(tr, nmax ? *nmax : n);
        auto g = srn::qp_generator(t, n);
        py::dict d;
        d["v"] = g.v;
        d["kkt_residual"] = g.kkt_residual;
        d["L"] = g.L;
        d["U"] = g.U;
        d["n"] = g.n_used;
        return d;
    }, py::arg("text"), py::arg("n"), py::arg("nmax") = py::none(), py::arg("pic") = py::none());

    m.def("solve_measure", [](const std::string& text, const std::string& method, std::optional<long> n,
                              std::optional<long> nmax, const std::string& precision, bool normalize,
                              std::optional<long> pic) {
        auto tr = translated(text, pic);
        auto backend = backend_from(precision, tr.rational_capable);
        std::string meth = method;
        if (meth == "auto") meth = tr.omega_minus == -1 ? "closed" : "linear";
        return dispatch(backend, [&](auto tag) -> py::dict {
            using T = decltype(tag);
            if (meth == "closed") {
                const long horizon = nmax ? *nmax : (n ? *n : 200);
                auto mm = tr.omega == std::vector<long>{-1, 1}
                              ? srn::birth_death_measure<T>(tr, horizon, normalize)
                              : srn::downward_skipfree_measure<T>(tr, horizon, normalize);
                return measure_to_dict(mm);
            }
            const long n_eff = n ? *n : tr.U + 25;
            const long horizon = nmax ? *nmax : std::max({2 * n_eff, tr.U + 60, 100L});
            auto t = srn::build_gamma_table<T>(tr, horizon);
            srn::Generator<T> gen;
            if (meth == "linear") {
                gen = srn::linear_scheme(t, n_eff);
            } else if (meth == "qp") {
                auto gq = srn::qp_generator(t, n_eff);
                gen.pic = gq.pic;
                gen.L = gq.L;
                gen.U = gq.U;
                gen.method = gq.method;
                gen.n_used = gq.n_used;
                gen.kkt_residual = gq.kkt_residual;
                for (double x : gq.v) gen.v.push_back(T(x));
            } else {
                throw srn::ScopeError("unknown method '" + meth + "'");
            }
            auto mm = srn::assemble_measure(t, gen, normalize);
            py::dict d = measure_to_dict(mm);
            std::vector<double> v;
            for (const auto& x : gen.v) v.push_back(srn::to_double(x));
            d["generator"] = v;
            d["method"] = gen.method;
            return d;
        });
    }, py::arg("text"), py::arg("method") = "auto", py::arg("n") = py::none(),
       py::arg("nmax") = py::none(), py::arg("precision") = "auto", py::arg("normalize") = true,
       py::arg("pic") = py::none());

    m.def("uniqueness", [](const std::string& text, long terms, long depth,
                           const std::string& precision, std::optional<long> pic) {
        auto tr = translated(text, pic);
        auto backend = backend_from(precision, tr.rational_capable);
        return dispatch(backend, [&](auto tag) -> py::object {
            using T = decltype(tag);
            auto rep = srn::uniqueness_test<T>(tr, terms, depth);
            return json_to_py(srn::uniqueness_to_json(rep));
        });
    }, py::arg("text"), py::arg("terms") = 200000, py::arg("depth") = 700,
       py::arg("precision") = "auto", py::arg("pic") = py::none());

    m.def("ratio_bounds", [](const std::string& text, long nmax, const std::string& precision,
                             std::optional<long> pic) {
        auto tr = translated(text, pic);
        auto backend = backend_from(precision, tr.rational_capable);
        return dispatch(backend, [&](auto tag) -> py::object {
            using T = decltype(tag);
            auto t = srn::build_gamma_table<T>(tr, nmax);
            return json_to_py(srn::ratio_bounds_to_json(srn::ratio_bounds(t)));
        });
    }, py::arg("text"), py::arg("nmax") = 400, py::arg("precision") = "auto",
       py::arg("pic") = py::none());

    m.def("diagnostics", [](const std::string& text, long n_lo, long n_hi, std::optional<long> nmax,
                            const std::string& precision, std::optional<long> pic) {
        auto tr = translated(text, pic);
        auto backend = backend_from(precision, tr.rational_capable);
        return dispatch(backend, [&](auto tag) -> py::object {
            using T = decltype(tag);
            auto t = srn::build_gamma_table<T>(tr, nmax ? *nmax : n_hi);
            return json_to_py(srn::diagnostics_to_json(srn::a_matrix_diagnostics(t, n_lo, n_hi)));
        });
    }, py::arg("text"), py::arg("n_lo"), py::arg("n_hi"), py::arg("nmax") = py::none(),
       py::arg("precision") = "binary64", py::arg("pic") = py::none());

    m.def("simulate", [](const std::string& text, long x0, double t, double burn,
                         std::uint64_t seed, std::uint64_t max_events) {
        auto ts = srn::load_network(text);
        srn::SsaOptions opt;
        opt.x0 = x0;
        opt.t_total = t;
        opt.t_burn = burn;
        opt.seed = seed;
        opt.max_events = max_events;
        auto res = srn::ssa_occupancy(ts, opt);
        py::dict d;
        d["occupancy"] = res.occupancy;
        d["events"] = res.events;
        d["termination"] = res.termination;
        d["window"] = res.window;
        d["x_final"] = res.x_final;
        return d;
    }, py::arg("text"), py::arg("x0") = 0, py::arg("t") = 1e5, py::arg("burn") = 0.0,
       py::arg("seed") = 1, py::arg("max_events") = (1ull << 34));

    m.def("verify", [](const std::string& text, const std::vector<long>& states,
                       const std::vector<std::string>& values, const std::string& precision) {
        auto ts = srn::load_network(text);
        auto backend = backend_from(precision, ts.rational_capable);
        if (states.size() != values.size())
            throw srn::ScopeError("states and values must have equal length");
        return dispatch(backend, [&](auto tag) -> py::object {
            using T = decltype(tag);
            long max_state = 0;
            for (long x : states) max_state = std::max(max_state, x);
            std::vector<T> pi(static_cast<size_t>(max_state) + 1, T(0));
            for (size_t i = 0; i < states.size(); ++i) {
                if constexpr (srn::scalar_traits<T>::is_exact)
                    pi[static_cast<size_t>(states[i])] = srn::rational_from_decimal(values[i]);
                else if constexpr (std::is_same_v<T, double>)
                    pi[static_cast<size_t>(states[i])] = std::stod(values[i]);
                else
                    pi[static_cast<size_t>(states[i])] = srn::HighFloat(values[i]);
            }
            return json_to_py(srn::residuals_to_json(srn::master_residual_base(ts, pi)));
        });
    }, py::arg("text"), py::arg("states"), py::arg("values"), py::arg("precision") = "auto");
}
