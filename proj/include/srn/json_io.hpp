#pragma once
// Serialization: run manifests, JSON reports, and CSV files.  Every output
// embeds its manifest (JSON documents carry a "manifest" member; CSV files
// start with a "# manifest: {...}" comment line).

#include <srn/chain.hpp>
#include <srn/coeff.hpp>
#include <srn/measure.hpp>
#include <srn/oracle.hpp>
#include <srn/solve.hpp>
#include <srn/upskip.hpp>

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace srn {

inline constexpr const char* kToolName = "srnstat";
inline constexpr const char* kToolVersion = "0.1.0";

nlohmann::json backend_to_json(const Backend& b);

// command + input + parameters + backend + optional seed + UTC timestamp.
nlohmann::json make_manifest(const std::string& command, const std::string& input,
                             const nlohmann::json& params, const Backend& backend,
                             const std::uint64_t* seed = nullptr);

nlohmann::json classification_to_json(const Classification& c);

template <class T>
nlohmann::json generator_to_json(const Generator<T>& g) {
    nlohmann::json j;
    j["pic"] = g.pic;
    j["L"] = g.L;
    j["U"] = g.U;
    j["method"] = g.method;
    j["n"] = g.n_used;
    std::vector<double> vd;
    std::vector<std::string> vs;
    for (const auto& x : g.v) {
        vd.push_back(to_double(x));
        vs.push_back(scalar_to_string(x));
    }
    j["v"] = vd;
    if (scalar_traits<T>::is_exact) j["v_exact"] = vs;
    if (g.kkt_residual >= 0) j["kkt_residual"] = g.kkt_residual;
    if (!g.note.empty()) j["note"] = g.note;
    return j;
}

template <class T>
nlohmann::json measure_summary_to_json(const MeasureSeries<T>& m) {
    nlohmann::json j;
    j["pic"] = m.pic;
    j["omega_star"] = m.omega_star;
    j["n_max"] = m.n_max;
    j["normalized"] = m.normalized;
    j["normalization_converged"] = m.norm_converged;
    j["normalization_constant"] = to_double(m.norm_constant);
    j["provenance"] = m.provenance;
    if (m.instability_onset) {
        j["instability_onset"] = *m.instability_onset;
        j["instability_onset_state"] = m.original_state(*m.instability_onset);
        j["instability_onset_value"] = to_double(m.onset_value);
    } else {
        j["instability_onset"] = nullptr;
    }
    j["residual_master"] = m.residual_master;
    j["residual_flux"] = m.residual_flux;
    return j;
}

nlohmann::json uniqueness_to_json(const UniquenessReport& r);
nlohmann::json ratio_bounds_to_json(const RatioBounds& rb);
nlohmann::json diagnostics_to_json(const ADiagnostics& d);
nlohmann::json residuals_to_json(const ResidualReport& r);

// CSV writers.  `manifest` is embedded as the first line.
template <class T>
std::string measure_to_csv(const MeasureSeries<T>& m, const nlohmann::json& manifest) {
    std::string out = "# manifest: " + manifest.dump() + "\n";
    out += "state,value\n";
    for (long ell = 0; ell < static_cast<long>(m.values.size()); ++ell) {
        out += std::to_string(m.original_state(ell));
        out += ",";
        out += scalar_to_string(m.values[static_cast<size_t>(ell)]);
        out += "\n";
    }
    return out;
}

template <class T>
std::string gamma_table_to_csv(const GammaTable<T>& t, const nlohmann::json& manifest) {
    std::string out = "# manifest: " + manifest.dump() + "\n";
    out += "n";
    for (long j = t.L; j <= t.U; ++j) out += ",gamma_" + std::to_string(j);
    out += ",cond\n";
    for (long ell = 0; ell <= t.n_max; ++ell) {
        out += std::to_string(ell);
        for (long j = t.L; j <= t.U; ++j) out += "," + scalar_to_string(t.gamma(ell, j));
        out += "," + std::to_string(ell < static_cast<long>(t.row_cond.size())
                                        ? t.row_cond[static_cast<size_t>(ell)]
                                        : 0.0);
        out += "\n";
    }
    return out;
}

std::string occupancy_to_csv(const SsaResult& r, const nlohmann::json& manifest);
std::string h_series_to_csv(const UniquenessReport& r, const nlohmann::json& manifest);

// CSV reader: skips '#' comment lines and a non-numeric header row; returns
// (state, raw value text) pairs so the caller can parse at full precision.
std::vector<std::pair<long, std::string>> read_measure_csv(const std::string& text);

} // namespace srn
