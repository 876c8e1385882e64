#include <srn/json_io.hpp>

#include <srn/errors.hpp>

#include <cctype>
#include <ctime>
#include <sstream>

namespace srn {

using nlohmann::json;

json backend_to_json(const Backend& b) {
    json j;
    switch (b.mode) {
    case Precision::Binary64: j["mode"] = "binary64"; break;
    case Precision::High: j["mode"] = "high"; break;
    case Precision::Exact: j["mode"] = "exact"; break;
    }
    if (b.mode == Precision::High) {
        j["mantissa_bits"] = b.mantissa_bits;
        j["effective_bits"] = b.effective_bits;
    }
    return j;
}

json make_manifest(const std::string& command, const std::string& input, const json& params,
                   const Backend& backend, const std::uint64_t* seed) {
    json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["command"] = command;
    j["input"] = input;
    j["params"] = params;
    j["backend"] = backend_to_json(backend);
    if (seed) j["seed"] = *seed;
    char buf[32];
    std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    j["timestamp"] = buf;
    return j;
}

namespace {

json range_to_json(const StateRange& r) {
    if (r.empty()) return json::array();
    return json::array({r.lo, r.hi});
}

} // namespace

json classification_to_json(const Classification& c) {
    json j;
    j["neutral"] = range_to_json(c.neutral);
    j["trapping"] = range_to_json(c.trapping);
    j["escaping"] = range_to_json(c.escaping);
    j["omega_star"] = c.omega_star;
    j["pics"] = c.pics;
    j["qics"] = c.qics;
    j["i"] = c.i;
    j["i_plus"] = c.i_plus;
    j["o"] = c.o;
    j["o_minus"] = c.o_minus;
    return j;
}

json uniqueness_to_json(const UniquenessReport& r) {
    json j;
    j["verdict"] = r.verdict;
    j["certified"] = r.certified;
    j["method"] = r.method;
    j["note"] = r.note;
    j["x0"] = r.x0;
    j["terms_requested"] = r.terms_requested;
    j["terms_evaluated"] = r.terms_evaluated;
    j["h_partial"] = r.h_partial;
    j["h_extrapolated"] = r.h_extrapolated;
    j["tail_exponent"] = r.tail_exponent;
    j["diverged_numerically"] = r.diverged_numerically;
    if (r.psi_depth > 0) {
        j["psi_lower"] = r.psi_lower;
        j["psi_upper"] = r.psi_upper;
        j["psi_depth"] = r.psi_depth;
    }
    return j;
}

json ratio_bounds_to_json(const RatioBounds& rb) {
    json j;
    j["r1"] = rb.has_r1 ? json(rb.r1) : json(nullptr);
    j["r2"] = rb.has_r2 ? json(rb.r2) : json(nullptr);
    j["n_r1"] = rb.n_r1;
    j["n_r2"] = rb.n_r2;
    j["n_scanned"] = rb.n_scanned;
    return j;
}

json diagnostics_to_json(const ADiagnostics& d) {
    json j;
    j["d"] = d.d;
    j["window"] = json::array({d.n_lo, d.n_hi});
    j["heuristic"] = d.heuristic;
    j["period"] = d.period;
    j["delta_by_shift"] = d.delta_by_shift;
    j["label"] = d.label;
    if (d.cross_residue_disagreement >= 0)
        j["cross_residue_disagreement"] = d.cross_residue_disagreement;
    json entries = json::array();
    for (const auto& e : d.entries) {
        json je;
        je["n"] = e.n;
        if (e.delta >= 0) je["delta"] = e.delta;
        je["det"] = e.det;
        je["invertible"] = e.invertible;
        if (!e.generator.empty()) je["generator"] = e.generator;
        entries.push_back(std::move(je));
    }
    j["entries"] = entries;
    json qt = json::array();
    for (const auto& [n, q] : d.q_tail) qt.push_back(json::array({n, q}));
    j["q_tail"] = qt;
    return j;
}

json residuals_to_json(const ResidualReport& r) {
    json j;
    j["max_master"] = r.max_master;
    j["arg_master"] = r.arg_master;
    j["max_flux"] = r.max_flux;
    j["arg_flux"] = r.arg_flux;
    j["checked_up_to"] = r.checked_up_to;
    j["master_exact_zero"] = r.master_exact_zero;
    return j;
}

std::string occupancy_to_csv(const SsaResult& r, const json& manifest) {
    std::string out = "# manifest: " + manifest.dump() + "\n";
    out += "state,time_fraction\n";
    char buf[64];
    for (const auto& [x, p] : r.occupancy) {
        std::snprintf(buf, sizeof buf, "%ld,%.17g\n", x, p);
        out += buf;
    }
    return out;
}

std::string h_series_to_csv(const UniquenessReport& r, const json& manifest) {
    std::string out = "# manifest: " + manifest.dump() + "\n";
    out += "n,h_partial,q_n\n";
    char buf[96];
    for (const auto& row : r.trace) {
        std::snprintf(buf, sizeof buf, "%.0f,%.17g,%.17g\n", row[0], row[1], row[2]);
        out += buf;
    }
    return out;
}

std::vector<std::pair<long, std::string>> read_measure_csv(const std::string& text) {
    std::vector<std::pair<long, std::string>> rows;
    std::istringstream is(text);
    std::string line;
    long lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ParseError("expected 'state,value'", lineno, 1);
        const std::string head = line.substr(0, comma);
        bool numeric = !head.empty();
        for (char ch : head)
            if (!std::isdigit(static_cast<unsigned char>(ch)) && ch != '-' && ch != '+')
                numeric = false;
        if (!numeric) continue; // header row
        try {
            rows.emplace_back(std::stol(head), line.substr(comma + 1));
        } catch (const std::exception&) {
            throw ParseError("bad state index '" + head + "'", lineno, 1);
        }
    }
    return rows;
}

} // namespace srn
