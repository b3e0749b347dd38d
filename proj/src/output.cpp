#include "momentflow/output.hpp"

#include "momentflow/errors.hpp"

#include <fstream>
#include <locale>
#include <sstream>

namespace momentflow {

std::string version() { return MOMENTFLOW_VERSION; }

std::string format_double(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(17);
    os << v;
    return os.str();
}

void write_csv(std::ostream& out, const std::vector<std::string>& names, const std::vector<double>& t,
               const std::vector<std::vector<double>>& rows) {
    if (rows.size() != t.size()) throw InternalError("write_csv: row count mismatch");
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << "t";
    for (const auto& n : names) os << ',' << n;
    os << '\n';
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (rows[i].size() != names.size()) throw InternalError("write_csv: column count mismatch");
        os << format_double(t[i]);
        for (double v : rows[i]) os << ',' << format_double(v);
        os << '\n';
    }
    out << os.str();
}

std::vector<std::vector<double>> trajectory_rows(const Trajectory& tr) {
    std::vector<std::vector<double>> rows(tr.t.size(), std::vector<double>(tr.names.size()));
    for (std::size_t k = 0; k < tr.names.size(); ++k) {
        const auto col = tr.column(tr.names[k]);
        for (std::size_t i = 0; i < col.size(); ++i) rows[i][k] = col[i];
    }
    return rows;
}

void write_csv(std::ostream& out, const Trajectory& tr) { write_csv(out, tr.names, tr.t, trajectory_rows(tr)); }

nlohmann::json metadata(const std::string& command, const nlohmann::json& config) {
    return {{"tool", "momentflow"}, {"version", version()}, {"command", command}, {"config", config}};
}

nlohmann::json stats_json(const IntegratorStats& s) {
    return {{"steps", s.steps},     {"rejected", s.rejected}, {"rhs_evals", s.rhs_evals},
            {"abs_tol", s.abs_tol}, {"rel_tol", s.rel_tol},   {"fixed_step", s.fixed_step}};
}

nlohmann::json trajectory_json(const Trajectory& tr) {
    nlohmann::json cols = nlohmann::json::object();
    cols["t"] = tr.t;
    for (const auto& n : tr.names) cols[n] = tr.column(n);
    return {{"columns", cols},
            {"complete", tr.complete},
            {"stop_reason", tr.stop_reason},
            {"stop_time", tr.stop_time},
            {"stats", stats_json(tr.stats)}};
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write output file '" + path + "'");
    f << content;
    if (!f) throw ConfigError("failed writing '" + path + "'");
}

}  // namespace momentflow
