#include "gnv/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "gnv/config.hpp"
#include "gnv/errors.hpp"
#include "gnv/stats.hpp"

namespace gnv {
namespace {

using nlohmann::json;

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
        while (!field.empty() && field.front() == ' ') field.erase(field.begin());
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
    if (s == "nan" || s == "-nan" || s == "NaN") {
        return std::numeric_limits<double>::quiet_NaN();
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ShapeError("line " + std::to_string(line_no) + ": '" + s + "' is not a number");
    }
    return v;
}

std::uint64_t parse_u64(const std::string& s, std::size_t line_no) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ShapeError("line " + std::to_string(line_no) + ": '" + s + "' is not an integer");
    }
    return v;
}

json number_or_null(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

json ks_json(const KsResult& ks) {
    return json{{"D", number_or_null(ks.D)}, {"p", number_or_null(ks.p)}};
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    return out;
}

void check_written(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) {
        throw IoError("failed while writing " + path.string());
    }
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

void write_path_csv(std::ostream& out, const GaussianPath& g) {
    out << "t,G\n";
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        out << format_double(g.grid.t(i)) << ',' << format_double(g.values[i]) << '\n';
    }
}

void write_path_csv(std::ostream& out, const GaussianPath& g, const VasicekPath& x) {
    if (g.values.size() != x.values.size()) {
        throw ShapeError("noise and Vasicek paths have different lengths");
    }
    out << "t,G,X\n";
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        out << format_double(g.grid.t(i)) << ',' << format_double(g.values[i]) << ','
            << format_double(x.values[i]) << '\n';
    }
}

PathTable read_path_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ShapeError("path CSV is empty");
    }
    const auto header = split_csv(line);
    int t_col = -1, g_col = -1, x_col = -1;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == "t") t_col = static_cast<int>(c);
        else if (header[c] == "G") g_col = static_cast<int>(c);
        else if (header[c] == "X") x_col = static_cast<int>(c);
        else throw ShapeError("unexpected column '" + header[c] + "' in path CSV");
    }
    if (t_col != 0 || (g_col < 0 && x_col < 0)) {
        throw ShapeError("path CSV header must start with t and contain G and/or X");
    }
    std::vector<double> t, g, x;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv(line);
        if (fields.size() != header.size()) {
            throw ShapeError("line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                             " fields, expected " + std::to_string(header.size()));
        }
        t.push_back(parse_double(fields[0], line_no));
        if (g_col >= 0) g.push_back(parse_double(fields[static_cast<std::size_t>(g_col)], line_no));
        if (x_col >= 0) x.push_back(parse_double(fields[static_cast<std::size_t>(x_col)], line_no));
    }
    if (t.size() < 2) {
        throw ShapeError("path CSV needs at least two rows");
    }
    if (t.front() != 0.0) {
        throw ShapeError("path CSV must start at t = 0");
    }
    const double dt = t[1] - t[0];
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double expected = static_cast<double>(i) * dt;
        if (std::abs(t[i] - expected) > 1e-9 * std::max(1.0, expected)) {
            throw ShapeError("path CSV time column is not a uniform grid (row " + std::to_string(i + 1) + ")");
        }
    }
    PathTable table{Grid(t.size() - 1, dt), std::nullopt, std::nullopt};
    if (g_col >= 0) table.G = std::move(g);
    if (x_col >= 0) table.X = std::move(x);
    return table;
}

PathTable read_path_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open path file " + path.string());
    }
    return read_path_csv(in);
}

void write_replications_csv(std::ostream& out, const std::vector<ReplicationRecord>& records) {
    out << kReplicationsHeader << '\n';
    for (const auto& rec : records) {
        for (const auto& r : rec.results) {
            const auto& e = r.estimates;
            out << rec.index << ',' << format_double(rec.T) << ',' << rec.seed << ','
                << format_double(e.mu_hat) << ',' << format_double(e.k_hat) << ','
                << format_double(e.mu_ls) << ',' << format_double(e.k_ls) << ',' << to_string(r.mode)
                << ',' << format_double(r.errors.e_mu) << ',' << format_double(r.errors.e_k) << ','
                << format_double(r.errors.e_mu_ls) << ',' << format_double(r.errors.e_k_ls) << '\n';
        }
    }
}

std::vector<ReplicationRecord> read_replications_csv(std::istream& in, const ExperimentConfig& config) {
    std::string line;
    if (!std::getline(in, line) || split_csv(line) != split_csv(kReplicationsHeader)) {
        throw ShapeError(std::string("replications CSV must start with header ") + kReplicationsHeader);
    }
    std::map<std::pair<std::size_t, std::size_t>, ReplicationRecord> by_key;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto f = split_csv(line);
        if (f.size() != 12) {
            throw ShapeError("line " + std::to_string(line_no) + " of replications CSV has " +
                             std::to_string(f.size()) + " fields, expected 12");
        }
        const double T = parse_double(f[1], line_no);
        std::size_t T_index = config.T_list.size();
        for (std::size_t j = 0; j < config.T_list.size(); ++j) {
            if (config.T_list[j] == T) T_index = j;
        }
        if (T_index == config.T_list.size()) {
            throw ShapeError("line " + std::to_string(line_no) + ": horizon " + f[1] +
                             " is not in the configured T_list");
        }
        const auto index = static_cast<std::size_t>(parse_u64(f[0], line_no));
        auto& rec = by_key[{T_index, index}];
        rec.index = index;
        rec.T_index = T_index;
        rec.T = T;
        rec.seed = parse_u64(f[2], line_no);

        ModeResult r;
        r.mode = parse_integral_mode(f[7]);
        r.estimates.mode = r.mode;
        r.estimates.mu_hat = parse_double(f[3], line_no);
        r.estimates.k_hat = parse_double(f[4], line_no);
        r.estimates.mu_ls = parse_double(f[5], line_no);
        r.estimates.k_ls = parse_double(f[6], line_no);
        r.errors = {parse_double(f[8], line_no), parse_double(f[10], line_no),
                    parse_double(f[9], line_no), parse_double(f[11], line_no)};
        if (!r.ok()) {
            r.error = "estimate missing in input";
        }
        rec.results.push_back(std::move(r));
    }
    std::vector<ReplicationRecord> records;
    records.reserve(by_key.size());
    for (auto& [key, rec] : by_key) {
        if (rec.results.size() != config.modes.size()) {
            throw ShapeError("replication " + std::to_string(rec.index) + " has " +
                             std::to_string(rec.results.size()) + " mode rows, expected " +
                             std::to_string(config.modes.size()));
        }
        for (std::size_t m = 0; m < config.modes.size(); ++m) {
            if (rec.results[m].mode != config.modes[m]) {
                throw ShapeError("mode order in replications CSV does not match the configuration");
            }
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<ReplicationRecord> read_replications_csv(const std::filesystem::path& path,
                                                     const ExperimentConfig& config) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open replications file " + path.string());
    }
    return read_replications_csv(in, config);
}

json summary_to_json(const SummaryStats& summary, const ExperimentConfig& config) {
    json cells = json::array();
    for (const auto& c : summary.cells) {
        json candidates = json::array();
        for (const auto& cand : c.candidates) {
            candidates.push_back({{"name", cand.name},
                                  {"variance", number_or_null(cand.variance)},
                                  {"variance_ratio", number_or_null(cand.variance_ratio)},
                                  {"within_factor_1_5", cand.within_factor},
                                  {"ks", ks_json(cand.ks)},
                                  {"ks_pass", cand.ks_pass}});
        }
        cells.push_back({{"estimator", c.estimator},
                         {"family", c.family},
                         {"T", c.T},
                         {"n_valid", c.n_valid},
                         {"n_failed", c.n_failed},
                         {"mean", number_or_null(c.mean)},
                         {"median", number_or_null(c.median)},
                         {"variance", number_or_null(c.variance)},
                         {"median_abs_error", number_or_null(c.median_abs_error)},
                         {"ks_evaluated", c.ks_evaluated},
                         {"studentized_ks", ks_json(c.studentized)},
                         {"studentized_pass", c.studentized_pass},
                         {"jarque_bera", {{"statistic", number_or_null(c.jarque_bera.statistic)},
                                          {"p", number_or_null(c.jarque_bera.p)}}},
                         {"candidates", candidates},
                         {"matching_candidates", c.matching_candidates}});
    }
    json consistency = json::array();
    for (const auto& t : summary.consistency) {
        consistency.push_back({{"estimator", t.estimator},
                               {"T", t.T},
                               {"median_abs_error", t.median_abs_error},
                               {"strictly_decreasing", t.strictly_decreasing}});
    }
    return json{{"config", config_to_json(config)},
                {"cells", cells},
                {"consistency", consistency},
                {"ks_level", kKsLevel},
                {"variance_factor", kVarianceFactor}};
}

void emit_report(const SummaryStats& summary, const std::vector<ReplicationRecord>& records,
                 const ExperimentConfig& config, const std::filesystem::path& out_dir) {
    if (records.empty() || summary.cells.empty()) {
        throw ExperimentError("no replication records to report");
    }
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());
    }

    const auto csv_path = out_dir / "replications.csv";
    {
        auto out = open_output(csv_path);
        write_replications_csv(out, records);
        check_written(out, csv_path);
    }
    const auto summary_path = out_dir / "summary.json";
    {
        auto out = open_output(summary_path);
        out << summary_to_json(summary, config).dump(2) << '\n';
        check_written(out, summary_path);
    }
    const auto laws = candidate_laws(config.kernel.make(), config.params.k);
    for (const auto& c : summary.cells) {
        const auto qq_path = out_dir / ("qq_" + c.estimator + "_" + format_double(c.T) + ".csv");
        auto out = open_output(qq_path);
        // theoretical quantiles of the first candidate law, or of N(0, sample variance)
        double sd = std::sqrt(c.variance);
        const auto it = laws.find(c.family);
        if (it != laws.end() && !it->second.empty()) {
            sd = std::sqrt(it->second.front().variance);
        }
        out << "p,theoretical,empirical\n";
        const double m = static_cast<double>(c.sorted_errors.size());
        for (std::size_t i = 0; i < c.sorted_errors.size(); ++i) {
            const double p = (static_cast<double>(i) + 0.5) / m;
            out << format_double(p) << ',' << format_double(sd * normal_quantile(p)) << ','
                << format_double(c.sorted_errors[i]) << '\n';
        }
        check_written(out, qq_path);
    }
}

}  // namespace gnv
