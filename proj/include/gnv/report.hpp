#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include <json.hpp>

#include "gnv/format.hpp"
#include "gnv/mc.hpp"
#include "gnv/sampler.hpp"
#include "gnv/vasicek.hpp"

namespace gnv {

/// `t,G` one row per grid point.
void write_path_csv(std::ostream& out, const GaussianPath& g);
/// `t,G,X` one row per grid point.
void write_path_csv(std::ostream& out, const GaussianPath& g, const VasicekPath& x);

/// Path read back from a CSV with header `t,G`, `t,X` or `t,G,X` (any order after t).
struct PathTable {
    Grid grid;
    std::optional<std::vector<double>> G;
    std::optional<std::vector<double>> X;
};

/// Rejects non-uniform or non-zero-based time columns with ShapeError.
PathTable read_path_csv(std::istream& in);
PathTable read_path_csv(const std::filesystem::path& path);

inline constexpr const char* kReplicationsHeader =
    "index,T,seed,mu_hat,k_hat,mu_ls,k_ls,mode,e_mu,e_k,e_mu_ls,e_k_ls";

/// One row per (record, mode), records in (T, index) order.
void write_replications_csv(std::ostream& out, const std::vector<ReplicationRecord>& records);

/// Inverse of write_replications_csv. Horizons are matched to config.T_list; modes must match
/// config.modes in order.
std::vector<ReplicationRecord> read_replications_csv(std::istream& in, const ExperimentConfig& config);
std::vector<ReplicationRecord> read_replications_csv(const std::filesystem::path& path,
                                                     const ExperimentConfig& config);

nlohmann::json summary_to_json(const SummaryStats& summary, const ExperimentConfig& config);

/// Writes replications.csv, summary.json and qq_<estimator>_<T>.csv into out_dir. Empty input
/// throws before any file is created.
void emit_report(const SummaryStats& summary, const std::vector<ReplicationRecord>& records,
                 const ExperimentConfig& config, const std::filesystem::path& out_dir);

}  // namespace gnv
