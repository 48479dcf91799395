#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nlr/metrics.hpp"

namespace nlr::bench {

/// One experiment section of a bench config.
struct ExperimentSpec {
    std::string name;
    enum class Kind { svd, inv } kind = Kind::svd;
    std::string family = "near_low_rank";  // near_low_rank | file
    std::filesystem::path path;            // family = file
    index_t m = 0, n = 0, r = 0;
    double tail = 0.0;
    std::vector<double> eps_list;
    index_t block = 32;
    std::vector<double> lambdas;  // inv experiments
    std::vector<std::string> methods;
    index_t trials = 1;
    std::uint64_t seed = 0;
    index_t ell = 0;          // RSVD fixed rank; 0 derives it from ell_frac
    double ell_frac = 0.30;   // RSVD initial-guess fraction of min(m, n)
    index_t probes = 10;      // ARRF window size
    double arrf_tol_rel = 0;  // ARRF tolerance / ||A||_F; 0 means sqrt(eps)
};

struct BenchConfig {
    std::vector<ExperimentSpec> experiments;
    index_t threads = 1;
};

/// Flat key-value text config with one [section] per experiment; see the
/// README for the grammar. Parse failures carry line diagnostics.
BenchConfig parse_bench_config(const std::filesystem::path& path);
BenchConfig parse_bench_config_text(const std::string& text, const std::string& origin);

struct BenchRecord {
    std::string method;
    index_t m = 0, n = 0;
    double eps = 0.0;
    index_t block = 0;
    std::uint64_t seed = 0;  ///< per-trial method stream id
    index_t k_detected = 0;
    ErrorReport report;
    double wall_seconds = 0.0;
    std::uint64_t flop_proxy = 0;
};

/// Runs every (method, instance, seed) cell. Instances are shared across the
/// eps grid and the method list of a trial, so per-seed comparisons are
/// paired; records come back in canonical config order regardless of the
/// number of worker threads. Timing and the flop proxy cover the method call
/// only; generation and oracles are excluded.
std::vector<BenchRecord> bench_run(const BenchConfig& config);

/// Fixed-schema records CSV (header row, one record per line).
void write_records_csv(const std::filesystem::path& path,
                       const std::vector<BenchRecord>& records);

/// Aggregated means: <stem>.svd-summary.csv, <stem>.inv-summary.csv and
/// <stem>.timing.csv next to the records file (empty kinds are skipped).
void write_aggregates(const std::filesystem::path& records_path, const BenchConfig& config,
                      const std::vector<BenchRecord>& records);

}  // namespace nlr::bench
