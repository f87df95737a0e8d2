#pragma once

#include <json.hpp>
#include <optional>
#include <string>

#include "grdmm/single.hpp"

namespace grdmm {

// Matrix file: magic "GRMX", then p, e, d, rows, cols as little-endian u64,
// followed by row-major elements in the ring element format. Base rings
// only (no tower levels in the header).
void write_matrix_file(const std::string& path, const Matrix& m);
Matrix read_matrix_file(const std::string& path);

enum class RunScheme { plain, rmfe_i, rmfe_ii, batch, matdot, poly };

std::string scheme_name(RunScheme s);

struct RunConfig {
  RunScheme scheme = RunScheme::plain;
  u64 p = 2, e = 64, d = 1;
  std::size_t t = 0, r = 0, s = 0;
  std::optional<std::size_t> u, v, w;
  std::size_t workers = 0;
  std::optional<std::size_t> m;  // default ceil(log_p(N)/d)
  std::size_t n = 2;             // RMFE split width
  int levels = 1;
  std::size_t batch_size = 2;
  double straggler_prob = 0.0;
  double jitter_seconds = 0.0;
  u64 seed = 0;
  std::size_t repeat = 1;
  bool verify = false;
  std::string in_a, in_b;  // empty: seeded random inputs
  std::string out_path;    // empty: stdout
};

struct RunResult {
  nlohmann::json metrics;
  bool verified_ok = true;
};

// Runs the configured scheme end to end, averaging metrics over the repeats
// (counts stay exact, timings are arithmetic means). Verification failures
// set verified_ok and the caller decides the exit code.
RunResult run_experiment(const RunConfig& config);

// Zero-pads (t, r, s) up to the least multiples the scheme's partition
// requires, runs it, and truncates the product back to the original shape.
Matrix pad_and_multiply(const Matrix& a, const Matrix& b, const SingleConfig& config,
                        const Cluster& cluster, Metrics& metrics);

u64 fnv1a(std::span<const std::uint8_t> bytes);

}  // namespace grdmm
