#pragma once

#include "grdmm/ep.hpp"

namespace grdmm {

// Simulated worker pool: per-worker latency is base plus exponential jitter,
// and a worker fails (never responds) with the given probability. Fully
// deterministic for a fixed seed.
struct Cluster {
  std::size_t workers = 0;
  double base_latency_seconds = 0.0;
  double jitter_mean_seconds = 0.0;
  double failure_prob = 0.0;
  u64 seed = 0;
};

// Runs every task, drops failed workers, and delivers the surviving
// responses in latency order.
std::vector<WorkerResponse> simulate(std::span<const WorkerTask> tasks, const Cluster& cluster);

}  // namespace grdmm
