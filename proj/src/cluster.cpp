#include "grdmm/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace grdmm {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::vector<WorkerResponse> simulate(std::span<const WorkerTask> tasks, const Cluster& cluster) {
  if (tasks.size() != cluster.workers) fail(Errc::params_mismatch, "task count must equal the worker count");
  std::mt19937_64 rng(cluster.seed);
  std::vector<WorkerResponse> responses;
  responses.reserve(tasks.size());
  for (const WorkerTask& task : tasks) {
    // draw both variates unconditionally so the stream does not depend on
    // failure outcomes
    double u_fail = uniform01(rng);
    double u_jitter = uniform01(rng);
    bool failed = u_fail < cluster.failure_prob;
    double jitter =
        cluster.jitter_mean_seconds > 0 ? -cluster.jitter_mean_seconds * std::log(1.0 - u_jitter) : 0.0;
    if (failed) continue;
    WorkerResponse r = worker_multiply(task);
    r.latency_seconds = cluster.base_latency_seconds + jitter;
    responses.push_back(std::move(r));
  }
  std::stable_sort(responses.begin(), responses.end(), [](const WorkerResponse& a, const WorkerResponse& b) {
    return a.latency_seconds != b.latency_seconds ? a.latency_seconds < b.latency_seconds
                                                  : a.worker_id < b.worker_id;
  });
  return responses;
}

}  // namespace grdmm
