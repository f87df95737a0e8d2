#pragma once

#include "grdmm/cluster.hpp"
#include "grdmm/metrics.hpp"
#include "grdmm/rmfe.hpp"

namespace grdmm {

// One batch of n matrix multiplications packed through an (n, m)-RMFE into a
// single EP session over GR_m.
struct BatchSession {
  RmfeScheme rmfe;
  EpParams ep;
  std::size_t t = 0, r = 0, s = 0;
  Metrics metrics;
};

BatchSession make_batch_session(RmfeScheme rmfe, std::size_t u, std::size_t v, std::size_t w,
                                std::size_t workers, std::size_t t, std::size_t r, std::size_t s);

// One full EP round over the session ring: encode, simulate, decode from the
// first R arrivals. Counts wire traffic in base-ring elements (one session
// element = session_width / base_width of them) and accumulates phase
// timings into `metrics`.
Matrix run_ep_session(const Matrix& a, const Matrix& b, const EpParams& params, const Cluster& cluster,
                      std::size_t base_width, Metrics& metrics);

// result k = A_k * B_k; pack with phi, one EP session, unpack with psi.
std::vector<Matrix> batch_multiply(std::span<const Matrix> as, std::span<const Matrix> bs,
                                   BatchSession& session, const Cluster& cluster);

}  // namespace grdmm
