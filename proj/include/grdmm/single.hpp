#pragma once

#include "grdmm/batch.hpp"

namespace grdmm {

enum class SingleScheme { plain, rmfe_i, rmfe_ii };

// Configuration for one single-multiplication run. m is the extension degree
// of the session ring; n the split width of the RMFE variants. rmfe_ii
// levels: 1 packs only the column split of B through one RMFE (the small-m
// mode), 2 splits both sides and stacks two RMFEs with m1 * m2 = m.
struct SingleConfig {
  SingleScheme scheme = SingleScheme::plain;
  RingHandle base;
  std::size_t workers = 0;
  std::size_t m = 0;
  std::size_t n = 2;
  std::size_t u = 1, v = 1, w = 1;
  int levels = 1;
  std::size_t m1 = 0, m2 = 0;
  // EP-RMFE-I only: fuse the final unpack-and-sum into one pass; output is
  // bit-identical to the unpack-then-sum default.
  bool fused_unpack_sum = false;
};

// Default extension degree ceil(log_p(N) / d).
std::size_t default_extension_degree(const RingHandle& base, std::size_t workers);

struct CostProfile {
  u64 upload_base_elements = 0;
  u64 download_base_elements = 0;
};

// Closed-form wire counts for the configured scheme; the simulator's measured
// counts match these exactly.
CostProfile cost_profile(const SingleConfig& config, std::size_t t, std::size_t r, std::size_t s);

// Baseline: embed into GR_m, one EP session, project back. Decoded entries
// must have no higher tower coefficients (NonBaseResult otherwise).
Matrix plain_ep(const Matrix& a, const Matrix& b, const SingleConfig& config, const Cluster& cluster,
                Metrics& metrics);

// MatDot-style split: A into n column blocks, B into n row blocks, one batch
// session, then sum the n products.
Matrix single_multiply_I(const Matrix& a, const Matrix& b, const SingleConfig& config,
                         const Cluster& cluster, Metrics& metrics);

// Polynomial-style split: B into n column blocks (and A into n row blocks at
// two levels), RMFE packing, one EP session, unpack into the block grid.
Matrix single_multiply_II(const Matrix& a, const Matrix& b, const SingleConfig& config,
                          const Cluster& cluster, Metrics& metrics);

// The two stacked RMFEs of the two-level EP-RMFE-II. The first map's
// extension ring must be the second map's base ring.
struct TwoLevelRmfe {
  RmfeScheme first;
  RmfeScheme second;
};
TwoLevelRmfe make_two_level(const RingHandle& base, std::size_t n, std::size_t m1, std::size_t m2);
TwoLevelRmfe make_two_level(RmfeScheme first, RmfeScheme second);  // validates the tower

}  // namespace grdmm
