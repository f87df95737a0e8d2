#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "grdmm/ring.hpp"

namespace grdmm {

// One experiment run. Element counts are exact and in base-ring units: one
// GR_m element counts as m base elements. Download covers only the
// responses consumed by decoding; workers outside the recovery set
// contribute nothing.
struct Metrics {
  std::string scheme;
  u64 upload_base_elements = 0;
  u64 download_base_elements = 0;
  double encode_seconds = 0.0;
  double decode_seconds = 0.0;
  std::vector<std::size_t> worker_ids;  // responding workers, arrival order
  std::vector<double> worker_seconds;   // compute time per responding worker
  std::size_t recovery_threshold = 0;
  std::size_t responding_workers = 0;
};

// Exact fraction; element counts divided by a batch size need not stay
// integral.
struct Rational {
  u64 num = 0;
  u64 den = 1;

  static Rational of(u64 num, u64 den) {
    u64 g = std::gcd(num, den);
    return {num / g, den / g};
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

struct AmortizedReport {
  Rational upload_base_elements;
  Rational download_base_elements;
  double encode_seconds = 0.0;
  double decode_seconds = 0.0;
};

// Per-multiplication costs: totals divided by the batch size.
AmortizedReport amortized_report(const Metrics& metrics, std::size_t n);

// Accumulates counts and phase timings of `src` into `dst`; worker stats and
// the threshold come from the most recent session.
void merge_into(Metrics& dst, const Metrics& src);

}  // namespace grdmm
