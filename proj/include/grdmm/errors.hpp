#pragma once

#include <stdexcept>
#include <string>

namespace grdmm {

enum class Errc {
  not_prime,
  word_overflow,
  params_mismatch,
  non_unit,
  count_too_large,
  residue_field_too_large,
  non_exceptional_points,
  length_mismatch,
  width_too_large,
  degree_too_small,
  tower_mismatch,
  shape_mismatch,
  indivisible_dimensions,
  threshold_exceeds_workers,
  insufficient_responses,
  duplicate_worker,
  preset_conflict,
  scheme_mismatch,
  batch_length_mismatch,
  non_base_result,
  verification_failed,
  io_error,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace grdmm
