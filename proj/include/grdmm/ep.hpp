#pragma once

#include <optional>

#include "grdmm/matrix.hpp"
#include "grdmm/poly.hpp"

namespace grdmm {

// R = uvw + w - 1, the degree of h = f*g plus one.
inline std::size_t recovery_threshold(std::size_t u, std::size_t v, std::size_t w) {
  return u * v * w + w - 1;
}

enum class PresetKind { polynomial, matdot, entangled };

struct PartitionShape {
  std::size_t u, v, w;
};

// Polynomial codes force w = 1, MatDot codes force u = v = 1; passing a
// conflicting explicit value raises PresetConflict.
PartitionShape preset(PresetKind kind, std::optional<std::size_t> u, std::optional<std::size_t> v,
                      std::optional<std::size_t> w);

// Entangled polynomial code parameters over an extension ring: the N
// evaluation points are the first N canonical exceptional elements.
struct EpParams {
  std::size_t u = 1, v = 1, w = 1;
  std::size_t workers = 0;
  RingHandle ring;
  std::vector<Elem> eval_points;

  std::size_t threshold() const { return recovery_threshold(u, v, w); }
};

EpParams make_ep_params(const RingHandle& ring, std::size_t u, std::size_t v, std::size_t w,
                        std::size_t workers);

// Contiguous block grid, row-major; row_blocks | rows and col_blocks | cols.
std::vector<Matrix> partition(const Matrix& m, std::size_t row_blocks, std::size_t col_blocks);
Matrix assemble(std::span<const Matrix> blocks, std::size_t row_blocks, std::size_t col_blocks);

struct WorkerTask {
  std::size_t worker_id = 0;
  Matrix a_share;  // f(alpha_id), (t/u) x (r/w)
  Matrix b_share;  // g(alpha_id), (r/w) x (s/v)
};

struct WorkerResponse {
  std::size_t worker_id = 0;
  Matrix product;  // h(alpha_id), (t/u) x (s/v)
  double latency_seconds = 0.0;
  double compute_seconds = 0.0;
};

// Evaluates f(x) = sum A_ij x^{(i-1)w + j-1} and
// g(x) = sum B_kl x^{w-k + (l-1)uw} at the N worker points.
std::vector<WorkerTask> encode(const Matrix& a, const Matrix& b, const EpParams& params);

WorkerResponse worker_multiply(const WorkerTask& task);

struct Dims {
  std::size_t t, r, s;
};

// Interpolates the degree R-1 matrix polynomial h from the R responses with
// the smallest worker ids and extracts block (i, l) from the coefficient of
// degree (i-1)w + (w-1) + (l-1)uw.
Matrix decode(std::span<const WorkerResponse> responses, const EpParams& params, Dims dims);

// Wire format: header (worker_id, rows, cols as little-endian u64) per
// matrix, elements row-major in the ring_core element format. A task
// serializes its two shares back to back.
std::vector<std::uint8_t> serialize_task(const WorkerTask& task);
std::vector<std::uint8_t> serialize_response(const WorkerResponse& response);
WorkerTask parse_task(const RingHandle& ring, std::span<const std::uint8_t> in);
WorkerResponse parse_response(const RingHandle& ring, std::span<const std::uint8_t> in);

}  // namespace grdmm
