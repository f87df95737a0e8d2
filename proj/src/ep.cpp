#include "grdmm/ep.hpp"

#include <algorithm>
#include <chrono>
#include <set>

namespace grdmm {

PartitionShape preset(PresetKind kind, std::optional<std::size_t> u, std::optional<std::size_t> v,
                      std::optional<std::size_t> w) {
  switch (kind) {
    case PresetKind::polynomial:
      if (w && *w != 1) fail(Errc::preset_conflict, "polynomial codes require w = 1");
      return {u.value_or(1), v.value_or(1), 1};
    case PresetKind::matdot:
      if (u && *u != 1) fail(Errc::preset_conflict, "matdot codes require u = 1");
      if (v && *v != 1) fail(Errc::preset_conflict, "matdot codes require v = 1");
      return {1, 1, w.value_or(1)};
    case PresetKind::entangled:
      return {u.value_or(1), v.value_or(1), w.value_or(1)};
  }
  fail(Errc::preset_conflict, "unknown preset");
}

EpParams make_ep_params(const RingHandle& ring, std::size_t u, std::size_t v, std::size_t w,
                        std::size_t workers) {
  if (u < 1 || v < 1 || w < 1) fail(Errc::params_mismatch, "partition counts must be positive");
  EpParams p;
  p.u = u;
  p.v = v;
  p.w = w;
  p.workers = workers;
  p.ring = ring;
  if (p.threshold() > workers)
    fail(Errc::threshold_exceeds_workers, "recovery threshold exceeds the worker count");
  p.eval_points = exceptional_set(ring, workers).elements;
  return p;
}

std::vector<Matrix> partition(const Matrix& m, std::size_t row_blocks, std::size_t col_blocks) {
  if (row_blocks == 0 || col_blocks == 0 || m.rows() % row_blocks || m.cols() % col_blocks)
    fail(Errc::indivisible_dimensions, "block counts must divide the matrix dimensions");
  std::size_t br = m.rows() / row_blocks, bc = m.cols() / col_blocks;
  std::vector<Matrix> out;
  out.reserve(row_blocks * col_blocks);
  for (std::size_t i = 0; i < row_blocks; ++i)
    for (std::size_t j = 0; j < col_blocks; ++j) out.push_back(m.block(i * br, j * bc, br, bc));
  return out;
}

Matrix assemble(std::span<const Matrix> blocks, std::size_t row_blocks, std::size_t col_blocks) {
  if (blocks.size() != row_blocks * col_blocks) fail(Errc::shape_mismatch, "block count mismatch");
  std::size_t br = blocks[0].rows(), bc = blocks[0].cols();
  Matrix out(blocks[0].ring(), row_blocks * br, col_blocks * bc);
  for (std::size_t i = 0; i < row_blocks; ++i)
    for (std::size_t j = 0; j < col_blocks; ++j) out.paste(i * br, j * bc, blocks[i * col_blocks + j]);
  return out;
}

std::vector<WorkerTask> encode(const Matrix& a, const Matrix& b, const EpParams& params) {
  if (!a.ring()->same_ring(*params.ring) || !b.ring()->same_ring(*params.ring))
    fail(Errc::params_mismatch, "inputs must live over the code's ring");
  if (a.cols() != b.rows()) fail(Errc::shape_mismatch, "inner dimensions do not match");
  const std::size_t u = params.u, v = params.v, w = params.w;
  if (a.rows() % u || a.cols() % w || b.cols() % v)
    fail(Errc::indivisible_dimensions, "u, w, v must divide t, r, s");

  std::vector<Matrix> ab = partition(a, u, w);
  std::vector<Matrix> bb = partition(b, w, v);

  // f(x) = sum_{i,j} A_ij x^{(i-1)w + j-1}: every exponent in [0, uw) occurs
  MatrixPoly f(params.ring, a.rows() / u, a.cols() / w);
  for (std::size_t k = 0; k < u * w; ++k) f.push_coeff(Matrix(params.ring, a.rows() / u, a.cols() / w));
  for (std::size_t i = 0; i < u; ++i)
    for (std::size_t j = 0; j < w; ++j) f.coeff_ref(i * w + j) = ab[i * w + j];
  f.normalize();

  // g(x) = sum_{k,l} B_kl x^{w-k + (l-1)uw} with 1-based k, l
  MatrixPoly g(params.ring, b.rows() / w, b.cols() / v);
  std::size_t glen = (v - 1) * u * w + w;
  for (std::size_t k = 0; k < glen; ++k) g.push_coeff(Matrix(params.ring, b.rows() / w, b.cols() / v));
  for (std::size_t k = 0; k < w; ++k)
    for (std::size_t l = 0; l < v; ++l) g.coeff_ref(w - 1 - k + l * u * w) = bb[k * v + l];
  g.normalize();

  auto f_vals = eval_many(f, params.eval_points, EvalMode::fast);
  auto g_vals = eval_many(g, params.eval_points, EvalMode::fast);
  std::vector<WorkerTask> tasks;
  tasks.reserve(params.workers);
  for (std::size_t i = 0; i < params.workers; ++i)
    tasks.push_back({i, std::move(f_vals[i]), std::move(g_vals[i])});
  return tasks;
}

WorkerResponse worker_multiply(const WorkerTask& task) {
  auto t0 = std::chrono::steady_clock::now();
  Matrix product = matmul(task.a_share, task.b_share);
  auto t1 = std::chrono::steady_clock::now();
  WorkerResponse r;
  r.worker_id = task.worker_id;
  r.product = std::move(product);
  r.compute_seconds = std::chrono::duration<double>(t1 - t0).count();
  return r;
}

Matrix decode(std::span<const WorkerResponse> responses, const EpParams& params, Dims dims) {
  const std::size_t u = params.u, v = params.v, w = params.w;
  const std::size_t threshold = params.threshold();
  std::set<std::size_t> ids;
  for (const auto& r : responses) {
    if (r.worker_id >= params.workers) fail(Errc::params_mismatch, "unknown worker id");
    if (!ids.insert(r.worker_id).second) fail(Errc::duplicate_worker, "duplicate worker id in responses");
  }
  if (ids.size() < threshold)
    fail(Errc::insufficient_responses, "need " + std::to_string(threshold) + " responses, got " +
                                           std::to_string(ids.size()));

  // deterministic choice: the R smallest worker ids provided
  std::vector<const WorkerResponse*> sorted;
  sorted.reserve(responses.size());
  for (const auto& r : responses) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(),
            [](const WorkerResponse* a, const WorkerResponse* b) { return a->worker_id < b->worker_id; });
  sorted.resize(threshold);

  std::vector<Elem> points;
  std::vector<Matrix> values;
  points.reserve(threshold);
  values.reserve(threshold);
  for (const WorkerResponse* r : sorted) {
    if (r->product.rows() != dims.t / u || r->product.cols() != dims.s / v)
      fail(Errc::shape_mismatch, "response block shape does not match the session");
    points.push_back(params.eval_points[r->worker_id]);
    values.push_back(r->product);
  }

  MatrixPoly h = interpolate_matrix(params.ring, points, values, pick_mode(threshold));
  std::vector<Matrix> blocks;
  blocks.reserve(u * v);
  for (std::size_t i = 0; i < u; ++i)
    for (std::size_t l = 0; l < v; ++l) blocks.push_back(h.coeff(i * w + (w - 1) + l * u * w));
  return assemble(blocks, u, v);
}

// --- wire format -------------------------------------------------------------

namespace {

void append_block(std::vector<std::uint8_t>& out, std::size_t worker_id, const Matrix& m) {
  append_u64_le(out, worker_id);
  append_u64_le(out, m.rows());
  append_u64_le(out, m.cols());
  append_matrix(out, m);
}

Matrix parse_block(const RingHandle& ring, std::span<const std::uint8_t> in, std::size_t& off,
                   std::size_t expect_id) {
  u64 id = read_u64_le(in, off);
  if (id != expect_id) fail(Errc::io_error, "worker id mismatch in serialized block");
  u64 rows = read_u64_le(in, off);
  u64 cols = read_u64_le(in, off);
  Matrix m(ring, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, parse_element(*ring, in, off));
  return m;
}

}  // namespace

std::vector<std::uint8_t> serialize_task(const WorkerTask& task) {
  std::vector<std::uint8_t> out;
  append_block(out, task.worker_id, task.a_share);
  append_block(out, task.worker_id, task.b_share);
  return out;
}

std::vector<std::uint8_t> serialize_response(const WorkerResponse& response) {
  std::vector<std::uint8_t> out;
  append_block(out, response.worker_id, response.product);
  return out;
}

WorkerTask parse_task(const RingHandle& ring, std::span<const std::uint8_t> in) {
  std::size_t off = 0;
  u64 id = read_u64_le(in, off);
  off = 0;
  WorkerTask t;
  t.worker_id = id;
  t.a_share = parse_block(ring, in, off, id);
  t.b_share = parse_block(ring, in, off, id);
  if (off != in.size()) fail(Errc::io_error, "trailing bytes after task");
  return t;
}

WorkerResponse parse_response(const RingHandle& ring, std::span<const std::uint8_t> in) {
  std::size_t off = 0;
  u64 id = read_u64_le(in, off);
  off = 0;
  WorkerResponse r;
  r.worker_id = id;
  r.product = parse_block(ring, in, off, id);
  if (off != in.size()) fail(Errc::io_error, "trailing bytes after response");
  return r;
}

}  // namespace grdmm
