#include "grdmm/batch.hpp"

#include <chrono>

namespace grdmm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

}  // namespace

BatchSession make_batch_session(RmfeScheme rmfe, std::size_t u, std::size_t v, std::size_t w,
                                std::size_t workers, std::size_t t, std::size_t r, std::size_t s) {
  if (t % u || s % v || r % w) fail(Errc::indivisible_dimensions, "u, v, w must divide t, s, r");
  BatchSession session{std::move(rmfe), {}, t, r, s, {}};
  session.ep = make_ep_params(session.rmfe.ext(), u, v, w, workers);
  session.metrics.scheme = "batch";
  session.metrics.recovery_threshold = session.ep.threshold();
  return session;
}

Matrix run_ep_session(const Matrix& a, const Matrix& b, const EpParams& params, const Cluster& cluster,
                      std::size_t base_width, Metrics& metrics) {
  const std::size_t per_base = params.ring->width() / base_width;

  auto t0 = Clock::now();
  std::vector<WorkerTask> tasks = encode(a, b, params);
  metrics.encode_seconds += seconds_since(t0);
  for (const WorkerTask& task : tasks)
    metrics.upload_base_elements += (task.a_share.element_count() + task.b_share.element_count()) * per_base;

  std::vector<WorkerResponse> responses = simulate(tasks, cluster);
  metrics.responding_workers = responses.size();
  metrics.worker_ids.clear();
  metrics.worker_seconds.clear();
  for (const WorkerResponse& r : responses) {
    metrics.worker_ids.push_back(r.worker_id);
    metrics.worker_seconds.push_back(r.compute_seconds);
  }

  // the master stops listening at the R-th arrival
  std::size_t used = std::min<std::size_t>(params.threshold(), responses.size());
  std::span<const WorkerResponse> first(responses.data(), used);
  for (const WorkerResponse& r : first) metrics.download_base_elements += r.product.element_count() * per_base;

  auto t1 = Clock::now();
  Matrix c = decode(first, params, {a.rows(), a.cols(), b.cols()});
  metrics.decode_seconds += seconds_since(t1);
  metrics.recovery_threshold = params.threshold();
  return c;
}

std::vector<Matrix> batch_multiply(std::span<const Matrix> as, std::span<const Matrix> bs,
                                   BatchSession& session, const Cluster& cluster) {
  const std::size_t n = session.rmfe.n();
  if (as.size() != n || bs.size() != n)
    fail(Errc::batch_length_mismatch, "batch size must equal the scheme's pack width");
  for (const Matrix& m : as)
    if (m.rows() != session.t || m.cols() != session.r) fail(Errc::shape_mismatch, "A shapes must be uniform");
  for (const Matrix& m : bs)
    if (m.rows() != session.r || m.cols() != session.s) fail(Errc::shape_mismatch, "B shapes must be uniform");

  auto t0 = Clock::now();
  Matrix packed_a = session.rmfe.phi_matrix(as);
  Matrix packed_b = session.rmfe.phi_matrix(bs);
  session.metrics.encode_seconds += seconds_since(t0);

  Matrix packed_c = run_ep_session(packed_a, packed_b, session.ep, cluster, session.rmfe.base()->width(),
                                   session.metrics);

  auto t1 = Clock::now();
  std::vector<Matrix> out = session.rmfe.psi_matrix(packed_c);
  session.metrics.decode_seconds += seconds_since(t1);
  return out;
}

void merge_into(Metrics& dst, const Metrics& src) {
  dst.upload_base_elements += src.upload_base_elements;
  dst.download_base_elements += src.download_base_elements;
  dst.encode_seconds += src.encode_seconds;
  dst.decode_seconds += src.decode_seconds;
  dst.worker_ids = src.worker_ids;
  dst.worker_seconds = src.worker_seconds;
  dst.recovery_threshold = src.recovery_threshold;
  dst.responding_workers = src.responding_workers;
}

AmortizedReport amortized_report(const Metrics& metrics, std::size_t n) {
  AmortizedReport r;
  r.upload_base_elements = Rational::of(metrics.upload_base_elements, n);
  r.download_base_elements = Rational::of(metrics.download_base_elements, n);
  r.encode_seconds = metrics.encode_seconds / static_cast<double>(n);
  r.decode_seconds = metrics.decode_seconds / static_cast<double>(n);
  return r;
}

}  // namespace grdmm
