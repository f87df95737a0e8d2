#include "grdmm/single.hpp"

#include <chrono>
#include <cmath>

namespace grdmm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Matrix embed_matrix(const RingHandle& ext, const Matrix& base_mat) {
  Matrix out(ext, base_mat.rows(), base_mat.cols());
  for (std::size_t i = 0; i < base_mat.rows(); ++i)
    for (std::size_t j = 0; j < base_mat.cols(); ++j) out.set(i, j, ext->embed(base_mat.get(i, j)));
  return out;
}

Matrix project_matrix(const RingHandle& base, const Matrix& ext_mat) {
  const Ring& ext = *ext_mat.ring();
  Matrix out(base, ext_mat.rows(), ext_mat.cols());
  for (std::size_t i = 0; i < ext_mat.rows(); ++i)
    for (std::size_t j = 0; j < ext_mat.cols(); ++j) {
      std::vector<Elem> chunks = ext.coeff_view(ext_mat.get(i, j));
      for (std::size_t k = 1; k < chunks.size(); ++k)
        if (!base->is_zero(chunks[k]))
          fail(Errc::non_base_result, "decoded entry has nonzero higher tower coefficients");
      out.set(i, j, chunks[0]);
    }
  return out;
}

}  // namespace

std::size_t default_extension_degree(const RingHandle& base, std::size_t workers) {
  // ceil(log_p(N) / d)
  std::size_t log_p = 0;
  u64 acc = 1;
  while (acc < workers) {
    acc *= base->p();
    ++log_p;
  }
  std::size_t d = base->total_degree();
  return std::max<std::size_t>((log_p + d - 1) / d, 1);
}

CostProfile cost_profile(const SingleConfig& c, std::size_t t, std::size_t r, std::size_t s) {
  const u64 n = c.n, u = c.u, v = c.v, w = c.w, workers = c.workers, m = c.m;
  const u64 threshold = recovery_threshold(u, v, w);
  CostProfile p;
  switch (c.scheme) {
    case SingleScheme::plain:
      p.upload_base_elements = (t * r / (u * w) + r * s / (w * v)) * workers * m;
      p.download_base_elements = t * s / (u * v) * threshold * m;
      break;
    case SingleScheme::rmfe_i:
      // session dims (t, r/n, s)
      p.upload_base_elements = (t * (r / n) / (u * w) + (r / n) * s / (w * v)) * workers * m;
      p.download_base_elements = t * s / (u * v) * threshold * m;
      break;
    case SingleScheme::rmfe_ii:
      if (c.levels == 1) {
        // session dims (t, r, s/n)
        p.upload_base_elements = (t * r / (u * w) + r * (s / n) / (w * v)) * workers * m;
        p.download_base_elements = t * (s / n) / (u * v) * threshold * m;
      } else {
        // session dims (t/n, r, s/n)
        p.upload_base_elements = ((t / n) * r / (u * w) + r * (s / n) / (w * v)) * workers * m;
        p.download_base_elements = (t / n) * (s / n) / (u * v) * threshold * m;
      }
      break;
  }
  return p;
}

Matrix plain_ep(const Matrix& a, const Matrix& b, const SingleConfig& config, const Cluster& cluster,
                Metrics& metrics) {
  metrics.scheme = "plain";
  const RingHandle& base = config.base;
  RingHandle ext = base->extend(config.m);
  EpParams params = make_ep_params(ext, config.u, config.v, config.w, config.workers);

  auto t0 = Clock::now();
  Matrix ea = embed_matrix(ext, a);
  Matrix eb = embed_matrix(ext, b);
  metrics.encode_seconds += seconds_since(t0);

  Matrix ec = run_ep_session(ea, eb, params, cluster, base->width(), metrics);

  auto t1 = Clock::now();
  Matrix c = project_matrix(base, ec);
  metrics.decode_seconds += seconds_since(t1);
  return c;
}

Matrix single_multiply_I(const Matrix& a, const Matrix& b, const SingleConfig& config,
                         const Cluster& cluster, Metrics& metrics) {
  metrics.scheme = "rmfe_i";
  const std::size_t n = config.n;
  if (a.cols() % n) fail(Errc::indivisible_dimensions, "split width must divide r");
  const std::size_t rn = a.cols() / n;
  if (config.w != 0 && rn % config.w)
    fail(Errc::indivisible_dimensions, "w must divide r/n");

  RmfeScheme scheme = RmfeScheme::build(config.base, n, config.m);
  BatchSession session =
      make_batch_session(scheme, config.u, config.v, config.w, config.workers, a.rows(), rn, b.cols());

  std::vector<Matrix> as, bs;
  as.reserve(n);
  bs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    as.push_back(a.block(0, i * rn, a.rows(), rn));
    bs.push_back(b.block(i * rn, 0, rn, b.cols()));
  }

  if (config.fused_unpack_sum) {
    auto t0 = Clock::now();
    Matrix packed_a = scheme.phi_matrix(as);
    Matrix packed_b = scheme.phi_matrix(bs);
    session.metrics.encode_seconds += seconds_since(t0);
    Matrix packed_c =
        run_ep_session(packed_a, packed_b, session.ep, cluster, scheme.base()->width(), session.metrics);
    auto t1 = Clock::now();
    Matrix c = scheme.psi_matrix_sum(packed_c);
    session.metrics.decode_seconds += seconds_since(t1);
    merge_into(metrics, session.metrics);
    return c;
  }

  std::vector<Matrix> products = batch_multiply(as, bs, session, cluster);
  auto t0 = Clock::now();
  Matrix c = products[0];
  for (std::size_t i = 1; i < n; ++i) c = mat_add(c, products[i]);
  session.metrics.decode_seconds += seconds_since(t0);
  merge_into(metrics, session.metrics);
  return c;
}

TwoLevelRmfe make_two_level(const RingHandle& base, std::size_t n, std::size_t m1, std::size_t m2) {
  RmfeScheme first = RmfeScheme::build(base, n, m1);
  RmfeScheme second = RmfeScheme::build(first.ext(), n, m2);
  return {std::move(first), std::move(second)};
}

TwoLevelRmfe make_two_level(RmfeScheme first, RmfeScheme second) {
  if (!second.base()->same_ring(*first.ext()))
    fail(Errc::scheme_mismatch, "the first map's extension ring must be the second map's base ring");
  return {std::move(first), std::move(second)};
}

Matrix single_multiply_II(const Matrix& a, const Matrix& b, const SingleConfig& config,
                          const Cluster& cluster, Metrics& metrics) {
  metrics.scheme = "rmfe_ii";
  const std::size_t n = config.n;
  if (b.cols() % n) fail(Errc::indivisible_dimensions, "split width must divide s");
  const std::size_t sn = b.cols() / n;

  if (config.levels == 1) {
    // small-m mode: A is not split; pack n copies of A against the column
    // blocks of B through a single RMFE
    RmfeScheme scheme = RmfeScheme::build(config.base, n, config.m);
    BatchSession session =
        make_batch_session(scheme, config.u, config.v, config.w, config.workers, a.rows(), a.cols(), sn);
    std::vector<Matrix> as(n, a), bs;
    bs.reserve(n);
    for (std::size_t j = 0; j < n; ++j) bs.push_back(b.block(0, j * sn, b.rows(), sn));
    std::vector<Matrix> parts = batch_multiply(as, bs, session, cluster);
    auto t0 = Clock::now();
    Matrix c(config.base, a.rows(), b.cols());
    for (std::size_t j = 0; j < n; ++j) c.paste(0, j * sn, parts[j]);
    session.metrics.decode_seconds += seconds_since(t0);
    merge_into(metrics, session.metrics);
    return c;
  }

  // two-level mode: split A by rows as well and stack two RMFEs
  if (a.rows() % n) fail(Errc::indivisible_dimensions, "split width must divide t");
  const std::size_t tn = a.rows() / n;
  std::size_t m1 = config.m1, m2 = config.m2;
  if (m1 == 0 && m2 == 0) {
    std::size_t root = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(config.m))));
    if (root * root != config.m)
      fail(Errc::scheme_mismatch, "two-level packing needs explicit m1, m2 when m is not a square");
    m1 = m2 = root;
  }
  if (m1 * m2 != config.m) fail(Errc::scheme_mismatch, "m1 * m2 must equal m");
  TwoLevelRmfe maps = make_two_level(config.base, n, m1, m2);

  Metrics inner;
  inner.scheme = metrics.scheme;
  auto t0 = Clock::now();
  std::vector<Matrix> bs;
  bs.reserve(n);
  for (std::size_t j = 0; j < n; ++j) bs.push_back(b.block(0, j * sn, b.rows(), sn));
  Matrix packed_b1 = maps.first.phi_matrix(bs);  // r x s/n over GR_m1
  std::vector<Matrix> packed_as1;
  packed_as1.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Matrix> copies(n, a.block(i * tn, 0, tn, a.cols()));
    packed_as1.push_back(maps.first.phi_matrix(copies));  // t/n x r over GR_m1
  }
  inner.encode_seconds += seconds_since(t0);

  BatchSession session = make_batch_session(maps.second, config.u, config.v, config.w, config.workers,
                                            tn, a.cols(), sn);
  std::vector<Matrix> second_b(n, packed_b1);
  std::vector<Matrix> mids = batch_multiply(packed_as1, second_b, session, cluster);
  // the inner session counts in GR_m1 units; convert to base-ring units
  session.metrics.upload_base_elements *= m1;
  session.metrics.download_base_elements *= m1;

  auto t1 = Clock::now();
  Matrix c(config.base, a.rows(), b.cols());
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Matrix> row_parts = maps.first.psi_matrix(mids[i]);  // {A_i B_1, ..., A_i B_n}
    for (std::size_t j = 0; j < n; ++j) c.paste(i * tn, j * sn, row_parts[j]);
  }
  inner.decode_seconds += seconds_since(t1);
  merge_into(inner, session.metrics);
  merge_into(metrics, inner);
  return c;
}

}  // namespace grdmm
