// grdmm: coded distributed matrix multiplication over Galois rings.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "grdmm/sim.hpp"

using namespace grdmm;

namespace {

u64 env_seed_fallback() {
  if (const char* env = std::getenv("CDMM_SEED")) return std::strtoull(env, nullptr, 10);
  return 0;
}

std::string format_set(const Ring& ring, const std::vector<Elem>& elems) {
  std::string out = "[";
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (i) out += ", ";
    out += ring.format(elems[i]);
  }
  return out + "]";
}

int cmd_ring_info(u64 p, u64 e, u64 d, std::optional<u64> m) {
  RingHandle ring = Ring::make(p, e, d);
  std::cout << "ring: GR(" << p << "^" << e << ", " << d << ")\n";
  std::cout << "modulus: " << ring->format_modulus() << "\n";
  u64 q = ring->residue_size_capped(8);
  auto t = exceptional_set(ring, q);
  std::cout << "exceptional set prefix: " << format_set(*ring, t.elements) << "\n";
  if (m) {
    RingHandle ext = ring->extend(*m);
    std::cout << "extension: GR(" << p << "^" << e << ", " << d << "*" << *m << ")\n";
    std::cout << "extension modulus: " << ext->format_modulus() << "\n";
    u64 qe = ext->residue_size_capped(8);
    auto te = exceptional_set(ext, qe);
    std::cout << "extension exceptional set prefix: " << format_set(*ext, te.elements) << "\n";
  }
  return 0;
}

// every element of GR(p^e, d), for the exhaustive identity check
std::vector<Elem> enumerate_elements(const RingHandle& ring) {
  u64 pe = ring->characteristic();
  std::vector<Elem> out;
  std::vector<u64> words(ring->width(), 0);
  for (;;) {
    out.push_back(ring->from_words(words));
    std::size_t i = 0;
    while (i < words.size()) {
      if (++words[i] < pe) break;
      words[i] = 0;
      ++i;
    }
    if (i == words.size()) break;
  }
  return out;
}

int cmd_rmfe_check(u64 p, u64 e, u64 d, std::size_t n, std::size_t m, bool infinity, bool exhaustive,
                   std::size_t samples) {
  RingHandle base = Ring::make(p, e, d);
  RmfeScheme scheme = RmfeScheme::build(base, n, m, infinity);
  const Ring& ext = *scheme.ext();
  u64 pairs = 0, good = 0;

  auto check_pair = [&](const std::vector<Elem>& x, const std::vector<Elem>& y) {
    std::vector<Elem> expect;
    expect.reserve(n);
    for (std::size_t i = 0; i < n; ++i) expect.push_back(base->mul(x[i], y[i]));
    ++pairs;
    if (scheme.psi(ext.mul(scheme.phi(x), scheme.phi(y))) == expect) ++good;
  };

  if (exhaustive) {
    double total = 1;
    u64 ring_size = base->full_word() ? 0 : base->characteristic();
    for (std::size_t i = 0; i < base->width(); ++i) total *= static_cast<double>(ring_size);
    double vector_count = 1;
    for (std::size_t i = 0; i < n; ++i) vector_count *= total;
    if (ring_size == 0 || vector_count * vector_count > double(1 << 20)) {
      std::cerr << "exhaustive check infeasible for this ring; drop --exhaustive\n";
      return 2;
    }
    auto elems = enumerate_elements(base);
    std::vector<std::vector<Elem>> vectors{{}};
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::vector<Elem>> next;
      for (const auto& v : vectors)
        for (const auto& el : elems) {
          auto vv = v;
          vv.push_back(el);
          next.push_back(std::move(vv));
        }
      vectors = std::move(next);
    }
    for (const auto& x : vectors)
      for (const auto& y : vectors) check_pair(x, y);
  } else {
    std::mt19937_64 rng(env_seed_fallback());
    for (std::size_t trial = 0; trial < samples; ++trial) {
      std::vector<Elem> x, y;
      for (std::size_t i = 0; i < n; ++i) {
        x.push_back(base->random(rng));
        y.push_back(base->random(rng));
      }
      check_pair(x, y);
    }
  }
  std::cout << "(" << n << "," << m << ")-RMFE over GR(" << p << "^" << e << ", " << d << ")"
            << (infinity ? " with infinity" : "") << ": " << good << "/" << pairs << " pairs pass\n";
  return good == pairs ? 0 : 1;
}

int cmd_gen(u64 p, u64 e, u64 d, std::size_t rows, std::size_t cols, u64 seed, const std::string& out) {
  RingHandle ring = Ring::make(p, e, d);
  std::mt19937_64 rng(seed);
  Matrix m = Matrix::random(ring, rows, cols, rng);
  write_matrix_file(out, m);
  std::cout << "wrote " << rows << "x" << cols << " matrix over GR(" << p << "^" << e << ", " << d
            << ") to " << out << "\n";
  return 0;
}

int cmd_run(const RunConfig& rc) {
  RunResult result = run_experiment(rc);
  std::string text = result.metrics.dump(2);
  if (rc.out_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(rc.out_path);
    if (!out) fail(Errc::io_error, "cannot open " + rc.out_path);
    out << text << "\n";
  }
  if (rc.verify && !result.verified_ok) {
    std::cerr << "verification FAILED\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coded distributed matrix multiplication over Galois rings"};
  app.require_subcommand(1);

  // ring-info
  u64 ri_p = 2, ri_e = 64, ri_d = 1;
  std::optional<u64> ri_m;
  auto* ring_info = app.add_subcommand("ring-info", "print modulus and exceptional set prefix");
  ring_info->add_option("--p", ri_p)->required();
  ring_info->add_option("--e", ri_e)->required();
  ring_info->add_option("--d", ri_d)->required();
  ring_info->add_option("--m", ri_m, "also describe the degree-m extension");

  // rmfe-check
  u64 rc_p = 2, rc_e = 64, rc_d = 1;
  std::size_t rc_n = 2, rc_m = 3, rc_samples = 1000;
  bool rc_inf = false, rc_exhaustive = false;
  auto* rmfe_check = app.add_subcommand("rmfe-check", "verify the RMFE product identity");
  rmfe_check->add_option("--p", rc_p)->required();
  rmfe_check->add_option("--e", rc_e)->required();
  rmfe_check->add_option("--d", rc_d)->required();
  rmfe_check->add_option("--n", rc_n)->required();
  rmfe_check->add_option("--m", rc_m)->required();
  rmfe_check->add_flag("--infinity", rc_inf, "use the point at infinity");
  rmfe_check->add_flag("--exhaustive", rc_exhaustive, "check every input pair");
  rmfe_check->add_option("--samples", rc_samples, "random pairs when not exhaustive");

  // run
  RunConfig run_cfg;
  std::string scheme_str;
  std::size_t opt_u = 0, opt_v = 0, opt_w = 0, opt_m = 0;
  u64 seed = env_seed_fallback();
  auto* run = app.add_subcommand("run", "run one experiment and emit metrics JSON");
  run->add_option("--scheme", scheme_str, "plain|rmfe-i|rmfe-ii|batch|matdot|poly")->required();
  run->add_option("--p", run_cfg.p)->required();
  run->add_option("--e", run_cfg.e)->required();
  run->add_option("--d", run_cfg.d)->required();
  run->add_option("--t", run_cfg.t)->required();
  run->add_option("--r", run_cfg.r)->required();
  run->add_option("--s", run_cfg.s)->required();
  auto* uopt = run->add_option("--u", opt_u);
  auto* vopt = run->add_option("--v", opt_v);
  auto* wopt = run->add_option("--w", opt_w);
  run->add_option("--N", run_cfg.workers, "worker count")->required();
  auto* mopt = run->add_option("--m", opt_m, "extension degree (default ceil(log_p N / d))");
  run->add_option("--n", run_cfg.n, "RMFE split width");
  run->add_option("--levels", run_cfg.levels, "rmfe-ii packing levels (1 or 2)");
  run->add_option("--batch-size", run_cfg.batch_size, "multiplications per batch run");
  run->add_option("--straggler-prob", run_cfg.straggler_prob, "per-worker failure probability");
  run->add_option("--jitter", run_cfg.jitter_seconds, "mean of the exponential latency jitter");
  run->add_option("--seed", seed, "RNG seed (falls back to CDMM_SEED)");
  run->add_option("--repeat", run_cfg.repeat, "repetitions to average over");
  run->add_flag("--verify", run_cfg.verify, "check against the schoolbook product");
  run->add_option("--in-a", run_cfg.in_a, "matrix file for A");
  run->add_option("--in-b", run_cfg.in_b, "matrix file for B");
  run->add_option("--out", run_cfg.out_path, "metrics JSON path (default stdout)");

  // gen
  u64 g_p = 2, g_e = 64, g_d = 1, g_seed = 0;
  std::size_t g_rows = 0, g_cols = 0;
  std::string g_out;
  auto* gen = app.add_subcommand("gen", "generate a random matrix file");
  gen->add_option("--p", g_p);
  gen->add_option("--e", g_e);
  gen->add_option("--d", g_d);
  gen->add_option("--rows", g_rows)->required();
  gen->add_option("--cols", g_cols)->required();
  gen->add_option("--seed", g_seed);
  gen->add_option("--out", g_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (ring_info->parsed()) return cmd_ring_info(ri_p, ri_e, ri_d, ri_m);
    if (rmfe_check->parsed())
      return cmd_rmfe_check(rc_p, rc_e, rc_d, rc_n, rc_m, rc_inf, rc_exhaustive, rc_samples);
    if (gen->parsed()) return cmd_gen(g_p, g_e, g_d, g_rows, g_cols, g_seed, g_out);
    if (run->parsed()) {
      static const std::map<std::string, RunScheme> kSchemes{
          {"plain", RunScheme::plain},   {"rmfe-i", RunScheme::rmfe_i}, {"rmfe-ii", RunScheme::rmfe_ii},
          {"batch", RunScheme::batch},   {"matdot", RunScheme::matdot}, {"poly", RunScheme::poly},
      };
      auto it = kSchemes.find(scheme_str);
      if (it == kSchemes.end()) {
        std::cerr << "unknown scheme: " << scheme_str << "\n";
        return 2;
      }
      run_cfg.scheme = it->second;
      if (*uopt) run_cfg.u = opt_u;
      if (*vopt) run_cfg.v = opt_v;
      if (*wopt) run_cfg.w = opt_w;
      if (*mopt) run_cfg.m = opt_m;
      run_cfg.seed = seed;
      return cmd_run(run_cfg);
    }
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 2;
}
