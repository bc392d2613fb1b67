// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include "oracles.hpp"

#include <qdiv/cli.hpp>
#include <qdiv/qdiv.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

using namespace qdiv;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

int run_cli(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream o, e;
  const int code = cli::run(args, o, e);
  if (out) *out = o.str();
  return code;
}

std::string temp_state(const std::string& name, const Matrix& m, std::optional<Dims> dims = std::nullopt) {
  const std::string path = (std::filesystem::temp_directory_path() / ("qdiv_acceptance_" + name)).string();
  write_json_file(path, state_to_json(m, dims));
  return path;
}

std::vector<double> random_weights(int d, Rng& rng) {
  std::vector<double> w(static_cast<std::size_t>(d));
  double total = 0;
  for (auto& x : w) total += (x = rng.uniform(0.02, 1.0));
  for (auto& x : w) x /= total;
  return w;
}

// 1. The full property suite through the command line.
void suite_criterion() {
  const auto t0 = Clock::now();
  std::string out;
  const int code = run_cli({"suite", "--seed", "42", "--trials", "100"}, &out);
  const double secs = seconds_since(t0);
  long failed = 0;
  std::string names;
  for (const Json& c : Json::parse(out)["checks"]) {
    const long f = c["failures"].get<long>();
    failed += f;
    if (f > 0) names += " " + c["name"].get<std::string>();
  }
  report(1, code == 0 && failed == 0 && secs <= 300.0,
         fmt("suite seed 42, 100 trials: %.0f failing trials, %.1f s (limit 300 s)", double(failed), secs) + names);
}

// 2. D_max three-form agreement.
void dmax_forms_criterion() {
  Rng rng(Rng(42).split("acceptance-dmax-forms"));
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int d = rng.integer(2, 6);
    const DMaxForms f = d_max_forms(random_density(d, rng), random_density(d, rng));
    worst = std::max(worst, f.max_disagreement());
  }
  report(2, worst <= 1e-8, fmt("100 full-support pairs, dims 2-6: worst disagreement %.3g bits (tol 1e-8)", worst));
}

// 3. Smoothing values and certificates.
void smoothing_criterion() {
  const std::vector<double> p{0.9, 0.1}, q{0.5, 0.5};
  const double exact = smooth_dmax_exact(DensityOperator::diagonal(p), DensityOperator::diagonal(q), 0.2).value_bits;
  const double budget = oracle::smooth_dmax_budget(p, q, 0.2);
  const bool a = std::abs(exact - std::log2(1.4)) <= 1e-3 && std::abs(budget - std::log2(1.4)) <= 1e-9;
  const double dmin = smooth_dmin_exact_classical(p, q, 0.25);
  const bool b = dmin == 1.0;

  Rng rng(Rng(42).split("acceptance-certificates"));
  int bad = 0;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int d = rng.integer(2, 5);
    const DensityOperator rho = random_density(d, rng.integer(1, d), rng), sigma = random_density(d, rng);
    const double lambda = d_max(rho, sigma).bits - rng.uniform(0.0, 3.0);
    const SmoothingCertificate cert = smoothing_certificate(rho, sigma, lambda);
    const double dom = d_max_matrix(cert.smoothed.matrix(), sigma.matrix()).bits - lambda;
    const double dist = cert.transform_trace_dist - cert.epsilon_used;
    const double eps = rng.uniform(0.01, 0.5);
    const SmoothDmaxUpper up = smooth_dmax_upper(rho, sigma, eps);
    const double tail = std::isfinite(up.value_bits) ? tail_epsilon(rho.matrix(), sigma.matrix(), up.value_bits) - eps
                                                     : oracle::inf;
    const double v = std::max({dom, dist, tail});
    worst = std::max(worst, v);
    if (v > 1e-7) ++bad;
  }
  report(3, a && b && bad == 0,
         fmt("smooth_dmax_exact %.6f vs log2 1.4 = %.6f (tol 1e-3); classical smoothed D_min %.17g (want 1 exactly); ",
             exact, std::log2(1.4), dmin) +
             fmt("certificate/tail violations %.0f of 100, worst %.3g (tol 1e-7)", bad, worst));
}

// 4. E_max on the Bell state and random two-qubit states.
void emax_criterion() {
  const auto t0 = Clock::now();
  const Eigen::VectorXcd phi = oracle::max_entangled(2);
  const BipartiteState bell(DensityOperator(Matrix(phi * phi.adjoint())), Dims{2, 2});
  const EmaxResult b = emax(bell);
  const bool bell_ok = b.upper_bits >= 0.99 && b.upper_bits <= 1.01 && b.lower_bits >= 0.99 && b.lower_bits <= 1.01 &&
                       b.gap <= 1e-2;

  Rng rng(Rng(42).split("acceptance-emax"));
  int bad = 0;
  double worst_ppt = -oracle::inf, worst_er = -oracle::inf;
  for (int t = 0; t < 50; ++t) {
    const BipartiteState rho(random_density(4, rng.integer(1, 4), rng), Dims{2, 2});
    EmaxConfig c;
    c.seed = rng.split(std::uint64_t(t)).seed();
    const EmaxResult r = emax(rho, c);
    const double er = rel_ent_entanglement(rho, c, &r.witness);
    worst_ppt = std::max(worst_ppt, r.lower_bits - r.upper_bits);
    worst_er = std::max(worst_er, er - r.upper_bits);
    if (r.lower_bits > r.upper_bits || er > r.upper_bits + 1e-3) ++bad;
  }
  const double secs = seconds_since(t0);
  report(4, bell_ok && bad == 0 && secs <= 600.0,
         fmt("Bell upper %.6f lower %.6f gap %.3g (want [0.99,1.01], gap <= 1e-2); ", b.upper_bits, b.lower_bits, b.gap) +
             fmt("50 random states: %.0f violations, max(ppt - upper) %.3g, max(E_R - upper) %.3g; %.1f s (limit 600 s)",
                 bad, worst_ppt, worst_er, secs));
}

// 5. Finite-n spectral estimates on the benchmark pair.
void spectral_criterion() {
  const std::vector<double> p{0.75, 0.25}, q{0.5, 0.5};
  const double s = oracle::kl_bits(p, q);
  const IIDPair pair(DensityOperator::diagonal(p), DensityOperator::diagonal(q));
  const auto curve = rate_curve(pair, 0.05, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  int sandwich_bad = 0;
  for (const auto& pt : curve)
    if (pt.dmin_over_n > s + 1e-3 || pt.dmax_over_n < s - 1e-3) ++sandwich_bad;
  const double gap1 = std::abs(curve.front().dmax_over_n - s), gap10 = std::abs(curve.back().dmax_over_n - s);
  const double fast = rate_curve(pair, 0.05, {200}, RateMethod::Classical).front().dmax_over_n;
  report(5, sandwich_bad == 0 && gap10 < gap1 && std::abs(fast - s) <= 0.05,
         fmt("S = %.6f; sandwich violations n=1..10: %.0f; |dmax/n - S| n=1 %.6f, n=10 %.6f; ", s, sandwich_bad, gap1,
             gap10) +
             fmt("n=200 dmax/n %.6f, distance %.6f (tol 0.05)", fast, std::abs(fast - s)));
}

// 6. Chernoff bound.
void chernoff_criterion() {
  const std::vector<double> p{0.75, 0.25}, q{0.5, 0.5};
  const double xi = chernoff_bound(DensityOperator::diagonal(p), DensityOperator::diagonal(q)).bits;
  const double grid = oracle::chernoff_grid(p, q, 100000);
  const bool value_ok = std::abs(xi - 0.05) <= 5e-4 && std::abs(xi - grid) <= 5e-4;

  Rng rng(Rng(42).split("acceptance-chernoff"));
  int bad = 0;
  for (int t = 0; t < 100; ++t) {
    const int d = rng.integer(2, 5);
    const DensityOperator rho = random_density(d, rng.integer(1, d), rng);
    const DensityOperator sigma = random_density(d, rng.integer(1, d), rng);
    const DivergenceValue c = chernoff_bound(rho, sigma), m = d_min(rho, sigma);
    if (c.finite && (!m.finite || c.bits < m.bits - 1e-8)) ++bad;
  }
  // Diagonal random pairs, compared with the classical grid oracle as well.
  for (int t = 0; t < 20; ++t) {
    const int d = rng.integer(2, 5);
    const auto a = random_weights(d, rng), b = random_weights(d, rng);
    const double v = chernoff_bound(DensityOperator::diagonal(a), DensityOperator::diagonal(b)).bits;
    if (std::abs(v - oracle::chernoff_grid(a, b, 20000)) > 1e-6) ++bad;
  }
  report(6, value_ok && bad == 0,
         fmt("xi = %.6f, grid oracle %.6f (want 0.0500 +- 5e-4); xi >= D_min and grid agreement violations: %.0f", xi, grid,
             bad));
}

// 7. Byte-identical output for repeated runs of each subcommand.
void determinism_criterion() {
  const std::string rho = temp_state("rho.json", oracle::diag({0.75, 0.25}));
  const std::string sigma = temp_state("sigma.json", oracle::diag({0.5, 0.5}));
  Rng rng(7);
  const std::string state = temp_state("state.json", random_density(4, rng).matrix(), Dims{2, 2});
  const std::vector<std::vector<std::string>> commands{
      {"compute", "--quantity", "dmax", "--rho", rho, "--sigma", sigma},
      {"compute", "--quantity", "chernoff", "--rho", rho, "--sigma", sigma, "--format", "csv"},
      {"smooth", "--quantity", "dmax", "--rho", rho, "--sigma", sigma, "--eps", "0.1", "--mode", "exact"},
      {"smooth", "--quantity", "dmin", "--rho", rho, "--sigma", sigma, "--eps", "0.1"},
      {"emax", "--state", state, "--seed", "11", "--with-relative-entropy"},
      {"converge", "--rho", rho, "--sigma", sigma, "--nmax", "8"},
      {"suite", "--seed", "5", "--trials", "3"},
      {"gen", "--kind", "bipartite", "--dims", "2,3", "--seed", "9"},
      {"gen", "--kind", "channel", "--in-dim", "2", "--out-dim", "3", "--seed", "9"},
  };
  int differ = 0;
  std::string which;
  for (const auto& c : commands) {
    std::string a, b;
    const int ca = run_cli(c, &a), cb = run_cli(c, &b);
    if (ca != cb || a != b || a.empty()) {
      ++differ;
      which += " " + c.front();
    }
  }
  for (const auto& f : {rho, sigma, state}) std::remove(f.c_str());
  report(7, differ == 0, fmt("%.0f subcommand invocations run twice, %.0f differ", double(commands.size()), differ) + which);
}

}  // namespace

int main() {
  suite_criterion();
  dmax_forms_criterion();
  smoothing_criterion();
  emax_criterion();
  spectral_criterion();
  chernoff_criterion();
  determinism_criterion();
  std::printf("%d of 7 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
