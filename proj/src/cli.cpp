#include <qdiv/cli.hpp>

#include <qdiv/entanglement.hpp>
#include <qdiv/io.hpp>
#include <qdiv/random.hpp>
#include <qdiv/smoothing.hpp>
#include <qdiv/spectral.hpp>
#include <qdiv/suite.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

namespace qdiv::cli {

namespace {

enum class Format { Default, Json, Csv };

struct Globals {
  std::uint64_t seed = 42;
  std::optional<double> tolerance;
  std::string out_path;
  Format format = Format::Default;
};

// +-inf become strings so the output stays valid JSON.
Json bits_json(double b) {
  if (std::isfinite(b)) return b;
  return b > 0 ? "inf" : "-inf";
}

std::string csv_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

Dims parse_dims(const std::string& text) {
  Dims d{0, 0};
  char comma = 0;
  std::istringstream is(text);
  if (!(is >> d.a >> comma >> d.b) || comma != ',' || !is.eof() || d.a < 1 || d.b < 1)
    throw ValidationError("--dims expects dA,dB with positive integers, got \"" + text + "\"");
  return d;
}

std::vector<int> parse_int_list(const std::string& text, const char* flag) {
  std::vector<int> out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError(std::string(flag) + " expects a comma-separated list of integers, got \"" + text + "\"");
    }
  }
  return out;
}

BipartiteState bipartite_from(const StateFile& file, const std::string& dims_flag, const char* what) {
  if (!dims_flag.empty()) return BipartiteState(file.state, parse_dims(dims_flag));
  if (file.dims) return file.bipartite();
  throw ValidationError(std::string(what) + " needs --dims dA,dB or a \"dims\" field in the state file");
}

Json report_json(const DivergenceReport& r) {
  Json j;
  j["d_min"] = to_json(r.d_min);
  j["d_max"] = to_json(r.d_max);
  j["rel_entropy"] = to_json(r.rel_entropy);
  j["chernoff"] = to_json(r.chernoff);
  j["sandwich_ok"] = r.sandwich_ok;
  return j;
}

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

Json ensemble_json(const SeparableEnsemble& e) {
  Json j;
  j["dims"] = {e.dims().a, e.dims().b};
  j["terms"] = Json::array();
  for (const SeparableTerm& t : e.terms()) j["terms"].push_back({{"weight", t.weight}, {"a", vector_json(t.a)}, {"b", vector_json(t.b)}});
  return j;
}

void reject_csv(const Globals& g, const char* command) {
  if (g.format == Format::Csv) throw ValidationError(std::string("--format csv is not available for ") + command);
}

// ---------------------------------------------------------------------------

struct ComputeArgs {
  std::string quantity, rho, sigma, dims;
  std::optional<double> alpha;
};

std::string run_compute(const ComputeArgs& a, const Globals& g) {
  const StateFile rho_file = parse_state_file(a.rho);
  const DensityOperator& rho = rho_file.state;
  std::optional<StateFile> sigma_file;
  if (!a.sigma.empty()) sigma_file = parse_state_file(a.sigma);
  auto need_sigma = [&]() -> const DensityOperator& {
    if (!sigma_file) throw ValidationError("--quantity " + a.quantity + " needs --sigma FILE");
    return sigma_file->state;
  };

  Json j;
  j["quantity"] = a.quantity;
  if (a.quantity == "dmax") {
    j["value_bits"] = to_json(d_max(rho, need_sigma()));
  } else if (a.quantity == "dmin") {
    j["value_bits"] = to_json(d_min(rho, need_sigma()));
  } else if (a.quantity == "rel") {
    j["value_bits"] = to_json(relative_entropy(rho, need_sigma()));
  } else if (a.quantity == "renyi") {
    if (!a.alpha) throw ValidationError("--quantity renyi needs --alpha in (0, 1)");
    j["alpha"] = *a.alpha;
    j["value_bits"] = to_json(renyi_relative(rho, need_sigma(), *a.alpha));
  } else if (a.quantity == "chernoff") {
    j["value_bits"] = to_json(chernoff_bound(rho, need_sigma()));
  } else if (a.quantity == "hmin" || a.quantity == "hmax") {
    const bool min = a.quantity == "hmin";
    if (sigma_file) {
      // Conditional version against I_A (x) sigma_B.
      const BipartiteState rho_ab = bipartite_from(rho_file, a.dims, "a conditional entropy");
      j["value_bits"] = bits_json(min ? h_min_cond(rho_ab, sigma_file->state) : h_max_cond(rho_ab, sigma_file->state));
    } else {
      j["value_bits"] = min ? h_min(rho) : h_max(rho);
    }
  } else if (a.quantity == "mutual-min" || a.quantity == "mutual-max") {
    const BipartiteState rho_ab = bipartite_from(rho_file, a.dims, "a mutual information");
    j["value_bits"] = to_json(a.quantity == "mutual-min" ? mutual_min(rho_ab) : mutual_max(rho_ab));
  }
  const bool divergence = a.quantity == "dmax" || a.quantity == "dmin" || a.quantity == "rel" ||
                          a.quantity == "renyi" || a.quantity == "chernoff";
  if (divergence) j["report"] = report_json(divergence_report(rho, sigma_file->state));

  if (g.format == Format::Csv) {
    std::ostringstream os;
    os << "quantity,value_bits\n" << a.quantity << ",";
    const Json& v = j["value_bits"];
    os << (v.is_string() ? v.get<std::string>() : csv_number(v.get<double>())) << "\n";
    return os.str();
  }
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

struct SmoothArgs {
  std::string quantity, rho, sigma, mode = "bound";
  double eps = 0.0;
};

std::string run_smooth(const SmoothArgs& a, const Globals& g) {
  reject_csv(g, "smooth");
  if (!(a.eps >= 0.0 && a.eps < 1.0)) throw ValidationError("--eps must lie in [0, 1)");
  const DensityOperator rho = parse_state_file(a.rho).state;
  const DensityOperator sigma = parse_state_file(a.sigma).state;
  Json j;
  j["quantity"] = a.quantity;
  j["mode"] = a.mode;
  j["eps"] = a.eps;
  if (a.quantity == "dmax" && a.mode == "bound") {
    if (!(a.eps > 0.0)) throw ValidationError("--mode bound needs --eps > 0");
    const SmoothDmaxUpper r = smooth_dmax_upper(rho, sigma, a.eps);
    j["value_bits"] = bits_json(r.value_bits);
    j["tail_epsilon"] = r.tail_epsilon;
    j["floor_hit"] = r.floor_hit;
    if (r.certificate) {
      j["certificate"] = {{"lambda_bits", r.certificate->lambda_bits},
                          {"epsilon_used", r.certificate->epsilon_used},
                          {"smoothed_trace_distance", r.certificate->transform_trace_dist},
                          {"smoothed", matrix_to_json(r.certificate->smoothed.matrix())}};
    }
  } else if (a.quantity == "dmax") {
    ExactSolverOptions options;
    if (g.tolerance) options.residual_tolerance = *g.tolerance;
    const SmoothDmaxExact r = smooth_dmax_exact(rho, sigma, a.eps, options);
    j["value_bits"] = bits_json(r.value_bits);
    j["lower_bits"] = bits_json(r.lower_bits);
    j["iterations"] = r.iterations;
    j["certificate"] = {{"witness", matrix_to_json(r.witness)}};
  } else if (a.mode == "bound") {
    if (!(a.eps > 0.0)) throw ValidationError("--mode bound needs --eps > 0");
    const SmoothDminLower r = smooth_dmin_lower(rho, sigma, a.eps);
    j["value_bits"] = bits_json(r.value_bits);
    if (r.admissible_found) j["certificate"] = {{"gamma_bits", r.gamma_bits}, {"delta", r.delta}};
  } else {
    const IIDPair pair(rho, sigma);
    if (!pair.commuting())
      throw ValidationError("exact smooth min-relative entropy is available only for commuting rho and sigma");
    j["value_bits"] = bits_json(smooth_dmin_exact_classical(pair.p(), pair.q(), a.eps));
  }
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

struct EmaxArgs {
  std::string state, dims;
  int restarts = 4;
  int terms = 0;
  bool with_relent = false;
};

std::string run_emax(const EmaxArgs& a, const Globals& g) {
  reject_csv(g, "emax");
  const BipartiteState rho = bipartite_from(parse_state_file(a.state), a.dims, "emax");
  if (a.restarts < 1) throw ValidationError("--restarts must be at least 1");
  if (a.terms < 0) throw ValidationError("--terms must be nonnegative");
  EmaxConfig config;
  config.restarts = a.restarts;
  config.terms = a.terms;
  config.seed = g.seed;
  const EmaxResult r = emax(rho, config);
  Json j;
  j["upper_bits"] = r.upper_bits;
  j["lower_bits"] = r.lower_bits;
  j["gap"] = r.gap;
  j["barrier_weight"] = r.barrier_weight;
  j["ppt"] = is_ppt(rho);
  j["witness"] = ensemble_json(r.witness);
  if (a.with_relent) j["rel_ent_entanglement_upper"] = rel_ent_entanglement(rho, config, &r.witness);
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

struct ConvergeArgs {
  std::string rho, sigma;
  double eps = 0.05;
  int nmax = 10;
  bool fast_classical = false;
};

std::string run_converge(const ConvergeArgs& a, const Globals& g) {
  if (a.nmax < 1) throw ValidationError("--nmax must be at least 1");
  const IIDPair pair(parse_state_file(a.rho).state, parse_state_file(a.sigma).state);
  std::vector<int> ns;
  for (int n = 1; n <= a.nmax; ++n) ns.push_back(n);
  const auto curve = rate_curve(pair, a.eps, ns, a.fast_classical ? RateMethod::Classical : RateMethod::Auto);
  if (g.format == Format::Json) {
    Json j = Json::array();
    for (const RatePoint& p : curve)
      j.push_back({{"n", p.n}, {"eps", p.eps}, {"dmax_over_n", bits_json(p.dmax_over_n)},
                   {"dmin_over_n", bits_json(p.dmin_over_n)}, {"rel_entropy", bits_json(p.rel_entropy)}});
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "n,eps,dmax_over_n,dmin_over_n,rel_entropy\n";
  for (const RatePoint& p : curve)
    os << p.n << "," << csv_number(p.eps) << "," << csv_number(p.dmax_over_n) << "," << csv_number(p.dmin_over_n)
       << "," << csv_number(p.rel_entropy) << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------

struct SuiteArgs {
  int trials = 100;
  std::string dims;
  std::vector<std::string> only;
  bool list = false;
};

std::string run_suite_command(const SuiteArgs& a, const Globals& g, bool& pass) {
  pass = true;
  if (a.list) {
    std::string out;
    for (const auto& n : suite_check_names()) out += n + "\n";
    return out;
  }
  SuiteConfig config;
  config.seed = g.seed;
  config.trials = a.trials;
  if (!a.dims.empty()) config.dims = parse_int_list(a.dims, "--dims");
  if (g.tolerance) config.tolerance["*"] = *g.tolerance;
  config.only = a.only;
  const SuiteReport report = run_suite(config);
  pass = report.pass;
  if (g.format == Format::Csv) {
    std::ostringstream os;
    os << "name,trials,failures,worst_violation,tolerance\n";
    for (const auto& c : report.checks)
      os << c.name << "," << c.trials << "," << c.failures << "," << csv_number(c.worst_violation) << ","
         << csv_number(c.tolerance) << "\n";
    return os.str();
  }
  return report.to_json().dump(2) + "\n";
}

// ---------------------------------------------------------------------------

struct GenArgs {
  std::string kind = "state";
  int dim = 2;
  int rank = 0;
  std::string dims;
  int in_dim = 2, out_dim = 2, env = 0;
};

std::string run_gen(const GenArgs& a, const Globals& g) {
  reject_csv(g, "gen");
  Rng rng = Rng(g.seed).split(std::string_view("gen")).split(std::string_view(a.kind));
  Json j;
  if (a.kind == "state" || a.kind == "pure") {
    if (a.dim < 1) throw ValidationError("--dim must be positive");
    const int rank = a.kind == "pure" ? 1 : (a.rank == 0 ? a.dim : a.rank);
    if (rank < 1 || rank > a.dim) throw ValidationError("--rank must lie in [1, dim]");
    j = state_to_json(random_density(a.dim, rank, rng).matrix());
  } else if (a.kind == "bipartite") {
    if (a.dims.empty()) throw ValidationError("--kind bipartite needs --dims dA,dB");
    const Dims d = parse_dims(a.dims);
    const int total = int(d.total());
    const int rank = a.rank == 0 ? total : a.rank;
    if (rank < 1 || rank > total) throw ValidationError("--rank must lie in [1, dA dB]");
    j = state_to_json(random_density(total, rank, rng).matrix(), d);
  } else if (a.kind == "channel") {
    if (a.in_dim < 1 || a.out_dim < 1) throw ValidationError("--in-dim and --out-dim must be positive");
    // The Stinespring isometry needs out_dim * env >= in_dim.
    const int env = a.env > 0 ? a.env : (a.in_dim + a.out_dim - 1) / a.out_dim;
    if (env * a.out_dim < a.in_dim) throw ValidationError("--env too small: need out_dim * env >= in_dim");
    j = channel_to_json(random_channel(a.in_dim, a.out_dim, env, rng));
  }
  return j.dump(2) + "\n";
}

void emit(const std::string& text, const Globals& g, std::ostream& out) {
  if (g.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(g.out_path);
  if (!file) throw ValidationError(g.out_path + ": cannot write file");
  file << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Min- and max-relative entropies, their smooth versions, E_max and finite-n rate estimates.", "qdiv"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  Globals g;
  std::string format;
  app.add_option("--seed", g.seed, "Seed for every random stream (default 42)");
  app.add_option("--tolerance", g.tolerance,
                 "suite: tolerance for every check; smooth --mode exact: residual tolerance of the splitting method");
  app.add_option("--out", g.out_path, "Write the report to FILE instead of stdout");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  ComputeArgs compute_args;
  auto* compute = app.add_subcommand("compute", "Evaluate one divergence or entropy");
  compute->add_option("--quantity", compute_args.quantity)
      ->required()
      ->check(CLI::IsMember({"dmax", "dmin", "rel", "renyi", "chernoff", "hmin", "hmax", "mutual-min", "mutual-max"}));
  compute->add_option("--rho", compute_args.rho, "State file")->required();
  compute->add_option("--sigma", compute_args.sigma, "Second state file (for hmin/hmax: sigma_B)");
  compute->add_option("--alpha", compute_args.alpha, "Renyi order in (0, 1)");
  compute->add_option("--dims", compute_args.dims, "dA,dB for bipartite quantities");

  SmoothArgs smooth_args;
  auto* smooth = app.add_subcommand("smooth", "Smooth min- or max-relative entropy");
  smooth->add_option("--quantity", smooth_args.quantity)->required()->check(CLI::IsMember({"dmax", "dmin"}));
  smooth->add_option("--rho", smooth_args.rho)->required();
  smooth->add_option("--sigma", smooth_args.sigma)->required();
  smooth->add_option("--eps", smooth_args.eps)->required();
  smooth->add_option("--mode", smooth_args.mode, "exact or bound (default bound)")
      ->check(CLI::IsMember({"exact", "bound"}));

  EmaxArgs emax_args;
  auto* emax_cmd = app.add_subcommand("emax", "Two-sided estimate of the max-relative entropy of entanglement");
  emax_cmd->add_option("--state", emax_args.state)->required();
  emax_cmd->add_option("--dims", emax_args.dims, "dA,dB (default: the file's dims field)");
  emax_cmd->add_option("--restarts", emax_args.restarts, "Search restarts (default 4)");
  emax_cmd->add_option("--terms", emax_args.terms, "Product terms kept in the witness; 0 means (dA dB)^2");
  emax_cmd->add_flag("--with-relative-entropy", emax_args.with_relent,
                     "Also report an upper bound on the relative entropy of entanglement");

  ConvergeArgs converge_args;
  auto* converge = app.add_subcommand("converge", "Smooth rate curve for n = 1..nmax (CSV)");
  converge->add_option("--rho", converge_args.rho)->required();
  converge->add_option("--sigma", converge_args.sigma)->required();
  converge->add_option("--eps", converge_args.eps, "Smoothing parameter (default 0.05)");
  converge->add_option("--nmax", converge_args.nmax)->required();
  converge->add_flag("--fast-classical", converge_args.fast_classical,
                     "Type-class enumeration for commuting pairs, without the dense size limit");

  SuiteArgs suite_args;
  auto* suite = app.add_subcommand("suite", "Randomized property suite");
  suite->add_option("--trials", suite_args.trials, "Trials per check (default 100)");
  suite->add_option("--dims", suite_args.dims, "Comma-separated dimensions to sample (default 2,3,4,5,6)");
  suite->add_option("--only", suite_args.only, "Run only these checks")->delimiter(',');
  suite->add_flag("--list", suite_args.list, "Print the check names and exit");

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "Random state or channel file");
  gen->add_option("--kind", gen_args.kind, "state, pure, bipartite or channel (default state)")
      ->check(CLI::IsMember({"state", "pure", "bipartite", "channel"}));
  gen->add_option("--dim", gen_args.dim, "Dimension of a state (default 2)");
  gen->add_option("--rank", gen_args.rank, "Rank of a state; 0 means full");
  gen->add_option("--dims", gen_args.dims, "dA,dB of a bipartite state");
  gen->add_option("--in-dim", gen_args.in_dim, "Channel input dimension");
  gen->add_option("--out-dim", gen_args.out_dim, "Channel output dimension");
  gen->add_option("--env", gen_args.env, "Channel environment dimension; 0 picks the smallest valid one");

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "qdiv: " << e.what() << "\n";
    return kInvalid;
  }
  if (format == "json") g.format = Format::Json;
  if (format == "csv") g.format = Format::Csv;

  try {
    int code = kOk;
    std::string text;
    if (compute->parsed()) {
      text = run_compute(compute_args, g);
    } else if (smooth->parsed()) {
      text = run_smooth(smooth_args, g);
    } else if (emax_cmd->parsed()) {
      text = run_emax(emax_args, g);
    } else if (converge->parsed()) {
      text = run_converge(converge_args, g);
    } else if (suite->parsed()) {
      bool pass = true;
      text = run_suite_command(suite_args, g, pass);
      if (!pass) code = kSuiteFailed;
    } else if (gen->parsed()) {
      text = run_gen(gen_args, g);
    }
    emit(text, g, out);
    return code;
  } catch (const ValidationError& e) {
    err << "qdiv: " << e.what() << "\n";
    return kInvalid;
  } catch (const SolverError& e) {
    err << "qdiv: solver failed: " << e.what() << "\n";
    return kSolver;
  } catch (const ConsistencyError& e) {
    err << "qdiv: certificate check failed: " << e.what() << "\n";
    return kSolver;
  } catch (const std::exception& e) {
    err << "qdiv: " << e.what() << "\n";
    return kSolver;
  }
}

}  // namespace qdiv::cli
