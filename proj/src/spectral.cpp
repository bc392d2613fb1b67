#include <qdiv/spectral.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace qdiv {

namespace {

constexpr double kRatioQuantum = 1e-9;  // bits
constexpr double kTypeLimit = 5e6;

void require_n(int n, const char* where) {
  if (n < 1) throw ValidationError(std::string(where) + ": n must be positive");
}

void require_dense_size(Eigen::Index dim, int n, const char* where) {
  double size = 1.0;
  for (int i = 0; i < n; ++i) size *= double(dim);
  if (size > double(kDenseTensorLimit)) {
    throw ValidationError(std::string(where) + ": dimension " + std::to_string(dim) + "^" + std::to_string(n) +
                          " exceeds the dense limit of " + std::to_string(kDenseTensorLimit) +
                          "; commuting pairs can use the type-class path");
  }
}

Matrix power_matrix(const Matrix& m, int n) {
  Matrix out = m;
  for (int i = 1; i < n; ++i) out = kron(out, m);
  return out;
}

// Visits every composition k of n into `parts` nonnegative parts.
void for_each_type(int parts, int n, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> k(std::size_t(parts), 0);
  std::function<void(int, int)> rec = [&](int index, int left) {
    if (index == parts - 1) {
      k[std::size_t(index)] = left;
      visit(k);
      return;
    }
    for (int c = left; c >= 0; --c) {
      k[std::size_t(index)] = c;
      rec(index + 1, left - c);
    }
  };
  rec(0, n);
}

double type_count(int parts, int n) {
  // C(n + parts - 1, parts - 1)
  double c = 1.0;
  for (int i = 1; i < parts; ++i) c = c * double(n + i) / double(i);
  return c;
}

struct Letters {
  std::vector<double> log_p, log_q;  // natural logs; log_q = -inf when q = 0
};

Letters support_letters(const std::vector<double>& p, const std::vector<double>& q) {
  Letters l;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    l.log_p.push_back(std::log(p[i]));
    l.log_q.push_back(q[i] > 0.0 ? std::log(q[i]) : -std::numeric_limits<double>::infinity());
  }
  return l;
}

void require_type_budget(std::size_t letters, int n, const char* where) {
  if (type_count(int(letters), n) > kTypeLimit) {
    throw ValidationError(std::string(where) + ": too many type classes for " + std::to_string(letters) +
                          " outcomes at n = " + std::to_string(n));
  }
}

// Mass of {rho_n >= 2^{n gamma} sigma_n} under rho_n (or sigma_n) for a
// commuting pair, with each letter's log-ratio on the 1e-9-bit lattice.
double classical_spectral_mass(const IIDPair& pair, int n, double gamma_bits, bool under_sigma) {
  require_n(n, "spectral_trace");
  const Letters l = support_letters(pair.p(), pair.q());
  require_type_budget(l.log_p.size(), n, "spectral_trace");
  std::vector<long long> ratio(l.log_p.size());
  std::vector<bool> unbounded(l.log_p.size());
  for (std::size_t i = 0; i < ratio.size(); ++i) {
    unbounded[i] = std::isinf(l.log_q[i]);
    ratio[i] = unbounded[i] ? 0 : std::llround((l.log_p[i] - l.log_q[i]) / std::log(2.0) / kRatioQuantum);
  }
  const long long threshold = std::llround(gamma_bits / kRatioQuantum) * n;
  const double log_n_fact = std::lgamma(double(n) + 1.0);
  double mass = 0.0;
  for_each_type(int(ratio.size()), n, [&](const std::vector<int>& k) {
    long long sum = 0;
    bool infinite = false;
    double log_weight = log_n_fact;
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (k[i] == 0) continue;
      infinite = infinite || unbounded[i];
      sum += ratio[i] * k[i];
      log_weight += double(k[i]) * (under_sigma ? l.log_q[i] : l.log_p[i]) - std::lgamma(double(k[i]) + 1.0);
    }
    if (infinite || sum >= threshold) mass += std::exp(log_weight);
  });
  return std::min(mass, 1.0);
}

double dense_spectral_mass(const IIDPair& pair, int n, double gamma_bits, bool under_sigma) {
  require_n(n, "spectral_trace");
  require_dense_size(pair.dim(), n, "spectral_trace");
  const Matrix rn = power_matrix(pair.rho().matrix(), n);
  const Matrix sn = power_matrix(pair.sigma().matrix(), n);
  const double scale = std::exp2(std::clamp(double(n) * gamma_bits, -1000.0, 1000.0));
  const Matrix proj = sign_projector(Matrix(rn - scale * sn), Relation::GreaterEqual);
  return std::clamp(trace_product(proj, under_sigma ? sn : rn), 0.0, 1.0);
}

std::vector<double> expanded(const std::vector<double>& w, int n) {
  std::vector<double> out{1.0};
  for (int i = 0; i < n; ++i) {
    std::vector<double> next;
    next.reserve(out.size() * w.size());
    for (double a : out)
      for (double b : w) next.push_back(a * b);
    out = std::move(next);
  }
  return out;
}

}  // namespace

IIDPair::IIDPair(DensityOperator rho, DensityOperator sigma) : rho_(std::move(rho)), sigma_(std::move(sigma)) {
  require_same_dim(rho_.dim(), sigma_.dim(), "IIDPair");
  commuting_ = commutator_norm(rho_.matrix(), sigma_.matrix()) <= 1e-10;
  if (commuting_) {
    const auto joint = joint_diagonalize(rho_.matrix(), sigma_.matrix());
    if (!joint) {
      commuting_ = false;
      return;
    }
    for (Eigen::Index i = 0; i < joint->a.size(); ++i) {
      p_.push_back(std::max(joint->a(i), 0.0));
      q_.push_back(std::max(joint->b(i), 0.0));
    }
  }
}

DensityOperator tensor_power(const DensityOperator& rho, int n) {
  require_n(n, "tensor_power");
  require_dense_size(rho.dim(), n, "tensor_power");
  return DensityOperator::trusted(power_matrix(rho.matrix(), n));
}

double spectral_trace(const IIDPair& pair, int n, double gamma_bits) {
  return pair.commuting() ? spectral_trace_classical(pair, n, gamma_bits) : spectral_trace_dense(pair, n, gamma_bits);
}

double spectral_trace_dense(const IIDPair& pair, int n, double gamma_bits) {
  return dense_spectral_mass(pair, n, gamma_bits, false);
}

double spectral_trace_classical(const IIDPair& pair, int n, double gamma_bits) {
  if (!pair.commuting()) throw ValidationError("spectral_trace_classical: the pair does not commute");
  return classical_spectral_mass(pair, n, gamma_bits, false);
}

SigmaTailCheck sigma_tail_check(const IIDPair& pair, int n, double gamma_bits) {
  SigmaTailCheck c;
  c.lhs = pair.commuting() ? classical_spectral_mass(pair, n, gamma_bits, true)
                           : dense_spectral_mass(pair, n, gamma_bits, true);
  c.bound = std::exp2(-double(n) * gamma_bits);
  c.holds = c.lhs <= c.bound + 1e-9;
  return c;
}

std::vector<ClassicalOutcome> type_class_outcomes(const std::vector<double>& p, const std::vector<double>& q, int n) {
  require_n(n, "type_class_outcomes");
  if (p.size() != q.size()) throw ValidationError("type_class_outcomes: weight vectors differ in length");
  const Letters l = support_letters(p, q);
  require_type_budget(l.log_p.size(), n, "type_class_outcomes");
  const double log_n_fact = std::lgamma(double(n) + 1.0);
  std::vector<ClassicalOutcome> out;
  for_each_type(int(l.log_p.size()), n, [&](const std::vector<int>& k) {
    ClassicalOutcome o{0.0, 0.0, log_n_fact};
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (k[i] == 0) continue;
      o.log_p += double(k[i]) * l.log_p[i];
      o.log_q += double(k[i]) * l.log_q[i];
      o.log_multiplicity -= std::lgamma(double(k[i]) + 1.0);
    }
    out.push_back(o);
  });
  return out;
}

std::vector<RatePoint> rate_curve(const IIDPair& pair, double eps, const std::vector<int>& n_list, RateMethod method) {
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("rate_curve: eps must lie in (0, 1)");
  if (method == RateMethod::Classical && !pair.commuting())
    throw ValidationError("rate_curve: the classical method needs a commuting pair");
  const DivergenceValue rel = relative_entropy(pair.rho(), pair.sigma());
  const double s = rel.finite ? rel.bits : std::numeric_limits<double>::infinity();
  std::vector<RatePoint> curve;
  for (int n : n_list) {
    require_n(n, "rate_curve");
    RatePoint pt{n, eps, 0.0, 0.0, s};
    if (method == RateMethod::Classical) {
      const auto outcomes = type_class_outcomes(pair.p(), pair.q(), n);
      pt.dmax_over_n = smooth_dmax_classical(outcomes, eps) / n;
      pt.dmin_over_n = smooth_dmin_classical_greedy(outcomes, eps) / n;
    } else if (method == RateMethod::Auto && pair.commuting()) {
      require_dense_size(pair.dim(), n, "rate_curve");
      const auto outcomes = classical_outcomes(expanded(pair.p(), n), expanded(pair.q(), n));
      pt.dmax_over_n = smooth_dmax_classical(outcomes, eps) / n;
      pt.dmin_over_n = smooth_dmin_classical_greedy(outcomes, eps) / n;
    } else {
      require_dense_size(pair.dim(), n, "rate_curve");
      const DensityOperator rn = tensor_power(pair.rho(), n), sn = tensor_power(pair.sigma(), n);
      pt.dmax_over_n = smooth_dmax_upper(rn, sn, eps).value_bits / n;
      pt.dmin_over_n = smooth_dmin_lower(rn, sn, eps).value_bits / n;
    }
    curve.push_back(pt);
  }
  return curve;
}

RateEstimate divergence_rate_estimate(const IIDPair& pair, double eps, int n_max, RateMethod method) {
  const RatePoint pt = rate_curve(pair, eps, {n_max}, method).front();
  return {pt.dmax_over_n, pt.dmin_over_n};
}

}  // namespace qdiv
