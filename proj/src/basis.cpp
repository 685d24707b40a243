#include "vmsns/basis.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace vmsns {

namespace {

// Legendre polynomial P_q and first derivative at x, by recurrence.
void legendre(int q, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  if (q == 0) {
    p = p0;
    dp = 0.0;
    return;
  }
  double dp0 = 0.0, dp1 = 1.0;
  for (int k = 2; k <= q; ++k) {
    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    double dp2 = dp0 + (2.0 * k - 1.0) * p1;
    p0 = p1;
    p1 = p2;
    dp0 = dp1;
    dp1 = dp2;
  }
  p = p1;
  dp = dp1;
}

QuadratureRule make_gll(int q) {
  if (q < 1) throw std::invalid_argument("gll_rule: degree must be >= 1");
  const int n = q + 1;
  QuadratureRule rule;
  rule.degree = q;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);

  rule.nodes[0] = -1.0;
  rule.nodes[n - 1] = 1.0;

  // Interior nodes: roots of P'_q by Newton iteration, Chebyshev start.
  const double pi = 3.14159265358979323846;
  for (int i = 1; i < q; ++i) {
    double x = -std::cos(pi * i / q);
    for (int it = 0; it < 100; ++it) {
      double p, dp;
      legendre(q, x, p, dp);
      // (1-x^2) P'' = 2x P' - q(q+1) P
      double d2p = (2.0 * x * dp - q * (q + 1.0) * p) / (1.0 - x * x);
      double dx = dp / d2p;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = x;
  }
  // Enforce exact symmetry about 0.
  for (int i = 0; i < n / 2; ++i) {
    double s = 0.5 * (rule.nodes[i] - rule.nodes[n - 1 - i]);
    rule.nodes[i] = s;
    rule.nodes[n - 1 - i] = -s;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;

  for (int i = 0; i < n; ++i) {
    double p, dp;
    legendre(q, rule.nodes[i], p, dp);
    rule.weights[i] = 2.0 / (q * (q + 1.0) * p * p);
  }
  for (int i = 0; i < n / 2; ++i) {
    double w = 0.5 * (rule.weights[i] + rule.weights[n - 1 - i]);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const QuadratureRule& gll_rule(int q) {
  static std::mutex cache_mutex;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(q);
  if (it == cache.end()) it = cache.emplace(q, make_gll(q)).first;
  return it->second;
}

NodalBasis::NodalBasis(int p) : p_(p), nodes_(gll_rule(p).nodes) {
  if (p < 1) throw std::invalid_argument("NodalBasis: degree must be >= 1");
  bary_.assign(p_ + 1, 1.0);
  for (int a = 0; a <= p_; ++a) {
    for (int b = 0; b <= p_; ++b) {
      if (b != a) bary_[a] /= (nodes_[a] - nodes_[b]);
    }
  }
}

void NodalBasis::eval(double xi, std::vector<double>& values,
                      std::vector<double>& derivatives) const {
  if (xi < -1.0 - 1e-12 || xi > 1.0 + 1e-12)
    throw std::domain_error("NodalBasis::eval: xi outside [-1,1]");
  const int n = p_ + 1;
  values.assign(n, 0.0);
  derivatives.assign(n, 0.0);

  // Node coincidence: cardinal values, differentiation-matrix column.
  for (int j = 0; j < n; ++j) {
    if (std::abs(xi - nodes_[j]) < 1e-13) {
      values[j] = 1.0;
      double diag = 0.0;
      for (int a = 0; a < n; ++a) {
        if (a == j) continue;
        derivatives[a] = (bary_[a] / bary_[j]) / (nodes_[j] - nodes_[a]);
        diag -= derivatives[a];
      }
      derivatives[j] = diag;
      return;
    }
  }

  // Second-form barycentric values.
  double denom = 0.0;
  std::vector<double> w(n);
  for (int a = 0; a < n; ++a) {
    w[a] = bary_[a] / (xi - nodes_[a]);
    denom += w[a];
  }
  for (int a = 0; a < n; ++a) values[a] = w[a] / denom;

  // h'_a(xi) = h_a(xi) * sum_{b != a} 1/(xi - x_b), valid off nodes.
  double s_all = 0.0;
  for (int b = 0; b < n; ++b) s_all += 1.0 / (xi - nodes_[b]);
  for (int a = 0; a < n; ++a)
    derivatives[a] = values[a] * (s_all - 1.0 / (xi - nodes_[a]));
}

EdgeBasis::EdgeBasis(int p) : p_(p), nodal_(p) {}

void EdgeBasis::eval(double xi, std::vector<double>& values) const {
  std::vector<double> v, d;
  nodal_.eval(xi, v, d);
  values.assign(p_, 0.0);
  double acc = 0.0;
  for (int i = 1; i <= p_; ++i) {
    acc -= d[i - 1];
    values[i - 1] = acc;
  }
}

double EdgeBasis::integrate(int i, double a, double b) const {
  std::vector<double> va, da, vb, db;
  nodal_.eval(a, va, da);
  nodal_.eval(b, vb, db);
  // int e_i = -sum_{k<i} (h_k(b) - h_k(a))
  double s = 0.0;
  for (int k = 0; k < i; ++k) s -= vb[k] - va[k];
  return s;
}

const NodalBasis& nodal_basis(int p) {
  static std::mutex cache_mutex;
  static std::map<int, NodalBasis> cache;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(p);
  if (it == cache.end()) it = cache.emplace(p, NodalBasis(p)).first;
  return it->second;
}

const EdgeBasis& edge_basis(int p) {
  static std::mutex cache_mutex;
  static std::map<int, EdgeBasis> cache;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(p);
  if (it == cache.end()) it = cache.emplace(p, EdgeBasis(p)).first;
  return it->second;
}

BasisTable tabulate_basis(int p, const QuadratureRule& rule) {
  const NodalBasis& nb = nodal_basis(p);
  const EdgeBasis& eb = edge_basis(p);
  BasisTable t;
  const int nq = rule.num_points();
  t.nodal.resize(nq);
  t.nodal_deriv.resize(nq);
  t.edge.resize(nq);
  for (int q = 0; q < nq; ++q) {
    nb.eval(rule.nodes[q], t.nodal[q], t.nodal_deriv[q]);
    eb.eval(rule.nodes[q], t.edge[q]);
  }
  return t;
}

}  // namespace vmsns
