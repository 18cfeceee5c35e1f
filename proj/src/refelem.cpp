#include "sbpfr/refelem.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace sbpfr {

namespace {

double interval_moment(int n) { return n % 2 ? 0.0 : 2.0 / (n + 1); }

}  // namespace

double triangle_monomial_integral(int i, int j) {
  // integrate x1 over [-1, -x2] first
  const double sign = (i + 1) % 2 ? -1.0 : 1.0;
  return sign / (i + 1) * (interval_moment(i + j + 1) - interval_moment(j));
}

QuadratureRule<double> load_quadrature_rule(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConstructionError("cannot open quadrature file " + path);

  std::string line;
  int degree = -1;
  std::vector<double> xs, ys, ws;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first) || first[0] == '#') continue;
    if (degree < 0) {
      if (first != "degree" || !(ls >> degree) || degree < 0)
        throw ConstructionError(path + ":" + std::to_string(lineno) +
                                ": expected `degree <d>` header");
      continue;
    }
    double x, y, w;
    std::istringstream row(line);
    if (!(row >> x >> y >> w))
      throw ConstructionError(path + ":" + std::to_string(lineno) + ": expected `x y w`");
    xs.push_back(x);
    ys.push_back(y);
    ws.push_back(w);
  }
  if (degree < 0 || ws.empty()) throw ConstructionError(path + ": empty quadrature file");

  QuadratureRule<double> rule;
  rule.degree = degree;
  rule.nodes.resize(2, static_cast<Eigen::Index>(ws.size()));
  rule.weights.resize(static_cast<Eigen::Index>(ws.size()));
  for (std::size_t q = 0; q < ws.size(); ++q) {
    rule.nodes(0, q) = xs[q];
    rule.nodes(1, q) = ys[q];
    rule.weights(q) = ws[q];
  }
  if (std::abs(rule.weights.sum() - 2.0) > 1e-12)
    throw ConstructionError(path + ": weights do not sum to the reference area");
  for (int i = 0; i <= degree; ++i) {
    for (int j = 0; i + j <= degree; ++j) {
      double s = 0;
      for (Eigen::Index q = 0; q < rule.weights.size(); ++q)
        s += rule.weights(q) * std::pow(rule.nodes(0, q), i) * std::pow(rule.nodes(1, q), j);
      const double exact = triangle_monomial_integral(i, j);
      if (std::abs(s - exact) > 1e-13 * std::max(1.0, std::abs(exact)))
        throw ConstructionError(path + ": rule is not exact for x1^" + std::to_string(i) +
                                " x2^" + std::to_string(j));
    }
  }
  return rule;
}

}  // namespace sbpfr
