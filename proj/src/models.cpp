#include "ldp/models.hpp"

#include <charconv>
#include <cmath>

#include "ldp/error.hpp"

namespace ldp::models {

CoefficientField brownian(int d) {
  if (d < 1) throw ParameterError("brownian: d must be >= 1");
  const auto du = static_cast<std::size_t>(d);
  auto drift = [du](double, auto, auto out) {
    for (std::size_t i = 0; i < du; ++i) out[i] = 0.0;
  };
  auto diffusion = [du](double, auto, auto out) {
    for (std::size_t i = 0; i < du; ++i)
      for (std::size_t j = 0; j < du; ++j) out[i * du + j] = (i == j) ? 1.0 : 0.0;
  };
  return make_field("brownian", d, d, drift, diffusion);
}

CoefficientField rotational(double r) {
  if (!(r > 0.0)) throw ParameterError("rotational: r must be > 0");
  auto drift = [r](double, auto x, auto out) {
    const auto sq = x[0] * x[0] + x[1] * x[1];
    const auto scale = pow(sq, r);
    out[0] = -scale * x[0];
    out[1] = -scale * x[1];
  };
  auto diffusion = [r](double, auto x, auto out) {
    const auto sq = x[0] * x[0] + x[1] * x[1];
    const auto scale = pow(sq, 0.5 * r);
    out[0] = -scale * x[1];
    out[1] = scale * x[0];
  };
  return make_field("rotational(" + std::to_string(r) + ")", 2, 1, drift, diffusion)
      .with_nonsmooth_points({{0.0, 0.0}});
}

CoefficientField ou(double a, int d) {
  if (d < 1) throw ParameterError("ou: d must be >= 1");
  if (!std::isfinite(a)) throw ParameterError("ou: a must be finite");
  const auto du = static_cast<std::size_t>(d);
  auto drift = [a, du](double, auto x, auto out) {
    for (std::size_t i = 0; i < du; ++i) out[i] = a * x[i];
  };
  auto diffusion = [du](double, auto, auto out) {
    for (std::size_t i = 0; i < du; ++i)
      for (std::size_t j = 0; j < du; ++j) out[i * du + j] = (i == j) ? 1.0 : 0.0;
  };
  return make_field("ou(" + std::to_string(a) + ")", d, d, drift, diffusion);
}

CoefficientField cubic() {
  auto drift = [](double, auto x, auto out) { out[0] = -(x[0] * x[0] * x[0]); };
  auto diffusion = [](double, auto, auto out) { out[0] = 1.0; };
  return make_field("cubic", 1, 1, drift, diffusion);
}

CoefficientField sqrt_drift() {
  auto drift = [](double, auto x, auto out) { out[0] = sign(x[0]) * sqrt(abs(x[0])); };
  auto diffusion = [](double, auto, auto out) { out[0] = 0.0; };
  return make_field("sqrt-drift", 1, 1, drift, diffusion).with_nonsmooth_points({{0.0}});
}

const std::vector<ModelInfo>& catalog() {
  static const std::vector<ModelInfo> entries = {
      {"brownian", {"d"}, "d = m (default 1)", "b = 0, sigma = I",
       "bounded and Lipschitz; every condition holds (growth lhs = max(d, |x|))"},
      {"rotational", {"r"}, "d = 2, m = 1", "sigma = |x|^r (-x2, x1)^T, b = -|x|^(2r) x",
       "growth condition lhs = 0 for all x (sigma^T x = 0, ||sigma||^2 + 2<x,b> = "
       "-|x|^(2r+2)); locally Lipschitz, so the localized condition holds with "
       "eta(u) = u; superlinear sigma rules out global growth bounds"},
      {"ou", {"a", "d"}, "d = m (default 1)", "b = a x, sigma = I",
       "globally Lipschitz; growth holds with gamma(u) = u"},
      {"cubic", {}, "d = m = 1", "b = -x^3, sigma = 1",
       "dissipative: growth holds with gamma(u) = u (lhs = max(1 - 2x^4, |x|)); the drift "
       "is unbounded, so bounded-coefficient experiments (coupled gap) need truncate"},
      {"sqrt-drift", {}, "d = m = 1", "b = sign(x) sqrt|x|, sigma = 0",
       "fails the Lipschitz modulus H(u) = u near 0; H(u) = sqrt(u) works"},
  };
  return entries;
}

namespace {

double param_or(const std::map<std::string, double>& params, const std::string& key,
                double fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

int int_param(const std::map<std::string, double>& params, const std::string& key) {
  const double v = param_or(params, key, 1.0);
  if (v != std::floor(v) || v < 1.0) throw ParameterError(key + " must be a positive integer");
  return static_cast<int>(v);
}

}  // namespace

CoefficientField make(const std::string& name, const std::map<std::string, double>& params) {
  if (name == "brownian") return brownian(int_param(params, "d"));
  if (name == "rotational") return rotational(param_or(params, "r", 1.0));
  if (name == "ou") return ou(param_or(params, "a", -1.0), int_param(params, "d"));
  if (name == "cubic") return cubic();
  if (name == "sqrt-drift") return sqrt_drift();
  throw ParameterError("unknown model '" + name + "'");
}

CoefficientField parse(std::string_view spec) {
  const auto open = spec.find('(');
  if (open == std::string_view::npos) return make(std::string(spec));
  if (spec.back() != ')') throw ParameterError("malformed model spec '" + std::string(spec) + "'");
  const std::string name(spec.substr(0, open));
  std::string_view arg = spec.substr(open + 1, spec.size() - open - 2);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), value);
  if (ec != std::errc() || ptr != arg.data() + arg.size())
    throw ParameterError("malformed model parameter in '" + std::string(spec) + "'");
  if (name == "rotational") return rotational(value);
  if (name == "ou") return ou(value);
  if (name == "brownian") return make(name, {{"d", value}});
  throw ParameterError("model '" + name + "' takes no parameter");
}

}  // namespace ldp::models
