#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ldp/field.hpp"

namespace ldp::models {

/// b = 0, sigma = I_d.
CoefficientField brownian(int d = 1);

/// d = 2, m = 1: sigma(x) = |x|^r (-x2, x1)^T, b(x) = -|x|^{2r} x.
/// Not globally Lipschitz, yet sigma^T x = 0 and ||sigma||^2 + 2<x,b> =
/// -|x|^{2r+2}, so the growth condition holds with a zero left-hand side.
CoefficientField rotational(double r);

/// b(x) = a x, sigma = I_d.
CoefficientField ou(double a, int d = 1);

/// d = m = 1: b(x) = -x^3, sigma = 1.
CoefficientField cubic();

/// d = m = 1: b(x) = sign(x) sqrt|x|, sigma = 0. Not Lipschitz at 0.
CoefficientField sqrt_drift();

struct ModelInfo {
  std::string name;
  std::vector<std::string> params;
  std::string dims;
  std::string description;
  std::string conditions;
};

const std::vector<ModelInfo>& catalog();

/// Builds a registry model from its name and named parameters
/// (missing parameters take their defaults: d = 1, r = 1, a = -1).
CoefficientField make(const std::string& name, const std::map<std::string, double>& params = {});

/// Accepts "brownian", "cubic", "rotational(0.5)", "ou(-1)" and similar.
CoefficientField parse(std::string_view spec);

}  // namespace ldp::models
