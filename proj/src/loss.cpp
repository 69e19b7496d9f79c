// Copyright 2026 The pedcrit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pedcrit/loss.hpp"

#include "pedcrit/error.hpp"
#include "pedcrit/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace pedcrit
{

namespace
{

std::string format_number(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

void LossParams::validate() const
{
  if (!(alpha > 0.0)) {
    throw DomainError("alpha must be > 0");
  }
  if (!(gamma >= kappa && kappa >= 0.0)) {
    throw DomainError("need gamma >= kappa >= 0");
  }
  if (!(eps > 0.0 && eps < 0.5)) {
    throw DomainError("eps must lie in (0, 0.5)");
  }
}

LossEval focal_loss(double p, const LossParams & params)
{
  return safety_focal_loss(p, 0.0, params);
}

LossEval safety_focal_loss(double p, double kappa, const LossParams & params)
{
  if (std::isnan(p)) {
    throw DomainError("probability is NaN");
  }
  if (!(kappa >= 0.0 && kappa <= params.gamma)) {
    throw DomainError(
      "kappa must lie in [0, gamma=" + std::to_string(params.gamma) + "], got " +
      std::to_string(kappa));
  }
  const double q = std::clamp(p, params.eps, 1.0 - params.eps);
  const double exponent = params.gamma - kappa;
  const double log_p = std::log(q);
  const double modulating = exponent == 0.0 ? 1.0 : std::exp(exponent * std::log1p(-q));
  const double a = params.alpha;

  LossEval out;
  out.value = -a * modulating * log_p;
  out.d_dp = a * modulating * (exponent * log_p / (1.0 - q) - 1.0 / q);
  out.d_dlogit = a * modulating * (exponent * q * log_p - (1.0 - q));
  return out;
}

BatchLoss batch_loss(const std::vector<LossItem> & items, const LossParams & params)
{
  BatchLoss out;
  out.per_item.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto & item = items[i];
    double kappa = 0.0;
    if (item.class_name == kPedestrianClass) {
      if (!item.kappa) {
        throw MissingAnnotationError(
          "pedestrian item " + std::to_string(i) + " has no criticality value");
      }
      kappa = *item.kappa;
    }
    out.per_item.push_back(safety_focal_loss(item.p, kappa, params));
    out.total += out.per_item.back().value;
  }
  return out;
}

LossTable emit_loss_curves(
  const LossParams & params, const std::vector<double> & kappas, double p_min, double p_max,
  int steps)
{
  if (steps < 2) {
    throw DomainError("loss table needs at least 2 grid points");
  }
  if (!(p_min > 0.0 && p_min < p_max && p_max < 1.0)) {
    throw DomainError("need 0 < p_min < p_max < 1");
  }
  LossTable table;
  table.kappas = kappas;
  table.safety.resize(kappas.size());
  for (int i = 0; i < steps; ++i) {
    const double p = p_min + (p_max - p_min) * static_cast<double>(i) / (steps - 1);
    table.p.push_back(p);
    table.focal.push_back(focal_loss(p, params).value);
    for (std::size_t k = 0; k < kappas.size(); ++k) {
      table.safety[k].push_back(safety_focal_loss(p, kappas[k], params).value);
    }
  }
  return table;
}

std::string LossTable::to_csv() const
{
  std::string out = "p,FL";
  for (const double k : kappas) {
    out += ",FL_kappa=" + format_number(k);
  }
  out += "\n";
  for (std::size_t i = 0; i < p.size(); ++i) {
    out += format_number(p[i]) + "," + format_number(focal[i]);
    for (const auto & column : safety) {
      out += "," + format_number(column[i]);
    }
    out += "\n";
  }
  return out;
}

}  // namespace pedcrit
