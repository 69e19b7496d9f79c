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

#ifndef PEDCRIT__LOSS_HPP_
#define PEDCRIT__LOSS_HPP_

#include <optional>
#include <string>
#include <vector>

namespace pedcrit
{

struct LossParams
{
  double alpha = 0.25;
  double gamma = 2.0;
  double kappa = 0.0;
  /// Probabilities are clamped to [eps, 1 - eps].
  double eps = 1e-7;

  void validate() const;
};

struct LossEval
{
  double value = 0.0;
  double d_dp = 0.0;
  /// Derivative w.r.t. the pre-sigmoid logit z, p = sigmoid(z).
  double d_dlogit = 0.0;
};

/// FL(p) = -alpha (1 - p)^gamma ln(p). Ignores params.kappa.
LossEval focal_loss(double p, const LossParams & params);

/// FL_kappa(p) = -alpha (1 - p)^(gamma - kappa) ln(p).
///
/// The modulating factor is evaluated as exp(e * log1p(-p)) with
/// e = gamma - kappa, and is exactly 1 when e == 0. Throws DomainError for
/// NaN p or kappa outside [0, gamma]. kappa == 0 shares the focal_loss path,
/// so both agree bit for bit.
LossEval safety_focal_loss(double p, double kappa, const LossParams & params);

struct LossItem
{
  double p = 0.5;
  std::string class_name;
  /// Required for pedestrians; ignored (treated as 0) for other classes.
  std::optional<double> kappa;
};

struct BatchLoss
{
  double total = 0.0;
  std::vector<LossEval> per_item;
};

/// Throws MissingAnnotationError for a pedestrian item without kappa.
BatchLoss batch_loss(const std::vector<LossItem> & items, const LossParams & params);

struct LossTable
{
  std::vector<double> kappas;
  std::vector<double> p;
  std::vector<double> focal;
  /// safety[k][i] = FL_kappas[k](p[i])
  std::vector<std::vector<double>> safety;

  std::string to_csv() const;
};

/// Loss curves over `steps` evenly spaced p in [p_min, p_max].
LossTable emit_loss_curves(
  const LossParams & params, const std::vector<double> & kappas, double p_min = 0.1,
  double p_max = 0.999, int steps = 200);

}  // namespace pedcrit

#endif  // PEDCRIT__LOSS_HPP_
