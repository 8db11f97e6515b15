// Copyright 2026 The Datavoid Authors
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

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

namespace datavoid {

// 2x2 confusion matrix; which class is "positive" is up to the caller.
struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const noexcept { return tp + fp + fn + tn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

// Relabels the negative class as positive.
ConfusionMatrix swap_positive_class(const ConfusionMatrix& cm) noexcept;

// Fractions in [0, 1] at full precision. Undefined values are empty and
// carry a reason.
struct Metrics {
  std::optional<double> precision;
  std::optional<double> recall;
  double accuracy = 0.0;
  std::optional<double> f1;
  std::string precision_reason;
  std::string recall_reason;
  std::string f1_reason;
};

// Throws a validation Error when the matrix is empty.
Metrics compute_metrics(const ConfusionMatrix& cm);

// "76.09" style: percent with two decimals.
std::string format_percent(double fraction);

// Display form: percentages rounded to two decimals, null where undefined.
nlohmann::json to_json(const Metrics& m);
nlohmann::json to_json(const ConfusionMatrix& cm);

}  // namespace datavoid
