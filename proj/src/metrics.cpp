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

#include "datavoid/metrics.hpp"

#include <cstdio>

#include "datavoid/error.hpp"

namespace datavoid {

ConfusionMatrix swap_positive_class(const ConfusionMatrix& cm) noexcept {
  return {cm.tn, cm.fn, cm.fp, cm.tp};
}

Metrics compute_metrics(const ConfusionMatrix& cm) {
  if (cm.total() == 0) {
    throw validation_error("confusion matrix is empty");
  }
  Metrics m;
  const auto d = [](std::uint64_t v) { return static_cast<double>(v); };
  if (cm.tp + cm.fp > 0) {
    m.precision = d(cm.tp) / d(cm.tp + cm.fp);
  } else {
    m.precision_reason = "no positive predictions (tp + fp = 0)";
  }
  if (cm.tp + cm.fn > 0) {
    m.recall = d(cm.tp) / d(cm.tp + cm.fn);
  } else {
    m.recall_reason = "no positive examples (tp + fn = 0)";
  }
  m.accuracy = d(cm.tp + cm.tn) / d(cm.total());
  if (m.precision && m.recall) {
    const double denom = *m.precision + *m.recall;
    if (denom > 0.0) {
      m.f1 = 2.0 * *m.precision * *m.recall / denom;
    } else {
      m.f1_reason = "precision + recall = 0";
    }
  } else {
    m.f1_reason = "precision or recall undefined";
  }
  return m;
}

std::string format_percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", fraction * 100.0);
  return buf;
}

nlohmann::json to_json(const Metrics& m) {
  auto pct = [](const std::optional<double>& v) -> nlohmann::json {
    if (!v) return nullptr;
    return std::stod(format_percent(*v));
  };
  nlohmann::json j = {{"precision", pct(m.precision)},
                      {"recall", pct(m.recall)},
                      {"accuracy", pct(m.accuracy)},
                      {"f1", pct(m.f1)}};
  if (!m.precision) j["precision_reason"] = m.precision_reason;
  if (!m.recall) j["recall_reason"] = m.recall_reason;
  if (!m.f1) j["f1_reason"] = m.f1_reason;
  return j;
}

nlohmann::json to_json(const ConfusionMatrix& cm) {
  return {{"tp", cm.tp}, {"fp", cm.fp}, {"fn", cm.fn}, {"tn", cm.tn}};
}

}  // namespace datavoid
