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

#include <doctest.h>

#include <cmath>

#include "datavoid/error.hpp"
#include "datavoid/metrics.hpp"
#include "datavoid/rng.hpp"

using namespace datavoid;

namespace {

// Full-precision percent; the published figures are within rounding of it.
double pct(double fraction) { return fraction * 100.0; }

}  // namespace

TEST_CASE("bot detection table") {
  const auto m = compute_metrics({487, 153, 78, 465});
  CHECK(std::abs(pct(*m.precision) - 76.09) <= 0.005);
  CHECK(std::abs(pct(*m.recall) - 86.19) <= 0.005);
  CHECK(std::abs(pct(m.accuracy) - 80.47) <= 0.005);
  CHECK(std::abs(pct(*m.f1) - 80.83) <= 0.005);
  CHECK(format_percent(*m.precision) == "76.09");
}

TEST_CASE("leaning agreement table") {
  const auto m = compute_metrics({32, 11, 2, 25});
  CHECK(format_percent(*m.precision) == "74.42");
  CHECK(format_percent(*m.recall) == "94.12");
  CHECK(format_percent(m.accuracy) == "81.43");
  CHECK(format_percent(*m.f1) == "83.12");
}

TEST_CASE("perfect classifier") {
  const auto m = compute_metrics({10, 0, 0, 10});
  CHECK(*m.precision == 1.0);
  CHECK(*m.recall == 1.0);
  CHECK(m.accuracy == 1.0);
  CHECK(*m.f1 == 1.0);
}

TEST_CASE("undefined values are null with a reason") {
  const auto m = compute_metrics({0, 0, 5, 5});
  CHECK_FALSE(m.precision);
  CHECK_FALSE(m.precision_reason.empty());
  CHECK(*m.recall == 0.0);
  CHECK_FALSE(m.f1);
  CHECK_FALSE(m.f1_reason.empty());
  const auto j = to_json(m);
  CHECK(j.at("precision").is_null());
  CHECK(j.at("accuracy") == 50.0);

  const auto no_pos = compute_metrics({0, 3, 0, 7});
  CHECK_FALSE(no_pos.recall);
  CHECK_FALSE(no_pos.recall_reason.empty());
}

TEST_CASE("an empty matrix is a validation error") {
  try {
    compute_metrics({});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::validation);
  }
}

TEST_CASE("display json rounds to two decimals") {
  const auto j = to_json(compute_metrics({487, 153, 78, 465}));
  CHECK(j.at("precision") == 76.09);
  CHECK(j.at("recall") == 86.19);
  CHECK(j.at("accuracy") == 80.47);
  CHECK(j.at("f1") == 80.83);
}

TEST_CASE("swapping the positive class preserves accuracy") {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const ConfusionMatrix cm{rng.below(500), rng.below(500), rng.below(500), 1 + rng.below(500)};
    const auto swapped = swap_positive_class(cm);
    CHECK(swapped == ConfusionMatrix{cm.tn, cm.fn, cm.fp, cm.tp});
    CHECK(swap_positive_class(swapped) == cm);
    CHECK(compute_metrics(swapped).accuracy == compute_metrics(cm).accuracy);
  }
}

TEST_CASE("f1 is the harmonic mean when defined") {
  Rng rng(6);
  for (int i = 0; i < 1000; ++i) {
    const ConfusionMatrix cm{1 + rng.below(100), rng.below(100), rng.below(100), rng.below(100)};
    const auto m = compute_metrics(cm);
    const double p = *m.precision, r = *m.recall;
    CHECK(*m.f1 == doctest::Approx(2 * p * r / (p + r)));
    CHECK(m.accuracy >= 0.0);
    CHECK(m.accuracy <= 1.0);
  }
}
