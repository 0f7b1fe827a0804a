#include "doctest.h"

#include <cmath>

#include "cclt/dist.hpp"
#include "cclt/errors.hpp"

using namespace cclt::dist;

namespace {

const Distribution kExample{{{3, 0, 0.1}, {3, 2, 0.9}}};

bool has_kind(const std::vector<Violation>& v, ViolationKind k) {
  for (const auto& x : v) {
    if (x.kind == k) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("validate accepts the example law and reports each broken invariant") {
  CHECK(validate(kExample).empty());

  const auto isolated = validate({{{0, 1, 1.0}}});
  REQUIRE(has_kind(isolated, ViolationKind::kIsolatedMass));
  CHECK(isolated.back().message == "sum_theta p(0,theta) >= 1");

  const auto dup = validate({{{2, 1, 0.5}, {2, 1, 0.5}}});
  REQUIRE(dup.size() == 1);
  CHECK(dup[0].kind == ViolationKind::kDuplicateAtom);
  CHECK(dup[0].message.find("duplicate atom") == 0);
  CHECK(dup[0].atoms.size() == 2);

  const auto sum = validate({{{3, 0, 0.1}, {3, 2, 0.8}}});
  REQUIRE(has_kind(sum, ViolationKind::kMassSum));
  CHECK(sum[0].message.find("masses sum to 0.9") == 0);

  CHECK(has_kind(validate({}), ViolationKind::kEmpty));
  CHECK(has_kind(validate({{{-1, 0, 1.0}}}), ViolationKind::kNegativeValue));
  CHECK(has_kind(validate({{{1, 0, 0.0}, {2, 0, 1.0}}}), ViolationKind::kNonPositiveMass));
  CHECK(has_kind(validate({{{1, 0, 1.5}, {2, 0, -0.5}}}), ViolationKind::kMassAboveOne));
  CHECK_THROWS_AS(require_valid({{{2, 1, 0.5}, {2, 1, 0.5}}}), InvalidDistribution);
}

TEST_CASE("mean_degree") {
  CHECK(mean_degree(kExample) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(mean_degree({{{1, 1, 0.5}, {3, 1, 0.5}}}) == 2.0);
  CHECK_THROWS_AS(mean_degree({{{0, 0, 1.0}}}), std::domain_error);
}

TEST_CASE("realize_rounded apportions and repairs parity") {
  const auto s = realize_rounded(kExample, 10);
  CHECK(s.degrees == std::vector<int>(10, 3));
  CHECK(s.thresholds == std::vector<int>{0, 2, 2, 2, 2, 2, 2, 2, 2, 2});
  CHECK_FALSE(s.parity_fixed_node);

  const auto odd = realize_rounded({{{1, 1, 1.0}}}, 3);
  CHECK(odd.degrees == std::vector<int>{1, 1, 2});
  REQUIRE(odd.parity_fixed_node);
  CHECK(*odd.parity_fixed_node == 2);

  const auto c = count(realize_rounded({{{2, 1, 0.25}, {4, 2, 0.75}}}, 8));
  CHECK(c.counts.at({2, 1}) == 2);
  CHECK(c.counts.at({4, 2}) == 6);
}

TEST_CASE("realize_rounded counts stay within one of n p and sum to n") {
  const Distribution law{{{1, 0, 0.13}, {2, 1, 0.29}, {5, 3, 0.31}, {7, 2, 0.27}}};
  for (std::int64_t n : {1, 7, 33, 100, 999, 12345}) {
    auto seq = realize_rounded(law, n);
    if (seq.parity_fixed_node) --seq.degrees[*seq.parity_fixed_node];
    const auto c = count(seq);
    std::int64_t total = 0;
    for (const auto& a : law.atoms) {
      const auto it = c.counts.find({a.degree, a.threshold});
      const std::int64_t u = it == c.counts.end() ? 0 : it->second;
      CHECK(std::abs(static_cast<double>(u) - static_cast<double>(n) * a.mass) <= 1.0);
      total += u;
    }
    CHECK(total == n);
  }
}

TEST_CASE("parity repair touches one node by one, only for odd sums") {
  for (std::int64_t n = 1; n < 40; ++n) {
    const auto seq = realize_sampled({{{1, 0, 0.4}, {3, 1, 0.6}}}, n, 99 + n);
    CHECK(seq.degree_sum() % 2 == 0);
    int changed = 0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const int base = seq.thresholds[i] == 0 ? 1 : 3;
      if (seq.degrees[i] != base) {
        ++changed;
        CHECK(seq.degrees[i] == base + 1);
        CHECK(seq.parity_fixed_node == i);
      }
    }
    CHECK(changed == (seq.parity_fixed_node ? 1 : 0));
  }
}

TEST_CASE("realize_sampled") {
  const auto point = realize_sampled({{{3, 2, 1.0}}}, 5, 123);
  int fours = 0;
  for (int d : point.degrees) fours += d == 4;
  CHECK(fours == 1);
  CHECK(point.thresholds == std::vector<int>(5, 2));

  CHECK(realize_sampled({{{1, 0, 1.0}}}, 2, 7).degrees == std::vector<int>{1, 1});
  CHECK(realize_sampled(kExample, 50, 5).thresholds == realize_sampled(kExample, 50, 5).thresholds);

  // Multinomial 3-sigma band on the seed fraction.
  const std::int64_t n = 10000;
  const auto c = count(realize_sampled(kExample, n, 1));
  const double frac = static_cast<double>(c.counts.at({3, 0})) / n;
  CHECK(std::abs(frac - 0.1) < 3.0 * std::sqrt(0.1 * 0.9 / n));
}

TEST_CASE("presets") {
  CHECK(preset_bootstrap({{3, 1.0}}, 2, 0.1) == kExample);
  CHECK_THROWS_AS(preset_bootstrap({{3, 1.0}}, 2, 1.0), std::invalid_argument);
  const auto four = preset_bootstrap({{2, 0.5}, {4, 0.5}}, 1, 0.2);
  REQUIRE(four.atoms.size() == 4);
  CHECK(four.mass(2, 0) == doctest::Approx(0.1));
  CHECK(four.mass(2, 1) == doctest::Approx(0.4));
  CHECK(four.mass(4, 0) == doctest::Approx(0.1));
  CHECK(four.mass(4, 1) == doctest::Approx(0.4));

  CHECK(preset_kcore({{3, 1.0}}, 3) == Distribution{{{3, 0, 1.0}}});
  CHECK(preset_kcore({{5, 1.0}}, 3) == Distribution{{{5, 2, 1.0}}});
  CHECK(preset_kcore({{1, 0.5}, {4, 0.5}}, 2) == Distribution{{{1, 0, 0.5}, {4, 2, 0.5}}});
}

TEST_CASE("JSON and inline formats") {
  const auto doc = nlohmann::json::parse(R"([{"d":3,"theta":0,"p":0.1},{"d":3,"theta":2,"p":0.9}])");
  CHECK(from_json(doc) == kExample);
  CHECK(from_json(to_json(kExample)) == kExample);
  CHECK(parse_inline("3:0:0.1,3:2:0.9") == kExample);

  try {
    from_json(nlohmann::json::parse(R"([{"d":3,"theta":0,"p":1.0,"weight":2}])"));
    FAIL("expected ConfigError");
  } catch (const cclt::ConfigError& e) {
    REQUIRE(e.problems().size() == 1);
    CHECK(e.problems()[0] == "distribution[0]: unknown key \"weight\"");
  }
  CHECK_THROWS_AS(from_json(nlohmann::json::parse(R"([{"d":3.5,"theta":0,"p":1}])")),
                  cclt::ConfigError);
  CHECK_THROWS_AS(parse_inline("3:0"), cclt::ConfigError);
  CHECK_THROWS_AS(load("/nonexistent/dist.json"), cclt::ConfigError);
}
