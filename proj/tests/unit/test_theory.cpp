#include "doctest.h"

#include <cmath>

#include "cclt/errors.hpp"
#include "cclt/theory.hpp"
#include "oracles.hpp"

using namespace cclt;
using namespace cclt::theory;

namespace {

const dist::Distribution kExample{{{3, 0, 0.1}, {3, 2, 0.9}}};
const dist::Distribution kNoSeed{{{1, 1, 1.0}}};
const dist::Distribution kMixed{
    {{2, 0, 0.05}, {2, 1, 0.15}, {3, 1, 0.2}, {4, 2, 0.3}, {5, 3, 0.2}, {4, 5, 0.1}}};

}  // namespace

TEST_CASE("binomial pmf and tail") {
  CHECK(binom_tail(3, 0.5, 2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(binom_tail(3, 0.9, 1) == doctest::Approx(0.999).epsilon(1e-14));
  for (int d = 0; d <= 30; ++d) {
    CHECK(binom_tail(d, 0.37, 0) == 1.0);
    CHECK(binom_tail(d, 0.37, d + 1) == 0.0);
    for (double z : {0.0, 0.01, 0.2, 0.5, 0.77, 0.999, 1.0}) {
      for (int l = 0; l <= d; ++l) {
        double lower = 0.0;
        for (int r = 0; r < l; ++r) lower += binom_pmf(d, z, r);
        CHECK(std::abs(binom_tail(d, z, l) + lower - 1.0) < 1e-12);
        CHECK(std::abs(binom_tail(d, z, l) - oracle::binom_tail(d, z, l)) < 1e-13);
      }
    }
  }
  CHECK(binom_pmf(3, 0.5, 4) == 0.0);
  CHECK_THROWS_AS(binom_tail(3, 1.5, 1), std::domain_error);
  CHECK_THROWS_AS(binom_pmf(3, -0.1, 1), std::domain_error);
}

TEST_CASE("h_B with the survival cutoff") {
  // Cutoff 3 - 2 + 1 = 2: 0.9 (2 b(3,z,2) + 3 b(3,z,3)) = 2.7 z^2 (2 - z).
  for (double z : {0.0, 0.1, 0.5, 0.8888, 1.0}) {
    CHECK(h_b(kExample, z) == doctest::Approx(2.7 * z * z * (2.0 - z)).epsilon(1e-13));
  }
  CHECK(h_b(kMixed, 0.0) == 0.0);
  CHECK(h_b(kNoSeed, 1.0) == doctest::Approx(dist::mean_degree(kNoSeed)));
  const double seeds_degree = 2 * 0.05;
  CHECK(h_b(kMixed, 1.0) ==
        doctest::Approx(dist::mean_degree(kMixed) - seeds_degree).epsilon(1e-13));
  double prev = 0.0;
  for (int j = 0; j <= 1000; ++j) {
    const double cur = h_b(kMixed, j / 1000.0);
    CHECK(cur >= prev);
    prev = cur;
  }
  CHECK_THROWS_AS(h_b(kExample, 1.01), std::domain_error);
}

TEST_CASE("phi and find_zhat") {
  CHECK(phi(kMixed, 0.0) == 0.0);
  CHECK(phi(kNoSeed, 1.0) == 0.0);

  // phi = 3z^2 - 2.7z^2(2 - z) = z^2 (2.7z - 2.4): roots 0 and 8/9.
  const auto r = find_zhat(kExample);
  CHECK(std::abs(r.z_hat - 8.0 / 9.0) < 1e-9);
  CHECK_FALSE(r.tangency);
  CHECK(r.bracket_lo <= r.z_hat);
  CHECK(r.z_hat <= r.bracket_hi);

  const auto ns = find_zhat(kNoSeed);
  CHECK(ns.z_hat == 1.0);

  // Supremum: no grid zero above the returned root.
  const auto mixed = find_zhat(kMixed);
  CHECK(std::abs(phi(kMixed, mixed.z_hat)) < 1e-10);
  const QuadratureConfig cfg;
  for (double z = 1.0; z > mixed.z_hat + cfg.scan_step; z -= cfg.scan_step) {
    CHECK(phi(kMixed, z) != 0.0);
  }

  // (2,0,.5),(2,1,.5): phi = 2z^2 - z^2 = z^2, only root 0.
  CHECK(find_zhat({{{2, 0, 0.5}, {2, 1, 0.5}}}).z_hat == 0.0);
}

TEST_CASE("tangent root is flagged") {
  // Cutoffs 3 and 2 give phi = z^2 (2z - 1)^2 / 2 (expanded symbolically):
  // a double root at 1/2 with phi > 0 on both sides.
  const dist::Distribution law{{{1, 0, 1.0 / 2}, {4, 2, 1.0 / 3}, {4, 3, 1.0 / 6}}};
  for (double z : {0.1, 0.3, 0.7, 0.95}) {
    CHECK(phi(law, z) == doctest::Approx(z * z * (2 * z - 1) * (2 * z - 1) / 2).epsilon(1e-12));
  }
  const auto r = find_zhat(law);
  CHECK(std::abs(r.z_hat - 0.5) < 1e-9);
  CHECK(r.tangency);
  const auto res = solve(law);
  CHECK_FALSE(res.clt_supported);
  CHECK(res.warnings.size() == 1);

  CHECK_FALSE(find_zhat(kExample).tangency);
}

TEST_CASE("a_hat") {
  CHECK(a_hat(kExample, 0.0) == kExample.seed_fraction());
  CHECK(a_hat(kMixed, 0.0) == kMixed.seed_fraction());
  // 1 - 0.9 beta(3, 8/9, 2) = 95.4 / 729.
  CHECK(a_hat(kExample, std::log(9.0 / 8.0)) == doctest::Approx(95.4 / 729.0).epsilon(1e-13));
  double prev = 0.0;
  for (int j = 0; j <= 200; ++j) {
    const double cur = a_hat(kMixed, j * 0.05);
    CHECK(cur >= prev - 1e-15);
    prev = cur;
  }
  // Bins with theta > d never activate: (4,5) keeps mass 0.1.
  CHECK(a_hat(kMixed, 60.0) == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(a_hat({{{3, 0, 1.0}}}, 0.3) == 1.0);
  CHECK_THROWS_AS(a_hat(kExample, -0.1), std::invalid_argument);

  dist::EmpiricalCounts c;
  c.n = 10;
  c.counts[{3, 0}] = 1;
  c.counts[{3, 2}] = 9;
  CHECK(a_hat_n(c, 0.4) == doctest::Approx(a_hat(kExample, 0.4)).epsilon(1e-14));
  CHECK(a_hat_n(c, 0.0) == 0.1);

  // The printed form starts from 1 - seed fraction.
  CHECK(a_hat_printed(kExample, 0.0) == doctest::Approx(0.9));
}

TEST_CASE("delta") {
  const dist::Distribution one{{{1, 1, 1.0}}};
  for (int j = 0; j <= 200; ++j) {
    const double t = 2.0 * j / 200.0;
    CHECK(std::abs(delta(one, 1, 1, 1, t).value - std::expm1(t)) <= 1e-8);
  }
  for (int d = 1; d <= 6; ++d) {
    for (int l = 1; l <= d; ++l) {
      for (double t : {0.05, 0.3, 1.0, 1.7}) {
        const dist::Distribution law{{{d, 1, 1.0}}};
        CHECK(delta(law, d, 1, l, t).value ==
              doctest::Approx(oracle::delta_closed(d, l, t)).epsilon(1e-8));
      }
      CHECK(delta(dist::Distribution{{{d, 1, 1.0}}}, d, 1, l, 0.0).value == 0.0);
    }
    for (int l = d + 1; l <= d + 3; ++l) {
      CHECK(delta(dist::Distribution{{{d, 1, 1.0}}}, d, 1, l, 0.8).value == 0.0);
    }
  }
  CHECK(delta(kExample, 5, 1, 2, 0.5).value == 0.0);  // p(5,1) = 0
}

TEST_CASE("sigma2_a against closed-form Delta and Gauss-Legendre outer integrals") {
  const std::vector<oracle::Atom> ex{{3, 0, 0.1}, {3, 2, 0.9}};
  const std::vector<oracle::Atom> mixed{{2, 0, 0.05}, {2, 1, 0.15}, {3, 1, 0.2},
                                        {4, 2, 0.3},  {5, 3, 0.2},  {4, 5, 0.1}};
  CHECK(sigma2_a(kExample, 0.0).value == 0.0);
  for (double t : {0.05, 0.117783, 0.5, 1.0, 2.0}) {
    CHECK(sigma2_a(kExample, t).value == doctest::Approx(oracle::sigma2(ex, t)).epsilon(1e-7));
    CHECK(sigma2_a(kMixed, t).value == doctest::Approx(oracle::sigma2(mixed, t)).epsilon(1e-7));
  }
  for (int j = 1; j <= 40; ++j) CHECK(sigma2_a(kMixed, 0.05 * j).value >= -1e-7);
}

TEST_CASE("halving abs_tol moves results by less than the error estimate") {
  QuadratureConfig coarse;
  QuadratureConfig fine;
  fine.abs_tol = coarse.abs_tol / 2;
  for (double t : {0.3, 1.2}) {
    const auto a = sigma2_a(kMixed, t, coarse);
    const auto b = sigma2_a(kMixed, t, fine);
    CHECK(std::abs(a.value - b.value) <= a.error + 1e-15);
    const auto da = delta(kMixed, 5, 3, 4, t, coarse);
    const auto db = delta(kMixed, 5, 3, 4, t, fine);
    CHECK(std::abs(da.value - db.value) <= da.error + 1e-15);
  }
}

TEST_CASE("sigma2_binomial") {
  const double b = binom_tail(3, 8.0 / 9.0, 2);
  CHECK(sigma2_binomial(kExample, std::log(9.0 / 8.0)) == doctest::Approx(0.9 * b * (1 - b)));
  CHECK(sigma2_binomial(kExample, 0.0) == 0.0);
}

TEST_CASE("solve") {
  const auto ex = solve(kExample);
  CHECK(ex.lambda == doctest::Approx(3.0));
  CHECK(std::abs(ex.z_hat - 8.0 / 9.0) < 1e-9);
  CHECK(ex.t_star == doctest::Approx(std::log(9.0 / 8.0)).epsilon(1e-9));
  CHECK(ex.a_hat_star == doctest::Approx(95.4 / 729.0).epsilon(1e-8));
  CHECK(ex.sigma2_star == doctest::Approx(oracle::sigma2({{3, 0, 0.1}, {3, 2, 0.9}}, ex.t_star)));
  CHECK(ex.clt_supported);
  CHECK(ex.warnings.empty());

  const auto ns = solve(kNoSeed);
  CHECK(ns.z_hat == 1.0);
  CHECK(ns.t_star == 0.0);
  CHECK(ns.a_hat_star == 0.0);
  CHECK(ns.sigma2_star == 0.0);

  const auto all = solve({{{3, 0, 1.0}}});
  CHECK(all.a_hat_star == 1.0);
  CHECK(std::isinf(all.t_star));
  CHECK(all.t_eval == QuadratureConfig{}.t_max);
  CHECK(all.warnings.size() == 1);

  CHECK_THROWS_AS(solve({{{3, 0, 0.5}}}), dist::InvalidDistribution);
  QuadratureConfig bad;
  bad.abs_tol = 0.0;
  CHECK_THROWS_AS(solve(kExample, bad), std::invalid_argument);
}

TEST_CASE("quadrature failure surfaces as NumericalError") {
  QuadratureConfig shallow;
  shallow.abs_tol = 1e-15;
  shallow.max_depth = 4;
  CHECK_THROWS_AS(sigma2_a(kMixed, 1.5, shallow), NumericalError);
}

TEST_CASE("parallel curve equals the serial reference") {
  std::vector<double> t;
  for (int j = 0; j <= 30; ++j) t.push_back(0.05 * j);
  const auto par = curve(kMixed, t);
  const auto ser = curve_serial(kMixed, t);
  REQUIRE(par.size() == ser.size());
  for (std::size_t i = 0; i < par.size(); ++i) {
    CHECK(par[i].t == ser[i].t);
    CHECK(par[i].a_hat == ser[i].a_hat);
    CHECK(par[i].sigma2 == ser[i].sigma2);
  }
}
