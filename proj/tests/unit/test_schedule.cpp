#include <doctest.h>

#include <cmath>
#include <string>

#include "sgdm/errors.hpp"
#include "sgdm/schedule.hpp"
#include "support.hpp"

using namespace sgdm;

TEST_CASE("step sizes per variant") {
  CHECK(step_size(StepSchedule::polynomial(1, 0, 1), 2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(step_size(StepSchedule::constant(0.02), 1000000) == 0.02);
  CHECK(step_size(StepSchedule::polynomial(0.1, 9, 0.5), 1) ==
        doctest::Approx(0.1 / std::sqrt(10.0)).epsilon(1e-15));
  CHECK(step_size(StepSchedule::polynomial(0.1, 9, 0.5), 1) == doctest::Approx(0.0316228).epsilon(1e-6));
}

TEST_CASE("explicit lists") {
  auto s = StepSchedule::explicit_list({0.5, 0.5, 0.25});
  CHECK(s.length() == 3);
  CHECK(s(3) == 0.25);
  CHECK_THROWS_AS(s(4), ScheduleExhausted);
  CHECK_THROWS_AS(StepSchedule::explicit_list({0.1, 0.2}), InvalidArgument);
  CHECK_THROWS_AS(StepSchedule::explicit_list({0.1, -1.0}), InvalidArgument);
  CHECK_THROWS_AS(StepSchedule::explicit_list({}), InvalidArgument);
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(StepSchedule::polynomial(0, 0, 1), InvalidArgument);
  CHECK_THROWS_AS(StepSchedule::polynomial(1, -1, 1), InvalidArgument);
  CHECK_THROWS_AS(StepSchedule::polynomial(1, 0, 1.5), InvalidArgument);
  CHECK_THROWS_AS(StepSchedule::polynomial(1, 0, 0), InvalidArgument);
  CHECK_THROWS_AS(StepSchedule::constant(0), InvalidArgument);
  CHECK_THROWS(step_size(StepSchedule::constant(1), 0));
}

TEST_CASE("partial sums") {
  const auto h = StepSchedule::polynomial(1, 0, 1);
  CHECK(partial_sum_delta(h, 7, 7) == 0.0);
  CHECK(partial_sum_delta(h, 2, 4) == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  CHECK(partial_sum_delta(h, 1, 2) == 1.0);
  CHECK_THROWS_AS(partial_sum_delta(h, 5, 4), InvalidRange);
  CHECK(cumulative_delta(h, 3) == doctest::Approx(1.0 + 0.5 + 1.0 / 3.0));
}

TEST_CASE("partial sums are additive") {
  for (int rep = 0; rep < 200; ++rep) {
    const auto s = StepSchedule::polynomial(testing_support::uniform(0.01, 2.0),
                                            testing_support::uniform(0.0, 10.0),
                                            testing_support::uniform(0.3, 1.0));
    const auto m = static_cast<std::size_t>(testing_support::uniform(1, 50));
    const auto n = m + static_cast<std::size_t>(testing_support::uniform(0, 50));
    const auto p = n + static_cast<std::size_t>(testing_support::uniform(0, 50));
    CHECK(partial_sum_delta(s, m, n) + partial_sum_delta(s, n, p) ==
          doctest::Approx(partial_sum_delta(s, m, p)).epsilon(1e-13));
  }
}

TEST_CASE("global regime") {
  CHECK(validate_schedule(StepSchedule::polynomial(1, 0, 0.75), GlobalRegime{}).ok());
  const auto half = validate_schedule(StepSchedule::polynomial(1, 0, 0.5), GlobalRegime{});
  CHECK(half.verdict == Verdict::invalid);
  REQUIRE(half.failed.size() == 1);
  CHECK(half.failed[0].find("divergent") != std::string::npos);
}

TEST_CASE("local-rate regime") {
  const auto r = validate_schedule(StepSchedule::polynomial(1, 0, 2.0 / 3.0), LojaRegime{0.6});
  CHECK(r.verdict == Verdict::invalid);
  CHECK(r.failed[0].find("(2/3, 1]") != std::string::npos);
  // cap at gamma = 0.9 is 0.8 / 0.2 = 4
  CHECK(loja_r_cap(0.9) == doctest::Approx(4.0));
  CHECK(validate_schedule(StepSchedule::polynomial(1, 0, 0.9), LojaRegime{3.9}).ok());
  CHECK_FALSE(validate_schedule(StepSchedule::polynomial(1, 0, 0.9), LojaRegime{4.0}).ok());
  CHECK(validate_schedule(StepSchedule::polynomial(1, 0, 1.0), LojaRegime{1e6}).ok());
  CHECK_FALSE(validate_schedule(StepSchedule::polynomial(1, 0, 1.0), LojaRegime{0.5}).ok());
}

TEST_CASE("growth-function regime") {
  const auto pow_ok = validate_schedule(StepSchedule::polynomial(1, 0, 0.8), RateRegime{PowerGrowth{1.0}});
  CHECK(pow_ok.ok());  // cap 0.6 / 0.4 = 1.5
  CHECK_FALSE(validate_schedule(StepSchedule::polynomial(1, 0, 0.8), RateRegime{PowerGrowth{2.0}}).ok());
  CHECK(validate_schedule(StepSchedule::polynomial(0.5, 0, 1.0), RateRegime{ExpGrowth{1.0, 0.9}}).ok());
  CHECK_FALSE(validate_schedule(StepSchedule::polynomial(0.5, 0, 1.0), RateRegime{ExpGrowth{1.0, 1.0}}).ok());
  CHECK_FALSE(validate_schedule(StepSchedule::polynomial(0.5, 0, 0.99), RateRegime{ExpGrowth{0.0, 0.1}}).ok());
}

TEST_CASE("constant and explicit schedules") {
  const auto c = StepSchedule::constant(0.01);
  CHECK(validate_schedule(c, GlobalRegime{}).verdict == Verdict::invalid);
  CHECK(validate_schedule(c, LojaRegime{1.0}).verdict == Verdict::invalid);
  CHECK(validate_schedule(c, RateRegime{PowerGrowth{1.0}}).verdict == Verdict::invalid);
  CHECK(validate_schedule(StepSchedule::explicit_list({1.0}), GlobalRegime{}).verdict ==
        Verdict::indeterminate);
}
