#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "storeplan/peakshave/flatten.hpp"

using namespace storeplan;

namespace {

std::vector<double> random_profile(std::mt19937& rng, int K) {
  std::uniform_real_distribution<double> u(0, 100);
  std::vector<double> y(K);
  for (auto& v : y) v = u(rng);
  return y;
}

double mean(const std::vector<double>& y) { return std::accumulate(y.begin(), y.end(), 0.0) / y.size(); }

}  // namespace

TEST_CASE("flat load needs no storage") {
  const std::vector<double> y{5, 5, 5, 5};
  for (double eta : {0.0, 0.5, 1.0}) {
    const auto r = flatten_load(y, eta);
    CHECK(r.flattened_peak == doctest::Approx(5));
    CHECK(r.required_power == doctest::Approx(0).epsilon(1e-9));
  }
  const auto b = storage_upper_bound(std::vector<std::vector<double>>{y}, StorageSpec{});
  CHECK(b.power == doctest::Approx(0).epsilon(1e-9));
  CHECK_FALSE(b.duration.has_value());
}

TEST_CASE("small hand-checked profiles") {
  CHECK(flatten_load(std::vector<double>{0, 2}, 1.0).flattened_peak == doctest::Approx(1));
  const std::vector<double> y{4, 2};
  CHECK(flattened_peak_closed_form(y, 0.25) == doctest::Approx(3.6));
  const auto r = flatten_load(y, 0.25);
  CHECK(r.flattened_peak == doctest::Approx(3.6));
  CHECK(r.required_power == doctest::Approx(1.6));
  // charge 1.6 MW at eta_c = 0.5 stores 0.8 MWh
  CHECK(r.required_energy == doctest::Approx(0.8));
  // a profile where the best m lies below eta * K
  CHECK(flattened_peak_closed_form(std::vector<double>{10, 1, 1, 1}, 0.5) ==
        doctest::Approx(flatten_load(std::vector<double>{10, 1, 1, 1}, 0.5).flattened_peak).epsilon(1e-12));
}

TEST_CASE("endpoints of the flattened peak") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto y = random_profile(rng, 1 + trial % 24);
    CHECK(std::abs(flattened_peak_closed_form(y, 0.0) - *std::max_element(y.begin(), y.end())) <= 1e-9);
    CHECK(std::abs(flattened_peak_closed_form(y, 1.0) - mean(y)) <= 1e-9);
  }
}

TEST_CASE("closed form equals the LP optimum on random profiles") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const int K = 1 + static_cast<int>(u(rng) * 24);
    const auto y = random_profile(rng, K);
    const double eta = trial % 10 == 0 ? (trial % 20 == 0 ? 0.0 : 1.0) : u(rng);
    const auto r = flatten_load(y, eta);
    CHECK(std::abs(r.flattened_peak - flattened_peak_closed_form(y, eta)) <= 1e-7);
    CHECK(r.flattened_peak >= mean(y) - 1e-9);
    CHECK(r.flattened_peak <= *std::max_element(y.begin(), y.end()) + 1e-9);
    double charged = 0, discharged = 0;
    for (int k = 0; k < K; ++k) {
      CHECK(r.charge[k] >= 0);
      CHECK(r.discharge[k] >= 0);
      charged += r.charge[k];
      discharged += r.discharge[k];
    }
    CHECK(eta * charged - discharged >= -1e-7);
    if (r.required_power > 1e-9) CHECK(r.required_energy / r.required_power <= K + 1e-9);
  }
}

TEST_CASE("flattened peak is nonincreasing, convex and permutation invariant in efficiency") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 300; ++trial) {
    auto y = random_profile(rng, 2 + trial % 23);
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    const double fa = flattened_peak_closed_form(y, a), fb = flattened_peak_closed_form(y, b);
    CHECK(fa >= fb - 1e-9);
    CHECK(flattened_peak_closed_form(y, 0.5 * (a + b)) <= 0.5 * (fa + fb) + 1e-9);
    std::shuffle(y.begin(), y.end(), rng);
    CHECK(std::abs(flattened_peak_closed_form(y, a) - fa) <= 1e-9);
  }
}

TEST_CASE("storage bound takes the worst day") {
  StorageSpec st;
  const std::vector<std::vector<double>> days{{4, 2}, {10, 2, 2, 2}};
  const auto b = storage_upper_bound(days, st);
  const auto d1 = flatten_load(days[1], st);
  CHECK(b.power == doctest::Approx(d1.required_power));
  REQUIRE(b.duration.has_value());
  CHECK(*b.duration > 0);
  CHECK(*b.duration <= 4);

  Tensor3 load(1, 2, 2);
  load(0, 0, 0) = 4;
  load(0, 0, 1) = 2;
  load(0, 1, 0) = 3;
  load(0, 1, 1) = 3;
  const auto t = storage_upper_bound(load, st);
  CHECK(t.power == doctest::Approx(flatten_load(days[0], st).required_power));
}
