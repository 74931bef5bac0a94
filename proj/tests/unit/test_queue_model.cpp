#include <algorithm>

#include "doctest.h"
#include "syncq/error.hpp"
#include "syncq/monte_carlo.hpp"
#include "syncq/queue_model.hpp"

using namespace syncq;

namespace {

QueueState state(IntVector q) { return QueueState{std::move(q), 0}; }
ArrivalVector arrivals(std::vector<std::uint8_t> a) { return ArrivalVector{std::move(a)}; }

}  // namespace

TEST_CASE("greedy_policy serves only when every queue is nonempty") {
  CHECK(greedy_policy(state({1, 1, 1})) == 1);
  CHECK(greedy_policy(state({3, 0, 2})) == 0);
  CHECK(greedy_policy(state({0, 0})) == 0);
}

TEST_CASE("step evaluates q - 1 m v + a") {
  CHECK(step(state({1, 1}), {1, 1}, arrivals({0, 1})).q == IntVector{0, 1});
  CHECK(step(state({1, 1}), {1, 0}, arrivals({0, 0})).q == IntVector{1, 1});
  CHECK(step(state({2, 3, 1}), {1, 1}, arrivals({1, 0, 1})).q == IntVector{2, 2, 1});
  CHECK(step(state({0, 4}), {0, 1}, arrivals({1, 1})).q == IntVector{1, 5});
  CHECK(step(state({2, 2}), {0, 1}, arrivals({0, 0})).t == 1);
}

TEST_CASE("step rejects constraint violations and malformed input") {
  CHECK_THROWS_AS(step(state({1, 0, 1}), {1, 1}, arrivals({0, 0, 0})), UsageError);
  CHECK_THROWS_AS(step(state({1, 1}), {0, 1}, arrivals({0, 0, 0})), UsageError);
  CHECK_THROWS_AS(step(state({1, 1}), {2, 1}, arrivals({0, 0})), UsageError);
}

TEST_CASE("SystemParams validation") {
  CHECK_NOTHROW(SystemParams::make(2, Rational(1, 4), Rational(1, 2)));
  CHECK_THROWS_AS(SystemParams::make(1, Rational(1, 4), Rational(1, 2)), UsageError);
  CHECK_THROWS_AS(SystemParams::make(2, Rational(0), Rational(1, 2)), UsageError);
  CHECK_THROWS_AS(SystemParams::make(2, Rational(1), Rational(1)), UsageError);
  CHECK_THROWS_AS(SystemParams::make(2, Rational(1, 2), Rational(1, 2)), UsageError);
  CHECK_THROWS_AS(SystemParams::make(2, Rational(1, 4), Rational(0)), UsageError);
  CHECK_THROWS_AS(SystemParams::make(2, Rational(1, 4), Rational(3, 2)), UsageError);
  CHECK(SystemParams::make(3, Rational(1, 3), Rational(1)).p_tilde() == Rational(2, 3));
  CHECK_NOTHROW(SystemParams::test_fixture(2, Rational(0), Rational(1)));
  CHECK_NOTHROW(SystemParams::test_fixture(2, Rational(1), Rational(1)));
  CHECK_THROWS_AS(SystemParams::test_fixture(2, Rational(2), Rational(1)), UsageError);
}

TEST_CASE("sample_arrivals") {
  RandomStream s(3, 0);
  const auto all = SystemParams::test_fixture(4, Rational(1), Rational(1));
  const auto none = SystemParams::test_fixture(4, Rational(0), Rational(1));
  CHECK(sample_arrivals(all, s).a == std::vector<std::uint8_t>{1, 1, 1, 1});
  CHECK(sample_arrivals(none, s).a == std::vector<std::uint8_t>{0, 0, 0, 0});

  const auto half = SystemParams::make(2, Rational(1, 2), Rational(1));
  const BernoulliSampler coin(half.p);
  std::vector<std::uint8_t> buffer(2);
  long ones[2] = {0, 0};
  const int samples = 1000000;
  for (int i = 0; i < samples; ++i) {
    sample_arrivals(coin, s, buffer);
    ones[0] += buffer[0];
    ones[1] += buffer[1];
  }
  // 4 sigma of a Binomial(10^6, 1/2) mean is 0.002.
  CHECK(std::abs(ones[0] / double(samples) - 0.5) <= 0.002);
  CHECK(std::abs(ones[1] / double(samples) - 0.5) <= 0.002);
}

TEST_CASE("decompose and recompose") {
  auto d = decompose(state({3, 1, 2}));
  CHECK(d.q_par == 1);
  CHECK(d.q_perp.components() == IntVector{2, 0, 1});
  d = decompose(state({5, 5}));
  CHECK(d.q_par == 5);
  CHECK(d.q_perp.is_origin());
  d = decompose(state({0, 4}));
  CHECK(d.q_par == 0);
  CHECK(d.q_perp.components() == IntVector{0, 4});

  CHECK(recompose(1, ExcessState::from_canonical({2, 0, 1})).q == IntVector{3, 1, 2});
  CHECK(recompose(0, ExcessState::origin(2)).q == IntVector{0, 0});
  CHECK(recompose(7, ExcessState::from_canonical({0, 3})).q == IntVector{7, 10});
  CHECK_THROWS_AS(recompose(-1, ExcessState::origin(2)), UsageError);
  CHECK_THROWS_AS(ExcessState::from_canonical({1, 2}), UsageError);
}

TEST_CASE("property: recompose(decompose(q)) == q") {
  RandomStream s(17, 0);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto d = 2 + s.uniform_below(5);
    IntVector q(d);
    for (auto& c : q) c = static_cast<std::int64_t>(s.uniform_below(50));
    const auto parts = decompose(state(q));
    CHECK(recompose(parts.q_par, parts.q_perp).q == q);
  }
}

TEST_CASE("property: greedy trajectories stay nonnegative") {
  const auto params = SystemParams::make(3, Rational(1, 3), Rational(2, 3));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomStream arrivals_rng(seed, 0, 0), service_rng(seed, 0, 1);
    const BernoulliSampler arrive(params.p), serve(params.m_bar);
    QueueState q = state({0, 0, 0});
    ArrivalVector a{std::vector<std::uint8_t>(3)};
    for (int t = 0; t < 2000; ++t) {
      sample_arrivals(arrive, arrivals_rng, a.a);
      q = step(q, {greedy_policy(q), static_cast<std::uint8_t>(serve(service_rng))}, a);
      REQUIRE(*std::min_element(q.q.begin(), q.q.end()) >= 0);
    }
  }
}

TEST_CASE("property: the excess path does not depend on the control") {
  const auto params = SystemParams::make(3, Rational(1, 2), Rational(3, 4));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SimulateOptions opts;
    opts.record_paths = true;
    opts.initial = {2, 0, 5};
    const auto greedy = simulate_queue(params, PolicyKind::kGreedy, 500, seed, opts);
    const auto random = simulate_queue(params, PolicyKind::kRandomAdmissible, 500, seed, opts);
    const auto never = simulate_queue(params, PolicyKind::kNeverServe, 500, seed, opts);
    CHECK(greedy.excess_path == never.excess_path);
    CHECK(greedy.excess_path == random.excess_path);
    CHECK(greedy.excess_digest == never.excess_digest);
  }
}

TEST_CASE("property: greedy keeps the common level lowest") {
  const auto params = SystemParams::make(2, Rational(1, 3), Rational(1, 2));
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    SimulateOptions opts;
    opts.record_paths = true;
    const auto greedy = simulate_queue(params, PolicyKind::kGreedy, 300, seed, opts);
    const auto random = simulate_queue(params, PolicyKind::kRandomAdmissible, 300, seed, opts);
    const auto never = simulate_queue(params, PolicyKind::kNeverServe, 300, seed, opts);
    for (std::size_t t = 0; t < greedy.q_par_path.size(); ++t) {
      REQUIRE(greedy.q_par_path[t] <= random.q_par_path[t]);
      REQUIRE(random.q_par_path[t] <= never.q_par_path[t]);
    }
  }
}
