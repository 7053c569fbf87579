// SPDX-License-Identifier: Apache-2.0
#include "gradsim/engine.hpp"

#include <doctest.h>

#include "gradsim/errors.hpp"
#include "test_support.hpp"

using namespace gradsim;
using gradsim::test::uniform;
using gradsim::test::uniform_int;

namespace {

ModelProfile resnet50_like() {
  ModelProfile m;
  m.name = "resnet50";
  m.gradient_size = 97e6;
  m.backward_time = 0.122;
  m.gamma = 1.05;
  m.bucket_size = 25e6;
  return m;
}

ModelProfile random_model() {
  ModelProfile m;
  m.name = "random";
  m.gradient_size = uniform(1e6, 1e9);
  m.backward_time = uniform(0.01, 1.0);
  m.gamma = uniform(1.0, 1.2);
  m.bucket_size = uniform(1e6, 5e7);
  return m;
}

}  // namespace

TEST_CASE("estimate_syncsgd reproduces the overlapped bucketed model") {
  // 4 workers, 10 Gbps, 0.5 ms latency: max(128.1, 3*33) + 29.4 = 157.5 ms
  const auto est = estimate_syncsgd(resnet50_like(), {4, 1.25e9, 5e-4});
  CHECK(est.total == doctest::Approx(0.1575).epsilon(1e-12));
  CHECK(est.compute == doctest::Approx(0.1281).epsilon(1e-12));
  CHECK(est.comm_overlapped == doctest::Approx(0.099).epsilon(1e-12));
  CHECK(est.comm_exposed == doctest::Approx(0.0294).epsilon(1e-12));
  CHECK(est.encode_decode == 0.0);
  CHECK(est.total == est.compute + est.encode_decode + est.comm_exposed);
}

TEST_CASE("estimate_syncsgd on one worker is the plain backward time") {
  const auto est = estimate_syncsgd(resnet50_like(), {1, 1.25e9, 5e-4});
  CHECK(est.total == 0.122);  // gamma not applied: nothing to overlap
  CHECK(est.compute == 0.122);
  CHECK(est.comm_overlapped == 0.0);
  CHECK(est.comm_exposed == 0.0);
}

TEST_CASE("free communication leaves only the contended backward pass") {
  const auto est = estimate_syncsgd(resnet50_like(), {4, 1e30, 0.0});
  CHECK(est.total == doctest::Approx(1.05 * 0.122).epsilon(1e-9));
}

TEST_CASE("estimate_compressed follows the serial path") {
  const ModelProfile m = resnet50_like();
  const NetworkProfile net{4, 1.25e9, 5e-4};

  SUBCASE("signsgd example") {
    const CompressionScheme scheme{"signsgd", SignSgd{}, 0.01634, "user"};
    const auto est = estimate_compressed(m, net, scheme);
    // 122 + 16.34 + 3.03125 MB * 3 / 1.25 GB/s = 145.615 ms
    CHECK(est.total == doctest::Approx(0.145615).epsilon(1e-12));
    CHECK(est.compute == 0.122);  // gamma not applied
    CHECK(est.encode_decode == 0.01634);
    CHECK(est.comm_overlapped == 0.0);
  }

  SUBCASE("zero encode time and zero payloads degenerate to T_comp") {
    const CompressionScheme scheme{"mstopk-0", MsTopK{0.0}, 0.0, "user"};
    const auto est = estimate_compressed(m, net, scheme);
    CHECK(est.total == 0.122);
  }

  SUBCASE("powersgd totals are compute + encode + both ring terms") {
    const CompressionScheme scheme{"powersgd-r4", PowerSgd{4, 240e3, 450e3}, 0.045, "user"};
    const auto est = estimate_compressed(m, net, scheme);
    const double expected = 0.122 + 0.045 +
                            comm_time(Collective::RingReduce, {240e3}, net) +
                            comm_time(Collective::RingReduce, {450e3}, net);
    CHECK(est.total == doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("syncsgd is rejected") {
    CHECK_THROWS_AS(estimate_compressed(m, net, {"syncsgd", SyncSgd{}, 0.0, "user"}),
                    ConfigError);
  }
}

TEST_CASE("linear_scaling_gap subtracts the single-worker backward time") {
  const ModelProfile m = resnet50_like();
  const auto est = estimate_syncsgd(m, {4, 1.25e9, 5e-4});
  CHECK(linear_scaling_gap(est, m) == doctest::Approx(0.0355).epsilon(1e-9));
  CHECK(linear_scaling_gap(estimate_syncsgd(m, {1, 1.25e9, 5e-4}), m) == 0.0);
}

TEST_CASE("speedup is the ratio of totals") {
  IterationEstimate a;
  a.total = 0.100;
  IterationEstimate b;
  b.total = 0.050;
  CHECK(speedup(a, b) == 2.0);
  CHECK(speedup(a, a) == 1.0);

  const ModelProfile m = resnet50_like();
  const NetworkProfile net{4, 1.25e9, 5e-4};
  const auto sync = estimate_syncsgd(m, net);
  const auto sign = estimate_compressed(m, net, {"signsgd", SignSgd{}, 0.01634, "user"});
  CHECK(speedup(sync, sign) == doctest::Approx(1.082).epsilon(1e-3));

  IterationEstimate zero;
  CHECK_THROWS_AS(speedup(a, zero), ValidationError);
}

TEST_CASE("all-gather scheme totals strictly increase with workers") {
  const ModelProfile m = resnet50_like();
  const CompressionScheme scheme{"signsgd", SignSgd{}, 0.01634, "user"};
  double previous = 0.0;
  for (int p : {2, 4, 8, 16, 32, 64, 128}) {
    const double total = estimate_compressed(m, {p, 1.25e9, 25e-6}, scheme).total;
    CHECK(total > previous);
    previous = total;
  }
}

TEST_CASE("totals never increase with bandwidth, for every scheme") {
  const std::vector<CompressionScheme> schemes = {
      {"syncsgd", SyncSgd{}, 0.0, "user"},
      {"powersgd-r4", PowerSgd{4, 240e3, 450e3}, 0.045, "user"},
      {"mstopk-1pct", MsTopK{0.01}, 0.103, "user"},
      {"signsgd", SignSgd{}, 0.01634, "user"},
  };
  for (int i = 0; i < 50; ++i) {
    const ModelProfile m = random_model();
    const int p = uniform_int(2, 256);
    const double a = uniform(0.0, 1e-3);
    for (const auto& scheme : schemes) {
      double previous = 1e300;
      for (double bw = 1e8; bw < 1e12; bw *= 2.0) {
        const double total = estimate(m, {p, bw, a}, scheme).total;
        CHECK(total <= previous + 1e-15);
        previous = total;
      }
    }
  }
}

TEST_CASE("overlap bound: between the hidden-comm floor and the serial sum") {
  for (int i = 0; i < 200; ++i) {
    const ModelProfile m = random_model();
    const NetworkProfile net{uniform_int(2, 256), uniform(1e8, 1e11), uniform(0.0, 1e-3)};
    const auto plan = bucketize(m);
    const double per_bucket = comm_time(Collective::RingReduce, {plan.full_size}, net);
    const double tail = comm_time(Collective::RingReduce, {plan.tail_size}, net);
    const double full_comm = plan.full_buckets * per_bucket + tail;
    const double contended = m.gamma * m.backward_time;

    const double total = estimate_syncsgd(m, net).total;
    CHECK(total >= std::max(contended, tail) - 1e-15);
    CHECK(total <= contended + full_comm + 1e-15);
  }
}

TEST_CASE("ring asymptote: syncsgd converges as workers grow, alpha = 0") {
  const ModelProfile m = resnet50_like();
  const double bw = 1.25e9;
  // limit: per bucket 2b/BW, exposed tail 2*b_hat/BW
  const auto plan = bucketize(m);
  const double limit = std::max(m.gamma * m.backward_time,
                                plan.full_buckets * 2.0 * plan.full_size / bw) +
                       2.0 * plan.tail_size / bw;
  const double at_huge_p = estimate_syncsgd(m, {1 << 20, bw, 0.0}).total;
  CHECK(at_huge_p == doctest::Approx(limit).epsilon(1e-5));
  CHECK(at_huge_p <= limit);
}

TEST_CASE("compressed totals are affine in encode time with slope one") {
  const ModelProfile m = resnet50_like();
  const NetworkProfile net{16, 1.25e9, 25e-6};
  for (double base : {0.0, 0.045, 0.13}) {
    const double t0 =
        estimate_compressed(m, net, {"powersgd", PowerSgd{4, 240e3, 450e3}, base, "user"}).total;
    for (double delta : {0.001, 0.010, 0.100}) {
      const double t1 =
          estimate_compressed(m, net, {"powersgd", PowerSgd{4, 240e3, 450e3}, base + delta,
                                       "user"})
              .total;
      CHECK(t1 - t0 == doctest::Approx(delta).epsilon(1e-12));
    }
  }
}
