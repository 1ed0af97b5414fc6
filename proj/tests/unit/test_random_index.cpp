#include <doctest.h>

#include <cmath>
#include <map>

#include <boost/math/distributions/chi_squared.hpp>

#include "helpers.hpp"
#include "icr/io.hpp"
#include "icr/random_index.hpp"

using namespace icr;

TEST_CASE("lookup prefers published values and labels approximations") {
  auto r = lookup_ri(4, 2);
  CHECK(r.ri == 0.356);
  CHECK(r.source == RiSource::Published);
  r = lookup_ri(7, 2);
  CHECK(r.source == RiSource::Approximated);
  CHECK(r.ri == doctest::Approx((1.0 - 4.0 / 30.0) * 1.341));
  CHECK(lookup_ri(10, 0).ri == 1.486);
  CHECK_THROWS_AS(lookup_ri(3, 0), Error);
  CHECK_THROWS_AS(lookup_ri(4, 4), Error);
  CHECK_THROWS_AS(lookup_ri(12, 1), Error);  // no complete-matrix value to scale
}

TEST_CASE("linear approximation") {
  CHECK(approximate_ri(7, 4, 1.341) == doctest::Approx(0.983).epsilon(5e-4));
  CHECK(approximate_ri(6, 10, 1.249) == doctest::Approx(0.0));
  CHECK(approximate_ri(5, 0, 1.109) == 1.109);
}

TEST_CASE("simulation tables add only missing cells") {
  SimulationResult r;
  r.n = 7;
  r.m = 2;
  r.ri = 1.2;
  r.samples_kept = 10;
  SimulationResult dup = r;
  dup.n = 4;
  const auto merged = merge_simulated(RandomIndexTable::published(), {r, dup});
  CHECK(lookup_ri(7, 2, merged).source == RiSource::Simulated);
  CHECK(lookup_ri(7, 2, merged).ri == 1.2);
  CHECK(lookup_ri(4, 2, merged).ri == 0.356);
  CHECK(lookup_ri(4, 2, merged).source == RiSource::Published);
}

TEST_CASE("sample streams are reproducible and independent of creation order") {
  SampleRng a(1, 5), b(1, 6), a2(1, 5);
  std::vector<std::uint64_t> xa, xa2;
  for (int k = 0; k < 10; ++k) {
    xa.push_back(a());
    (void)b();
  }
  for (int k = 0; k < 10; ++k) xa2.push_back(a2());
  CHECK(xa == xa2);
  SampleRng c(2, 5);
  CHECK(c() != xa[0]);
}

TEST_CASE("generated entries are uniform over the scale") {
  std::vector<long> counts(SaatyScale::kSize, 0);
  long missing = 0;
  for (std::uint64_t s = 0; s < 4000; ++s) {
    SampleRng rng(42, s);
    const auto m = generate_random_incomplete(5, 3, rng);
    CHECK(m.missing_count() == 3);
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j) {
        if (!m.known(i, j)) {
          ++missing;
          continue;
        }
        counts[*SaatyScale::index_of(m.value(i, j))]++;
      }
  }
  CHECK(missing == 12000);
  const double total = 4000.0 * 7.0;
  const double expected = total / SaatyScale::kSize;
  double chi2 = 0.0;
  for (long c : counts) chi2 += (c - expected) * (c - expected) / expected;
  const boost::math::chi_squared dist(SaatyScale::kSize - 1);
  CHECK(boost::math::cdf(boost::math::complement(dist, chi2)) > 1e-3);
}

TEST_CASE("missing positions are uniform") {
  std::map<int, long> counts;
  for (std::uint64_t s = 0; s < 6000; ++s) {
    SampleRng rng(9, s);
    const auto m = generate_random_incomplete(4, 1, rng);
    const auto p = m.missing_positions().at(0);
    counts[p.row * 4 + p.col]++;
  }
  REQUIRE(counts.size() == 6);
  double chi2 = 0.0;
  for (auto [k, c] : counts) chi2 += (c - 1000.0) * (c - 1000.0) / 1000.0;
  CHECK(boost::math::cdf(boost::math::complement(boost::math::chi_squared(5), chi2)) > 1e-3);
}

TEST_CASE("estimate_ri is identical across worker counts") {
  SimulationSpec spec;
  spec.n = 5;
  spec.m = 5;
  spec.target_samples = 3000;
  spec.seed = 77;
  spec.keep_samples = true;
  const auto one = estimate_ri(spec);
  spec.jobs = 3;
  const auto three = estimate_ri(spec);
  CHECK(one.ri == three.ri);
  CHECK(one.std_error == three.std_error);
  CHECK(one.ci_samples == three.ci_samples);
  CHECK(one.samples_rejected == three.samples_rejected);
  CHECK(one.samples_kept == 3000);
  CHECK(one.samples_rejected > 0);  // m = 5 can isolate a vertex of K5
}

TEST_CASE("estimate_ri summary statistics match the kept samples") {
  SimulationSpec spec;
  spec.n = 4;
  spec.m = 1;
  spec.target_samples = 2000;
  spec.keep_samples = true;
  const auto r = estimate_ri(spec);
  double mean = 0.0;
  for (double c : r.ci_samples) mean += c;
  mean /= r.ci_samples.size();
  double ss = 0.0;
  for (double c : r.ci_samples) ss += (c - mean) * (c - mean);
  CHECK(r.ri == doctest::Approx(mean).epsilon(1e-12));
  CHECK(r.std_error == doctest::Approx(std::sqrt(ss / 1999.0) / std::sqrt(2000.0)).epsilon(1e-9));
}

TEST_CASE("estimate_ri rejects infeasible requests") {
  SimulationSpec spec;
  spec.n = 4;
  spec.m = 4;
  try {
    estimate_ri(spec);
    FAIL("ran");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InfeasibleMissing);
  }
  spec.m = 0;
  spec.n = 3;
  CHECK_THROWS_AS(estimate_ri(spec), Error);
}

TEST_CASE("Welch test on summary statistics") {
  // Samples {1,2,3,4,5} and {3,4,5,6,7,8}, values from scipy.stats.ttest_ind(equal_var=False).
  SimulationResult a, b;
  a.ri = 3.0;
  a.std_error = std::sqrt(2.5 / 5);
  a.samples_kept = 5;
  b.ri = 5.5;
  b.std_error = std::sqrt(3.5 / 6);
  b.samples_kept = 6;
  const auto t = compare_configurations(a, b);
  CHECK(t.t == doctest::Approx(-2.401922307076307).epsilon(1e-12));
  CHECK(t.dof == doctest::Approx(8.98936170212766).epsilon(1e-12));
  CHECK(t.p_value == doctest::Approx(0.03980308202413626).epsilon(1e-9));
  a.samples_kept = 1;
  CHECK_THROWS_AS(compare_configurations(a, b), Error);
}
