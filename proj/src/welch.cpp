#include <cmath>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

#include "icr/random_index.hpp"

namespace icr {

TTestResult compare_configurations(const SimulationResult& a, const SimulationResult& b) {
  if (a.samples_kept < 2 || b.samples_kept < 2) {
    throw Error(ErrorCode::InsufficientSamples, "the t-test needs at least 2 samples per side");
  }
  const double va = a.std_error * a.std_error;  // s_a^2 / n_a
  const double vb = b.std_error * b.std_error;
  const double diff = a.ri - b.ri;
  TTestResult r;
  if (va + vb == 0.0) {
    r.t = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
    r.p_value = diff == 0.0 ? 1.0 : 0.0;
    r.dof = static_cast<double>(a.samples_kept + b.samples_kept - 2);
    return r;
  }
  r.t = diff / std::sqrt(va + vb);
  // Welch-Satterthwaite.
  r.dof = (va + vb) * (va + vb) /
          (va * va / static_cast<double>(a.samples_kept - 1) + vb * vb / static_cast<double>(b.samples_kept - 1));
  const boost::math::students_t dist(r.dof);
  r.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t)));
  return r;
}

}  // namespace icr
