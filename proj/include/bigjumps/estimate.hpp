#pragma once

#include <cmath>
#include <string>

namespace bigjumps {

/// A probability estimate. For hit-counting methods std_error is the binomial
/// standard error sqrt(p(1-p)/samples).
struct EstimateResult {
  double prob = 0.0;
  double std_error = 0.0;
  long long samples = 0;
  long long hits = 0;
  std::string method;
  std::string warning;
};

inline EstimateResult hit_count_estimate(long long hits, long long samples, std::string method) {
  EstimateResult r;
  r.samples = samples;
  r.hits = hits;
  r.method = std::move(method);
  if (samples > 0) {
    r.prob = static_cast<double>(hits) / static_cast<double>(samples);
    r.std_error = std::sqrt(r.prob * (1.0 - r.prob) / static_cast<double>(samples));
  }
  return r;
}

}  // namespace bigjumps
