#include "ewls/generators.hpp"

#include <cmath>

#include "ewls/errors.hpp"

namespace ewls {

Profile parse_profile(const std::string& name) {
  if (name == "uniform") return Profile::uniform;
  if (name == "dense-heavy") return Profile::dense_heavy;
  if (name == "two-scale") return Profile::two_scale;
  throw ParameterError("unknown profile: " + name);
}

const char* to_string(Profile p) {
  switch (p) {
    case Profile::uniform: return "uniform";
    case Profile::dense_heavy: return "dense-heavy";
    case Profile::two_scale: return "two-scale";
  }
  return "?";
}

namespace {

double log_uniform(CounterRng& rng, double lo, double hi) { return std::exp(rng.uniform(std::log(lo), std::log(hi))); }

double eoq_peak(const std::vector<Commodity>& cs) {
  double s = 0;
  for (const auto& c : cs) s += c.gamma * std::sqrt(c.K / c.H);
  return s;
}

}  // namespace

Instance random_instance(std::size_t n, CounterRng& rng, double tightness) {
  if (n == 0) throw ParameterError("n must be positive");
  std::vector<Commodity> cs;
  for (std::size_t i = 0; i < n; ++i)
    cs.push_back({static_cast<int>(i), log_uniform(rng, 1, 100), log_uniform(rng, 0.5, 5), log_uniform(rng, 0.5, 2)});
  return Instance(tightness * eoq_peak(cs), cs);
}

Instance generate_instance(Profile profile, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ParameterError("n must be positive");
  CounterRng rng(seed, stream_id(0x9e4, static_cast<std::uint64_t>(profile), n));
  switch (profile) {
    case Profile::uniform: {
      std::vector<Commodity> cs;
      for (std::size_t i = 0; i < n; ++i)
        cs.push_back({static_cast<int>(i), rng.uniform(1, 100), rng.uniform(0.5, 5), rng.uniform(0.5, 2)});
      return Instance(rng.uniform(0.3, 0.7) * eoq_peak(cs), cs);
    }
    case Profile::dense_heavy: {
      // Near-identical commodities under a tight capacity: every interval sits far below its EOQ.
      std::vector<Commodity> cs;
      for (std::size_t i = 0; i < n; ++i)
        cs.push_back({static_cast<int>(i), 1.0 + rng.uniform(0, 1e-3), 1.0, 1.0 + rng.uniform(0, 1e-3)});
      return Instance(0.05 * eoq_peak(cs), cs);
    }
    case Profile::two_scale: {
      std::vector<Commodity> cs;
      for (std::size_t i = 0; i < n; ++i) {
        const bool big = i % 2 == 0;
        const double K = big ? rng.uniform(500, 1000) : rng.uniform(1, 5);
        const double gamma = big ? rng.uniform(2, 4) : rng.uniform(0.1, 0.3);
        cs.push_back({static_cast<int>(i), K, rng.uniform(0.5, 2), gamma});
      }
      return Instance(0.4 * eoq_peak(cs), cs);
    }
  }
  throw ParameterError("unknown profile");
}

}  // namespace ewls
