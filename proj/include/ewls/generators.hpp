#pragma once

#include <cstdint>
#include <string>

#include "ewls/model.hpp"
#include "ewls/rng.hpp"

namespace ewls {

enum class Profile { uniform, dense_heavy, two_scale };

Profile parse_profile(const std::string& name);
const char* to_string(Profile p);

// Capacity is a fraction of the unconstrained EOQ peak, so the space constraint binds.
Instance generate_instance(Profile profile, std::size_t n, std::uint64_t seed);

// K, H, gamma drawn log-uniformly; used by tests and the CLI.
Instance random_instance(std::size_t n, CounterRng& rng, double tightness = 0.5);

}  // namespace ewls
