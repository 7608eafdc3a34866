#pragma once

#include "soata/facts.hpp"
#include "soata/model.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace soata::test {

std::string fixture_path(const std::string& name);

struct RandomModelShape {
    std::size_t max_ports = 200;
    double channel_density = 0.35;
    double protect_probability = 0.3;
};

// A model that passes validate(); deterministic per seed.
SystemModel random_model(std::uint64_t seed, const RandomModelShape& shape = {});

// Every channel the write/read rules could use that the model does not have.
std::vector<Channel> missing_channels(const SystemModel& model);

std::vector<ElementId> all_topics(const SystemModel& model);

std::size_t port_count(const SystemModel& model);

} // namespace soata::test
