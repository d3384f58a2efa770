#pragma once

#include <cstdint>

#include "bayesclean/relation.hpp"

namespace bayesclean {

/// Synthetic used-car relation: 8 categorical attributes with embedded exact
/// dependencies (model->make, model->car_type, model->engine,
/// car_type->drive_train, car_type->doors) plus free attributes (year,
/// condition). Model popularity is skewed so value frequencies vary.
struct SynthConfig {
    std::size_t rows = 10000;
    std::uint64_t seed = 1;
    std::size_t makes = 8;
    std::size_t models_per_make = 3;
};

Relation synth_car_relation(const SynthConfig& cfg);

}  // namespace bayesclean
