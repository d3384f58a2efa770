#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "bayesclean/cleaner.hpp"
#include "bayesclean/noise.hpp"
#include "bayesclean/relation.hpp"

namespace bayesclean {

struct CleaningMetrics {
    std::uint32_t values_corrected = 0;  // dirty cells repaired to the truth
    std::uint32_t false_positives = 0;   // clean cells the cleaner changed
    std::uint32_t missed = 0;            // dirty cells still wrong (incl. bad repairs)
    std::int64_t overall_gain = 0;       // corrected - false positives
    double correction_rate = 0.0;        // corrected / |ground truth|

    nlohmann::json to_json() const;
};

/// Cell-wise comparison of aligned relations against the ground truth.
CleaningMetrics score(const Relation& clean, const Relation& dirty,
                      const Relation& repaired, const GroundTruth& gt);

struct SweepPoint {
    double param = 0.0;  // value on the sweep axis
    std::size_t rows = 0;
    double tau = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    CleaningMetrics metrics;
    double seconds = 0.0;  // learning + cleaning, end to end
};

struct SweepResult {
    std::string axis;  // "beta" | "tau" | "n"
    std::vector<SweepPoint> points;
};

/// Inject/learn/clean/score once per beta with alpha = alpha_ratio * beta.
/// The injection seed is fixed so every point sees the same dirty data.
SweepResult sweep_beta(const Relation& clean, const NoiseSpec& noise,
                       const std::vector<double>& betas, double alpha_ratio,
                       const CleanConfig& base);

/// End-to-end runs over an (n, tau) grid; rows are prefix slices of the
/// clean relation. Axis is "n" when taus is a singleton, "tau" when sizes
/// is, and "n" otherwise.
SweepResult sweep_scale(const Relation& clean, const std::vector<double>& taus,
                        const std::vector<std::size_t>& sizes,
                        const NoiseSpec& noise, const CleanConfig& base);

void write_sweep_csv(const SweepResult& res, std::ostream& out);

}  // namespace bayesclean
