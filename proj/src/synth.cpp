#include "bayesclean/synth.hpp"

#include <array>
#include <stdexcept>

#include "bayesclean/error_model.hpp"
#include "rng_util.hpp"

namespace bayesclean {

namespace {

const std::array<std::string, 12> kMakes = {
    "aurora",  "bentra",   "caldera",  "dynamo",   "everlane", "falcon",
    "granite", "horizon",  "ironwood", "jetstream", "keystone", "lumina"};

const std::array<std::string, 6> kCarTypes = {"sedan", "coupe",   "wagon",
                                              "sport", "truck",   "minivan"};
const std::array<std::string, 6> kDriveTrains = {"fwd", "rwd", "awd",
                                                 "rwd", "awd", "fwd"};
const std::array<std::string, 6> kDoors = {"4", "2", "5", "2", "2", "5"};
const std::array<std::string, 5> kEngines = {"v4", "v6", "v8", "i4", "i6"};

const std::array<std::string, 3> kConditions = {"new", "used", "certified"};
constexpr std::array<double, 3> kConditionWeights = {0.25, 0.55, 0.20};

// pronounceable model names, pairwise Levenshtein >= 3 within the attribute
std::vector<std::string> make_model_names(std::mt19937_64& g, std::size_t count) {
    static const std::array<std::string, 16> onsets = {
        "b", "br", "c", "d", "dr", "f", "g", "k",
        "l", "m",  "n", "p", "r",  "s", "t", "v"};
    static const std::array<std::string, 5> vowels = {"a", "e", "i", "o", "u"};
    static const std::array<std::string, 6> codas = {"n", "r", "s", "x", "l", "d"};

    std::vector<std::string> names;
    std::size_t guard = 0;
    while (names.size() < count) {
        if (++guard > 100000)
            throw std::runtime_error("model name generation stalled");
        std::string name = onsets[detail::draw_index(g, onsets.size())] +
                           vowels[detail::draw_index(g, vowels.size())] +
                           onsets[detail::draw_index(g, onsets.size())] +
                           vowels[detail::draw_index(g, vowels.size())] +
                           codas[detail::draw_index(g, codas.size())];
        if (name.size() < 5) continue;
        bool ok = true;
        for (const auto& other : names)
            if (edit_distance(std::optional<std::string_view>(other),
                              std::optional<std::string_view>(name)) < 3) {
                ok = false;
                break;
            }
        if (ok) names.push_back(std::move(name));
    }
    return names;
}

}  // namespace

Relation synth_car_relation(const SynthConfig& cfg) {
    if (cfg.rows == 0) throw std::invalid_argument("rows must be positive");
    if (cfg.makes == 0 || cfg.makes > kMakes.size())
        throw std::invalid_argument("makes out of range");
    if (cfg.models_per_make == 0)
        throw std::invalid_argument("models_per_make must be positive");

    std::mt19937_64 g(detail::mix_seed(cfg.seed, 0x5ca1e));
    const std::size_t model_count = cfg.makes * cfg.models_per_make;
    const auto models = make_model_names(g, model_count);

    // skewed popularity so value frequencies vary
    std::vector<double> weights(model_count);
    for (std::size_t k = 0; k < model_count; ++k) weights[k] = 1.0 / (k + 2.0);

    std::vector<std::size_t> year_base(model_count);
    for (std::size_t k = 0; k < model_count; ++k)
        year_base[k] = 1998 + (k * 5 + 3) % 11;

    Schema schema({"model", "make", "car_type", "year", "condition",
                   "drive_train", "doors", "engine"});
    std::vector<std::vector<Cell>> rows;
    rows.reserve(cfg.rows);
    for (std::size_t i = 0; i < cfg.rows; ++i) {
        const std::size_t k = detail::draw_weighted(g, weights);
        const std::size_t type = k % kCarTypes.size();
        const std::size_t year = year_base[k] + detail::draw_index(g, 4);
        const std::size_t cond = detail::draw_weighted(g, kConditionWeights);
        rows.push_back({models[k],
                        kMakes[k / cfg.models_per_make],
                        kCarTypes[type],
                        std::to_string(year),
                        kConditions[cond],
                        kDriveTrains[type],
                        kDoors[type],
                        kEngines[k % kEngines.size()]});
    }
    return Relation::from_cells(std::move(schema), rows, "synthetic car data");
}

}  // namespace bayesclean
