#include "bayesclean/noise.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "bayesclean/error_model.hpp"
#include "rng_util.hpp"

namespace bayesclean {

std::string to_string(ErrorType t) {
    switch (t) {
        case ErrorType::Spelling: return "spelling";
        case ErrorType::Replacement: return "replacement";
        case ErrorType::Deletion: return "deletion";
    }
    return "unknown";
}

ErrorType error_type_from_string(const std::string& s) {
    if (s == "spelling") return ErrorType::Spelling;
    if (s == "replacement") return ErrorType::Replacement;
    if (s == "deletion") return ErrorType::Deletion;
    throw std::invalid_argument("unknown error type: " + s);
}

namespace {

nlohmann::json cell_json(const Cell& c) {
    if (!c) return nullptr;
    return *c;
}

Cell cell_from(const nlohmann::json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<std::string>();
}

struct AttrInfo {
    std::vector<ValueId> non_null_values;           // active domain minus NULL
    std::unordered_set<std::string> tokens;         // for spelling collisions
    std::string alphabet;                           // distinct chars, sorted
};

// random single-character edits until the target distance is hit; redraws on
// collision with any active-domain value
Cell spelling_corruption(std::mt19937_64& g, const std::string& base, int lo,
                         int hi, const AttrInfo& info) {
    std::string alphabet = info.alphabet;
    if (alphabet.empty()) alphabet = "abcdefghijklmnopqrstuvwxyz";
    const int target = lo + static_cast<int>(detail::draw_index(
                                g, static_cast<std::size_t>(hi - lo + 1)));

    auto mutate = [&](int edits, const std::string& chars) {
        std::string s = base;
        for (int k = 0; k < edits; ++k) {
            std::size_t op = s.empty() ? 1 : detail::draw_index(g, 3);
            char c = chars[detail::draw_index(g, chars.size())];
            if (op == 0) {
                s[detail::draw_index(g, s.size())] = c;
            } else if (op == 1) {
                s.insert(s.begin() + static_cast<std::ptrdiff_t>(
                                         detail::draw_index(g, s.size() + 1)),
                         c);
            } else {
                s.erase(s.begin() + static_cast<std::ptrdiff_t>(
                                        detail::draw_index(g, s.size())));
            }
        }
        return s;
    };

    auto acceptable = [&](const std::string& s, int lo_d, int hi_d) {
        if (s == base || info.tokens.count(s)) return false;
        auto d = edit_distance(std::optional<std::string_view>(base),
                               std::optional<std::string_view>(s));
        return d >= static_cast<std::size_t>(lo_d) &&
               d <= static_cast<std::size_t>(hi_d);
    };

    for (int attempt = 0; attempt < 64; ++attempt) {
        std::string s = mutate(target, alphabet);
        if (acceptable(s, target, target)) return s;
    }
    // exact distance proving elusive: accept anything in range
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::string s = mutate(target, alphabet);
        if (acceptable(s, lo, hi)) return s;
    }
    // widen the alphabet to escape saturated tiny domains
    const std::string wide = alphabet + "0123456789abcdefghijklmnopqrstuvwxyz";
    for (int attempt = 0; attempt < 256; ++attempt) {
        std::string s = mutate(target, wide);
        if (acceptable(s, lo, hi)) return s;
    }
    throw std::runtime_error("spelling corruption could not find a fresh value");
}

}  // namespace

std::pair<Relation, GroundTruth> inject(const Relation& r, const NoiseSpec& spec) {
    if (spec.tau < 0.0 || spec.tau > 1.0)
        throw std::invalid_argument("tau must be in [0,1]");
    if (spec.spelling_min < 1 || spec.spelling_max > 4 ||
        spec.spelling_min > spec.spelling_max)
        throw std::invalid_argument("spelling distance range must lie within [1,4]");
    double mix_sum = 0.0;
    for (double w : spec.mix) {
        if (w < 0.0) throw std::invalid_argument("mix weights must be non-negative");
        mix_sum += w;
    }
    if (mix_sum <= 0.0) throw std::invalid_argument("mix weights sum to zero");

    const std::size_t m = r.arity();
    std::vector<AttrInfo> info(m);
    {
        std::vector<std::unordered_set<ValueId>> seen(m);
        for (const Row& row : r.rows())
            for (std::size_t j = 0; j < m; ++j)
                if (row[j] != kNull && seen[j].insert(row[j]).second)
                    info[j].non_null_values.push_back(row[j]);
        for (std::size_t j = 0; j < m; ++j) {
            std::unordered_set<char> chars;
            for (ValueId v : info[j].non_null_values) {
                const std::string& tok = r.pool().token(v);
                info[j].tokens.insert(tok);
                for (char c : tok) chars.insert(c);
            }
            info[j].alphabet.assign(chars.begin(), chars.end());
            std::sort(info[j].alphabet.begin(), info[j].alphabet.end());
        }
    }

    std::mt19937_64 g(detail::mix_seed(spec.seed, 0x4015e));
    ValuePool& pool = *r.shared_pool();
    std::vector<Row> rows = r.rows();
    GroundTruth gt;

    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (detail::draw_unit(g) >= spec.tau) continue;

            const ValueId clean = rows[i][j];
            ErrorType requested =
                static_cast<ErrorType>(detail::draw_weighted(g, spec.mix));
            ErrorType type = requested;

            // feasibility fallbacks; spelling is always possible
            auto replacement_pool = [&]() {
                std::vector<ValueId> p;
                for (ValueId v : info[j].non_null_values)
                    if (v != clean) p.push_back(v);
                return p;
            };
            if (type == ErrorType::Deletion && clean == kNull)
                type = replacement_pool().empty() ? ErrorType::Spelling
                                                  : ErrorType::Replacement;
            if (type == ErrorType::Replacement && replacement_pool().empty())
                type = ErrorType::Spelling;
            if (type != requested) ++gt.fallback_count;

            ValueId dirty = kNull;
            switch (type) {
                case ErrorType::Deletion:
                    dirty = kNull;
                    break;
                case ErrorType::Replacement: {
                    auto p = replacement_pool();
                    dirty = p[detail::draw_index(g, p.size())];
                    break;
                }
                case ErrorType::Spelling: {
                    const std::string base =
                        clean == kNull ? std::string() : pool.token(clean);
                    Cell c = spelling_corruption(g, base, spec.spelling_min,
                                                 spec.spelling_max, info[j]);
                    dirty = pool.intern(*c);
                    break;
                }
            }

            rows[i][j] = dirty;
            Corruption entry;
            entry.row = i;
            entry.attr = j;
            entry.clean = clean == kNull ? Cell{} : Cell{pool.token(clean)};
            entry.dirty = dirty == kNull ? Cell{} : Cell{pool.token(dirty)};
            entry.type = type;
            gt.entries.push_back(std::move(entry));
        }
    }

    return {r.with_rows(std::move(rows), r.provenance() + " [noisy]"), std::move(gt)};
}

Relation replay(const GroundTruth& gt, const Relation& dirty) {
    std::vector<Row> rows = dirty.rows();
    ValuePool& pool = *dirty.shared_pool();
    for (const Corruption& e : gt.entries) {
        if (e.row >= rows.size() || e.attr >= dirty.arity())
            throw std::runtime_error("ground truth coordinates out of range");
        const ValueId have = rows[e.row][e.attr];
        const Cell have_cell =
            have == kNull ? Cell{} : Cell{pool.token(have)};
        if (have_cell != e.dirty)
            throw std::runtime_error(
                "ground truth does not match the dirty relation at row " +
                std::to_string(e.row));
        rows[e.row][e.attr] = e.clean ? pool.intern(*e.clean) : kNull;
    }
    return dirty.with_rows(std::move(rows));
}

nlohmann::json GroundTruth::to_json() const {
    nlohmann::json j;
    j["fallbacks"] = fallback_count;
    nlohmann::json arr = nlohmann::json::array();
    for (const Corruption& e : entries) {
        arr.push_back({{"row", e.row},
                       {"attr", e.attr},
                       {"clean", cell_json(e.clean)},
                       {"dirty", cell_json(e.dirty)},
                       {"type", to_string(e.type)}});
    }
    j["entries"] = arr;
    return j;
}

GroundTruth GroundTruth::from_json(const nlohmann::json& j) {
    GroundTruth gt;
    gt.fallback_count = j.value("fallbacks", std::size_t{0});
    for (const auto& e : j.at("entries")) {
        Corruption c;
        c.row = e.at("row").get<std::size_t>();
        c.attr = e.at("attr").get<std::size_t>();
        c.clean = cell_from(e.at("clean"));
        c.dirty = cell_from(e.at("dirty"));
        c.type = error_type_from_string(e.at("type").get<std::string>());
        gt.entries.push_back(std::move(c));
    }
    return gt;
}

}  // namespace bayesclean
