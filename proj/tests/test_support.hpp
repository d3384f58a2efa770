#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bayesclean/domain_index.hpp"
#include "bayesclean/relation.hpp"

namespace testsupport {

using bayesclean::Cell;
using bayesclean::Relation;
using bayesclean::Row;
using bayesclean::Schema;
using bayesclean::ValueId;

// The five-group sample database, expanded row-by-row by its frequency
// column: 100 + 150 + 100 + 15 + 105 = 470 tuples.
inline Relation table1_relation() {
    struct Group {
        std::vector<Cell> cells;
        int freq;
    };
    const std::vector<Group> groups = {
        {{"Accord", "Honda", "JPN", "Full-size", "V6"}, 100},
        {{"Accord", "Honda", "JPN", "Full-size", "V4"}, 150},
        {{"Civic", "Honda", "JPN", "Mid-size", "V4"}, 100},
        {{"Focus", "Honda", "JPN", "Full-size", "V6"}, 15},
        {{"Focus", "Ford", "USA", "Compact", "V4"}, 105},
    };
    std::vector<std::vector<Cell>> rows;
    for (const auto& g : groups)
        for (int i = 0; i < g.freq; ++i) rows.push_back(g.cells);
    return Relation::from_cells(
        Schema({"Model", "Make", "Orig", "CarType", "Engine"}), rows, "table1");
}

// Straightforward full-matrix Levenshtein, independent of the library's
// banded implementation.
inline std::size_t reference_levenshtein(const std::string& a, const std::string& b) {
    std::vector<std::vector<std::size_t>> d(a.size() + 1,
                                            std::vector<std::size_t>(b.size() + 1));
    for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
    for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i)
        for (std::size_t j = 1; j <= b.size(); ++j)
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                                d[i - 1][j - 1] + (a[i - 1] != b[j - 1])});
    return d[a.size()][b.size()];
}

// Brute-force evaluation of the distributional-similarity feature, term by
// term as written: sum over the context of
//   Pr[c|cand] * Pr[c|obs] * Pr[obs] / Pr[c]
// with all counts recomputed by direct scans over the relation's rows.
struct BruteCounts {
    const Relation& r;

    explicit BruteCounts(const Relation& rel) : r(rel) {}

    // tuples containing v anywhere
    std::size_t value_count(ValueId v) const {
        std::size_t n = 0;
        for (const Row& row : r.rows())
            if (std::find(row.begin(), row.end(), v) != row.end()) ++n;
        return n;
    }

    // tuples containing a and b at different positions
    std::size_t pair_count(ValueId a, ValueId b) const {
        std::size_t n = 0;
        for (const Row& row : r.rows()) {
            bool hit = false;
            for (std::size_t i = 0; i < row.size() && !hit; ++i)
                for (std::size_t j = 0; j < row.size(); ++j) {
                    if (i == j) continue;
                    if (row[i] == a && row[j] == b) {
                        hit = true;
                        break;
                    }
                }
            if (hit) ++n;
        }
        return n;
    }
};

inline double brute_force_f_ds(const Relation& r, ValueId observed,
                               ValueId candidate,
                               const std::vector<ValueId>& context, double mu) {
    BruteCounts counts(r);
    const double n = static_cast<double>(r.size());
    const double n_obs = static_cast<double>(counts.value_count(observed));
    const double n_cand = static_cast<double>(counts.value_count(candidate));
    if (n_obs == 0 || n_cand == 0) return 0.0;
    double sum = 0.0;
    for (ValueId c : context) {
        const double n_c = static_cast<double>(counts.value_count(c));
        if (n_c == 0) continue;
        const double pr_c_cand = (counts.pair_count(c, candidate) + mu) / n_cand;
        const double pr_c_obs = (counts.pair_count(c, observed) + mu) / n_obs;
        const double pr_obs = n_obs / n;
        const double pr_c = n_c / n;
        sum += pr_c_cand * pr_c_obs * pr_obs / pr_c;
    }
    return sum;
}

// Context per the operative definition: the observed tuple's other cells
// that co-occur with both the observed and the candidate value, by direct
// scan.
inline std::vector<ValueId> brute_force_context(const Relation& r,
                                                const Row& observed,
                                                std::size_t attr,
                                                ValueId candidate) {
    BruteCounts counts(r);
    std::vector<ValueId> ctx;
    for (std::size_t j = 0; j < observed.size(); ++j) {
        if (j == attr) continue;
        ValueId c = observed[j];
        if (std::find(ctx.begin(), ctx.end(), c) != ctx.end()) continue;
        if (counts.pair_count(c, observed[attr]) == 0) continue;
        if (counts.pair_count(c, candidate) == 0) continue;
        ctx.push_back(c);
    }
    return ctx;
}

// small random relations for property tests
inline Relation random_relation(std::mt19937_64& g, std::size_t max_rows = 40,
                                std::size_t max_attrs = 4,
                                std::size_t max_values = 5,
                                bool with_nulls = true) {
    const std::size_t m = 1 + g() % max_attrs;
    const std::size_t n = 1 + g() % max_rows;
    std::vector<std::string> names;
    for (std::size_t j = 0; j < m; ++j) names.push_back("a" + std::to_string(j));
    std::vector<std::string> tokens = {"red",  "green", "blue",  "gold",
                                       "gray", "teal",  "white", "black"};
    std::vector<std::vector<Cell>> rows(n, std::vector<Cell>(m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            std::size_t v = g() % max_values;
            if (with_nulls && g() % 10 == 0)
                rows[i][j] = std::nullopt;
            else
                rows[i][j] = tokens[v % tokens.size()];
        }
    return Relation::from_cells(Schema(names), rows, "random");
}

}  // namespace testsupport
