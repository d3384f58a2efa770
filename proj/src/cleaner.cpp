#include "bayesclean/cleaner.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <unordered_map>

namespace bayesclean {

namespace {

std::string pack_row(const Row& t) {
    return std::string(reinterpret_cast<const char*>(t.data()),
                       t.size() * sizeof(ValueId));
}

// NULL sorts before any token
bool row_less(const ValuePool& pool, const Row& a, const Row& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == b[i]) continue;
        if (a[i] == kNull) return true;
        if (b[i] == kNull) return false;
        int c = pool.token(a[i]).compare(pool.token(b[i]));
        if (c != 0) return c < 0;
    }
    return false;
}

constexpr std::uint32_t kDistSat = 1u << 20;  // per-attribute saturation

}  // namespace

std::size_t tuple_distance(const ValuePool& pool, const Row& a, const Row& b,
                           std::size_t cap) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size() && d < cap; ++i)
        d += edit_distance_capped(
            a[i] == kNull ? std::nullopt
                          : std::optional<std::string_view>(pool.token(a[i])),
            b[i] == kNull ? std::nullopt
                          : std::optional<std::string_view>(pool.token(b[i])),
            cap);
    return std::min(d, cap);
}

CandidateSet generate_candidates(const Relation& r, const Row& t,
                                 std::size_t threshold) {
    if (t.size() != r.arity()) throw std::invalid_argument("tuple arity mismatch");
    const std::size_t cap =
        threshold >= kDistSat ? kDistSat : threshold + 1;
    CandidateSet set;
    set.observed = t;
    std::unordered_map<std::string, bool> seen;
    bool observed_present = false;
    for (const Row& row : r.rows()) {
        auto [it, inserted] = seen.try_emplace(pack_row(row), false);
        if (!inserted) continue;
        if (tuple_distance(r.pool(), t, row, cap) <= threshold) {
            set.candidates.push_back(row);
            if (row == t) observed_present = true;
        }
    }
    if (!observed_present) set.candidates.push_back(t);
    return set;
}

// Dense per-attribute candidate machinery: distinct tuples in first
// occurrence order, per-attribute value indices, and lazily filled
// distance rows so the candidate scan is pure array arithmetic.
struct TupleCleaner::Impl {
    std::vector<Row> distinct_rows;
    std::unordered_map<std::string, std::uint32_t> row_lookup;
    std::vector<std::vector<ValueId>> attr_values;                // dense id -> value
    std::vector<std::unordered_map<ValueId, std::uint32_t>> attr_dense;
    std::vector<std::vector<std::uint32_t>> row_dense;            // per distinct row

    std::uint32_t cap = 0;
    // per attribute: observed value -> distances to every attr value
    mutable std::vector<std::unordered_map<ValueId, std::vector<std::uint32_t>>>
        dist_rows;
    mutable std::vector<double> log_joint_cache;  // NaN = unset
    mutable std::unordered_map<std::string, Repair> repair_cache;

    const std::vector<std::uint32_t>& distance_row(const Relation& rel,
                                                   std::size_t attr,
                                                   ValueId observed) const {
        auto it = dist_rows[attr].find(observed);
        if (it != dist_rows[attr].end()) return it->second;
        const auto& values = attr_values[attr];
        std::vector<std::uint32_t> row(values.size());
        auto obs = observed == kNull
                       ? std::nullopt
                       : std::optional<std::string_view>(rel.pool().token(observed));
        for (std::size_t k = 0; k < values.size(); ++k) {
            auto cand = values[k] == kNull ? std::nullopt
                                           : std::optional<std::string_view>(
                                                 rel.pool().token(values[k]));
            row[k] = static_cast<std::uint32_t>(edit_distance_capped(obs, cand, cap));
        }
        return dist_rows[attr].emplace(observed, std::move(row)).first->second;
    }
};

TupleCleaner::TupleCleaner(const Relation& r, const DomainIndex& idx,
                           const BayesNet& bn, const CleanConfig& cfg)
    : rel_(r), idx_(idx), bn_(bn), cfg_(cfg), impl_(std::make_unique<Impl>()) {
    const std::size_t m = r.arity();
    impl_->cap = cfg.edit_threshold >= kDistSat
                     ? kDistSat
                     : static_cast<std::uint32_t>(cfg.edit_threshold) + 1;
    impl_->attr_values.resize(m);
    impl_->attr_dense.resize(m);
    impl_->dist_rows.resize(m);
    for (const Row& row : r.rows()) {
        auto [it, inserted] =
            impl_->row_lookup.try_emplace(pack_row(row),
                                          static_cast<std::uint32_t>(impl_->distinct_rows.size()));
        if (!inserted) continue;
        impl_->distinct_rows.push_back(row);
        std::vector<std::uint32_t> dense(m);
        for (std::size_t j = 0; j < m; ++j) {
            auto [vit, vins] = impl_->attr_dense[j].try_emplace(
                row[j], static_cast<std::uint32_t>(impl_->attr_values[j].size()));
            if (vins) impl_->attr_values[j].push_back(row[j]);
            dense[j] = vit->second;
        }
        impl_->row_dense.push_back(std::move(dense));
    }
    impl_->log_joint_cache.assign(impl_->distinct_rows.size(),
                                  std::numeric_limits<double>::quiet_NaN());
}

TupleCleaner::~TupleCleaner() = default;

CandidateSet TupleCleaner::candidates(const Row& t) const {
    if (t.size() != rel_.arity()) throw std::invalid_argument("tuple arity mismatch");
    const std::size_t m = t.size();
    const std::uint32_t threshold =
        cfg_.edit_threshold >= kDistSat ? kDistSat
                                        : static_cast<std::uint32_t>(cfg_.edit_threshold);

    std::vector<const std::vector<std::uint32_t>*> rows(m);
    for (std::size_t j = 0; j < m; ++j)
        rows[j] = &impl_->distance_row(rel_, j, t[j]);

    CandidateSet set;
    set.observed = t;
    bool observed_present = false;
    for (std::size_t r = 0; r < impl_->distinct_rows.size(); ++r) {
        const auto& dense = impl_->row_dense[r];
        std::uint64_t d = 0;
        for (std::size_t j = 0; j < m; ++j) {
            d += (*rows[j])[dense[j]];
            if (d > threshold) break;
        }
        if (d <= threshold) {
            set.candidates.push_back(impl_->distinct_rows[r]);
            if (impl_->distinct_rows[r] == t) observed_present = true;
        }
    }
    if (!observed_present) set.candidates.push_back(t);
    return set;
}

double score_candidate(const Relation& r, const DomainIndex& idx,
                       const BayesNet& bn, const ErrorModelParams& params,
                       const Row& observed, const Row& candidate,
                       const CandidateSet& set) {
    const std::size_t m = observed.size();
    std::vector<std::vector<ValueId>> pools(m);
    for (std::size_t j = 0; j < m; ++j)
        for (const Row& c : set.candidates)
            if (std::find(pools[j].begin(), pools[j].end(), c[j]) == pools[j].end())
                pools[j].push_back(c[j]);
    return tuple_error_log_prob(r, idx, observed, candidate, pools, params) +
           bn.log_joint(candidate);
}

Repair TupleCleaner::clean_tuple(const Row& t) const {
    std::string key = pack_row(t);
    auto cached = impl_->repair_cache.find(key);
    if (cached != impl_->repair_cache.end()) return cached->second;

    const std::size_t m = t.size();
    CandidateSet set = candidates(t);
    const auto& cands = set.candidates;

    // per-attribute pools projected from the candidate set
    std::vector<std::vector<ValueId>> pools(m);
    for (std::size_t j = 0; j < m; ++j)
        for (const Row& c : cands)
            if (std::find(pools[j].begin(), pools[j].end(), c[j]) == pools[j].end())
                pools[j].push_back(c[j]);

    // normalized per-attribute log error probabilities, shared by all
    // candidates of this observed tuple
    std::vector<std::unordered_map<ValueId, double>> log_probs(m);
    for (std::size_t j = 0; j < m; ++j) {
        auto lp = attribute_error_log_probs(rel_, idx_, t, j, pools[j], cfg_.error);
        for (std::size_t k = 0; k < pools[j].size(); ++k)
            log_probs[j].emplace(pools[j][k], lp[k]);
    }

    auto log_prior = [&](const Row& c) {
        auto it = impl_->row_lookup.find(pack_row(c));
        if (it == impl_->row_lookup.end()) return bn_.log_joint(c);
        double& slot = impl_->log_joint_cache[it->second];
        if (std::isnan(slot)) slot = bn_.log_joint(c);
        return slot;
    };

    std::vector<double> scores(cands.size());
    std::size_t observed_at = cands.size();
    for (std::size_t k = 0; k < cands.size(); ++k) {
        double err = 0.0;
        for (std::size_t j = 0; j < m; ++j) err += log_probs[j].at(cands[k][j]);
        scores[k] = err + log_prior(cands[k]);
        if (cands[k] == t) observed_at = k;
    }

    const double best = *std::max_element(scores.begin(), scores.end());
    std::size_t chosen = observed_at;
    if (scores[observed_at] != best) {
        // ties in favor of the observed tuple were just excluded; among the
        // rest, lexicographic tuple order
        chosen = cands.size();
        for (std::size_t k = 0; k < cands.size(); ++k) {
            if (scores[k] != best) continue;
            if (chosen == cands.size() ||
                row_less(rel_.pool(), cands[k], cands[chosen]))
                chosen = k;
        }
    }

    Repair rep;
    rep.original = t;
    rep.chosen = cands[chosen];
    rep.log_posterior = scores[chosen];
    for (std::size_t j = 0; j < m; ++j)
        if (rep.chosen[j] != t[j]) rep.changed_attributes.push_back(j);
    if (cands.size() > 1) {
        double second = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < cands.size(); ++k)
            if (k != chosen) second = std::max(second, scores[k]);
        rep.runner_up_margin = scores[chosen] - second;
    }

    impl_->repair_cache.emplace(std::move(key), rep);
    return rep;
}

std::pair<Relation, std::vector<Repair>> clean_relation(const Relation& r,
                                                        const CleanConfig& cfg) {
    DomainIndex idx = DomainIndex::build(r);
    NetworkStructure s = learn_structure(r, cfg.structure);
    BayesNet bn = BayesNet::learn(r, s, cfg.smoothing);
    TupleCleaner cleaner(r, idx, bn, cfg);

    std::vector<Repair> repairs;
    repairs.reserve(r.size());
    std::vector<Row> rows;
    rows.reserve(r.size());
    for (const Row& row : r.rows()) {
        Repair rep = cleaner.clean_tuple(row);
        rows.push_back(rep.chosen);
        repairs.push_back(std::move(rep));
    }
    return {r.with_rows(std::move(rows)), std::move(repairs)};
}

}  // namespace bayesclean
