#include "bayesclean/error_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bayesclean {

std::size_t edit_distance(std::optional<std::string_view> a,
                          std::optional<std::string_view> b) {
    return edit_distance_capped(a, b, static_cast<std::size_t>(-1));
}

std::size_t edit_distance_capped(std::optional<std::string_view> a,
                                 std::optional<std::string_view> b,
                                 std::size_t cap) {
    std::string_view s = a.value_or(std::string_view{});
    std::string_view t = b.value_or(std::string_view{});
    if (s == t && a.has_value() == b.has_value()) return 0;
    if (s.size() < t.size()) std::swap(s, t);
    std::size_t lower = s.size() - t.size();
    if (lower >= cap) return cap;
    if (t.empty()) return std::min(s.size(), cap);

    // two-row DP over the shorter string
    std::vector<std::size_t> prev(t.size() + 1), cur(t.size() + 1);
    for (std::size_t j = 0; j <= t.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= s.size(); ++i) {
        cur[0] = i;
        std::size_t row_min = cur[0];
        for (std::size_t j = 1; j <= t.size(); ++j) {
            std::size_t sub = prev[j - 1] + (s[i - 1] != t[j - 1]);
            cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
            row_min = std::min(row_min, cur[j]);
        }
        if (row_min >= cap) return cap;
        std::swap(prev, cur);
    }
    return std::min(prev[t.size()], cap);
}

std::size_t edit_distance(const ValuePool& pool, ValueId a, ValueId b) {
    std::optional<std::string_view> sa, sb;
    if (a != kNull) sa = std::string_view(pool.token(a));
    if (b != kNull) sb = std::string_view(pool.token(b));
    return edit_distance(sa, sb);
}

double f_ed(const ValuePool& pool, ValueId observed, ValueId candidate) {
    return std::exp(-static_cast<double>(edit_distance(pool, observed, candidate)));
}

std::vector<ValueId> context_set(const DomainIndex& idx, const Row& observed,
                                 std::size_t attr, ValueId candidate) {
    const ValueId obs_value = observed.at(attr);
    std::vector<ValueId> ctx;
    ctx.reserve(observed.size() - 1);
    for (std::size_t j = 0; j < observed.size(); ++j) {
        if (j == attr) continue;
        ValueId c = observed[j];
        if (std::find(ctx.begin(), ctx.end(), c) != ctx.end()) continue;
        if (idx.pair_count(c, obs_value) == 0) continue;
        if (idx.pair_count(c, candidate) == 0) continue;
        ctx.push_back(c);
    }
    return ctx;
}

double f_ds(const DomainIndex& idx, ValueId observed, ValueId candidate,
            std::span<const ValueId> context, double mu) {
    const double n_obs = idx.count(observed);
    const double n_cand = idx.count(candidate);
    if (n_cand == 0) return 0.0;  // candidates come from the database
    if (n_obs == 0) return 0.0;   // Pr[observed] = 0 zeroes every term

    double sum = 0.0;
    for (ValueId c : context) {
        const double n_c = idx.count(c);
        if (n_c == 0) continue;
        // Pr[c|cand] * Pr[c|obs] * Pr[obs] / Pr[c]; the n and #(obs)
        // factors cancel
        sum += (idx.pair_count(c, candidate) + mu) * (idx.pair_count(c, observed) + mu) /
               (n_cand * n_c);
    }
    return sum;
}

std::vector<double> attribute_error_log_probs(const Relation& r,
                                              const DomainIndex& idx,
                                              const Row& observed,
                                              std::size_t attr,
                                              std::span<const ValueId> pool,
                                              const ErrorModelParams& params) {
    if (pool.empty()) throw std::invalid_argument("empty candidate pool");
    const ValueId obs_value = observed.at(attr);
    std::vector<double> logits(pool.size());
    for (std::size_t k = 0; k < pool.size(); ++k) {
        auto ctx = context_set(idx, observed, attr, pool[k]);
        logits[k] = params.alpha * f_ed(r.pool(), obs_value, pool[k]) +
                    params.beta * f_ds(idx, obs_value, pool[k], ctx, params.mu);
    }
    double max_logit = *std::max_element(logits.begin(), logits.end());
    double z = 0.0;
    for (double w : logits) z += std::exp(w - max_logit);
    const double log_z = max_logit + std::log(z);
    for (double& w : logits) w -= log_z;
    return logits;
}

double attribute_error_probability(const Relation& r, const DomainIndex& idx,
                                   const Row& observed, std::size_t attr,
                                   ValueId candidate,
                                   std::span<const ValueId> pool,
                                   const ErrorModelParams& params) {
    auto it = std::find(pool.begin(), pool.end(), candidate);
    if (it == pool.end())
        throw std::invalid_argument("candidate not in its own pool");
    auto log_probs = attribute_error_log_probs(r, idx, observed, attr, pool, params);
    return std::exp(log_probs[static_cast<std::size_t>(it - pool.begin())]);
}

double tuple_error_log_prob(const Relation& r, const DomainIndex& idx,
                            const Row& observed, const Row& candidate,
                            std::span<const std::vector<ValueId>> pools,
                            const ErrorModelParams& params) {
    if (observed.size() != candidate.size() || pools.size() != observed.size())
        throw std::invalid_argument("tuple/pool arity mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        auto log_probs = attribute_error_log_probs(r, idx, observed, i, pools[i], params);
        auto it = std::find(pools[i].begin(), pools[i].end(), candidate[i]);
        if (it == pools[i].end())
            throw std::invalid_argument("candidate value missing from pool");
        total += log_probs[static_cast<std::size_t>(it - pools[i].begin())];
    }
    return total;
}

}  // namespace bayesclean
