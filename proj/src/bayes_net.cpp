#include "bayesclean/bayes_net.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "rng_util.hpp"

namespace bayesclean {

bool NetworkStructure::has_edge(std::size_t parent, std::size_t child) const {
    const auto& p = parents_.at(child);
    return std::find(p.begin(), p.end(), parent) != p.end();
}

void NetworkStructure::add_edge(std::size_t parent, std::size_t child) {
    auto& p = parents_.at(child);
    p.insert(std::upper_bound(p.begin(), p.end(), parent), parent);
}

void NetworkStructure::remove_edge(std::size_t parent, std::size_t child) {
    auto& p = parents_.at(child);
    p.erase(std::remove(p.begin(), p.end(), parent), p.end());
}

bool NetworkStructure::creates_cycle(std::size_t parent, std::size_t child) const {
    if (parent == child) return true;
    // cycle iff child is already an ancestor of parent
    std::vector<std::size_t> stack{parent};
    std::vector<bool> seen(node_count());
    while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        for (std::size_t p : parents_[v]) {
            if (p == child) return true;
            if (!seen[p]) {
                seen[p] = true;
                stack.push_back(p);
            }
        }
    }
    return false;
}

bool NetworkStructure::is_acyclic() const {
    // peel nodes whose remaining parents are all peeled
    const std::size_t n = node_count();
    std::vector<bool> done(n);
    std::size_t peeled = 0;
    bool progress = true;
    while (progress) {
        progress = false;
        for (std::size_t v = 0; v < n; ++v) {
            if (done[v]) continue;
            bool ready = true;
            for (std::size_t p : parents_[v])
                if (!done[p]) { ready = false; break; }
            if (ready) {
                done[v] = true;
                ++peeled;
                progress = true;
            }
        }
    }
    return peeled == n;
}

std::vector<std::pair<std::size_t, std::size_t>> NetworkStructure::edge_list() const {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t child = 0; child < node_count(); ++child)
        for (std::size_t p : parents_[child]) edges.emplace_back(p, child);
    std::sort(edges.begin(), edges.end());
    return edges;
}

namespace {

std::string pack_parent_values(const Row& t, const std::vector<std::size_t>& parents) {
    std::string key;
    key.reserve(parents.size() * sizeof(ValueId));
    for (std::size_t p : parents) {
        ValueId v = t[p];
        key.append(reinterpret_cast<const char*>(&v), sizeof(ValueId));
    }
    return key;
}

std::vector<std::size_t> attr_domain_sizes(const Relation& r) {
    std::vector<std::unordered_set<ValueId>> seen(r.arity());
    for (const Row& row : r.rows())
        for (std::size_t j = 0; j < row.size(); ++j) seen[j].insert(row[j]);
    std::vector<std::size_t> sizes(r.arity());
    for (std::size_t j = 0; j < sizes.size(); ++j) sizes[j] = seen[j].size();
    return sizes;
}

// Decomposable per-family BIC term: MLE log-likelihood of the child given
// its parents, minus (ln n)/2 times the family's free parameters.
double family_bic(const Relation& r, std::size_t child,
                  const std::vector<std::size_t>& parents,
                  const std::vector<std::size_t>& domain_sizes) {
    struct Entry {
        std::unordered_map<ValueId, std::uint32_t> counts;
        std::uint32_t total = 0;
    };
    std::unordered_map<std::string, Entry> table;
    for (const Row& row : r.rows()) {
        Entry& e = table[pack_parent_values(row, parents)];
        ++e.counts[row[child]];
        ++e.total;
    }
    double ll = 0.0;
    for (const auto& [key, e] : table)
        for (const auto& [v, c] : e.counts)
            ll += c * std::log(static_cast<double>(c) / e.total);

    double params = static_cast<double>(domain_sizes[child] - 1);
    for (std::size_t p : parents) params *= static_cast<double>(domain_sizes[p]);
    return ll - 0.5 * std::log(static_cast<double>(r.size())) * params;
}

std::vector<std::pair<std::string, std::string>> named_edges(
    const Relation& r, const NetworkStructure& s) {
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& [p, c] : s.edge_list())
        edges.emplace_back(r.schema().name(p), r.schema().name(c));
    std::sort(edges.begin(), edges.end());
    return edges;
}

}  // namespace

double bic_score(const Relation& r, const NetworkStructure& s) {
    if (r.size() == 0) throw std::invalid_argument("empty relation");
    if (!s.is_acyclic()) throw std::invalid_argument("structure has a cycle");
    auto sizes = attr_domain_sizes(r);
    double total = 0.0;
    for (std::size_t v = 0; v < s.node_count(); ++v)
        total += family_bic(r, v, s.parents(v), sizes);
    return total;
}

NetworkStructure learn_structure(const Relation& r, const StructureConfig& cfg) {
    if (r.size() == 0) throw std::invalid_argument("empty relation");
    const std::size_t m = r.arity();
    const auto sizes = attr_domain_sizes(r);

    // family scores are reused heavily across moves and restarts
    std::unordered_map<std::string, double> cache;
    auto family_score = [&](std::size_t child, const std::vector<std::size_t>& parents) {
        std::string key(reinterpret_cast<const char*>(&child), sizeof(child));
        for (std::size_t p : parents)
            key.append(reinterpret_cast<const char*>(&p), sizeof(p));
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        double sc = family_bic(r, child, parents, sizes);
        cache.emplace(std::move(key), sc);
        return sc;
    };

    auto structure_score = [&](const NetworkStructure& s) {
        double total = 0.0;
        for (std::size_t v = 0; v < m; ++v) total += family_score(v, s.parents(v));
        return total;
    };

    constexpr double kMinGain = 1e-9;

    auto climb = [&](NetworkStructure s) {
        while (true) {
            double best_gain = 0.0;
            NetworkStructure best_next;
            std::vector<std::pair<std::string, std::string>> best_edges;
            bool found = false;

            // higher gain wins; equal gain falls back to the
            // lexicographically smaller edge list (attribute names)
            auto consider = [&](NetworkStructure next, double gain) {
                if (gain < kMinGain) return;
                if (found && gain < best_gain) return;
                auto edges = named_edges(r, next);
                if (found && gain == best_gain && !(edges < best_edges)) return;
                best_gain = gain;
                best_next = std::move(next);
                best_edges = std::move(edges);
                found = true;
            };

            for (std::size_t child = 0; child < m; ++child) {
                const auto& pa = s.parents(child);
                double base_child = family_score(child, pa);
                for (std::size_t parent = 0; parent < m; ++parent) {
                    if (parent == child) continue;
                    if (!s.has_edge(parent, child)) {
                        if (pa.size() >= cfg.max_parents) continue;
                        if (s.has_edge(child, parent)) continue;
                        if (s.creates_cycle(parent, child)) continue;
                        NetworkStructure next = s;
                        next.add_edge(parent, child);
                        double gain = family_score(child, next.parents(child)) - base_child;
                        consider(std::move(next), gain);
                    } else {
                        // delete parent -> child
                        {
                            NetworkStructure next = s;
                            next.remove_edge(parent, child);
                            double gain = family_score(child, next.parents(child)) - base_child;
                            consider(std::move(next), gain);
                        }
                        // reverse to child -> parent
                        if (s.parents(parent).size() < cfg.max_parents) {
                            NetworkStructure next = s;
                            next.remove_edge(parent, child);
                            if (!next.creates_cycle(child, parent)) {
                                next.add_edge(child, parent);
                                double gain =
                                    family_score(child, next.parents(child)) - base_child +
                                    family_score(parent, next.parents(parent)) -
                                    family_score(parent, s.parents(parent));
                                consider(std::move(next), gain);
                            }
                        }
                    }
                }
            }
            if (!found) break;
            s = std::move(best_next);
        }
        return std::make_pair(structure_score(s), s);
    };

    NetworkStructure best;
    double best_score = 0.0;
    std::vector<std::pair<std::string, std::string>> best_edges;
    bool have_best = false;

    for (std::size_t restart = 0; restart <= cfg.restarts; ++restart) {
        NetworkStructure start(m);
        if (restart > 0) {
            // random DAG: random topological order, then sparse forward edges
            std::mt19937_64 g(detail::mix_seed(cfg.seed, restart));
            std::vector<std::size_t> order(m);
            for (std::size_t i = 0; i < m; ++i) order[i] = i;
            for (std::size_t i = m; i > 1; --i)
                std::swap(order[i - 1], order[detail::draw_index(g, i)]);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = i + 1; j < m; ++j) {
                    if (start.parents(order[j]).size() >= cfg.max_parents) continue;
                    if (detail::draw_unit(g) < 0.25) start.add_edge(order[i], order[j]);
                }
        }
        auto [score, s] = climb(std::move(start));
        auto edges = named_edges(r, s);
        if (!have_best || score > best_score ||
            (score == best_score && edges < best_edges)) {
            best = std::move(s);
            best_score = score;
            best_edges = std::move(edges);
            have_best = true;
        }
    }
    return best;
}

std::string BayesNet::pack_key(const Row& t, const std::vector<std::size_t>& parents) {
    return pack_parent_values(t, parents);
}

BayesNet BayesNet::learn(const Relation& r, const NetworkStructure& s,
                         double smoothing) {
    if (smoothing <= 0) throw std::invalid_argument("smoothing must be positive");
    if (!s.is_acyclic()) throw std::invalid_argument("structure has a cycle");
    if (s.node_count() != r.arity())
        throw std::invalid_argument("structure/schema arity mismatch");

    BayesNet bn;
    bn.structure_ = s;
    bn.smoothing_ = smoothing;
    const std::size_t m = r.arity();
    bn.domains_.resize(m);
    bn.domain_sets_.resize(m);
    bn.families_.resize(m);

    for (const Row& row : r.rows())
        for (std::size_t j = 0; j < m; ++j)
            if (bn.domain_sets_[j].insert(row[j]).second)
                bn.domains_[j].push_back(row[j]);

    for (std::size_t v = 0; v < m; ++v) {
        auto& fam = bn.families_[v];
        const auto& parents = s.parents(v);
        for (const Row& row : r.rows()) {
            auto& entry = fam.table[pack_parent_values(row, parents)];
            ++entry.counts[row[v]];
            ++entry.total;
        }
    }
    return bn;
}

double BayesNet::conditional(std::size_t node, const Row& t) const {
    const auto& fam = families_.at(node);
    const double d = static_cast<double>(domains_[node].size());
    const double s = smoothing_;
    const bool in_domain = domain_sets_[node].count(t.at(node)) > 0;

    auto it = fam.table.find(pack_key(t, structure_.parents(node)));
    if (it == fam.table.end()) {
        ++unseen_parent_queries_;
        return in_domain ? 1.0 / d : 1.0 / (d + 1.0);
    }
    const auto& entry = it->second;
    if (!in_domain) return s / (entry.total + s * (d + 1.0));
    auto cit = entry.counts.find(t[node]);
    const double c = cit == entry.counts.end() ? 0.0 : static_cast<double>(cit->second);
    return (c + s) / (entry.total + s * d);
}

double BayesNet::joint_probability(const Row& t) const {
    double p = 1.0;
    for (std::size_t v = 0; v < structure_.node_count(); ++v) p *= conditional(v, t);
    return p;
}

double BayesNet::log_joint(const Row& t) const {
    double lp = 0.0;
    for (std::size_t v = 0; v < structure_.node_count(); ++v)
        lp += std::log(conditional(v, t));
    return lp;
}

namespace {

nlohmann::json cell_to_json(const ValuePool& pool, ValueId v) {
    if (v == kNull) return nullptr;
    return pool.token(v);
}

ValueId cell_from_json(const nlohmann::json& j, ValuePool& pool) {
    if (j.is_null()) return kNull;
    return pool.intern(j.get<std::string>());
}

}  // namespace

nlohmann::json BayesNet::to_json(const Schema& schema, const ValuePool& pool) const {
    nlohmann::json j;
    j["smoothing"] = smoothing_;
    j["attributes"] = schema.names();

    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [p, c] : structure_.edge_list())
        edges.push_back({schema.name(p), schema.name(c)});
    j["edges"] = edges;

    nlohmann::json nodes = nlohmann::json::array();
    for (std::size_t v = 0; v < structure_.node_count(); ++v) {
        nlohmann::json node;
        node["attribute"] = schema.name(v);
        nlohmann::json domain = nlohmann::json::array();
        for (ValueId d : domains_[v]) domain.push_back(cell_to_json(pool, d));
        node["domain"] = domain;

        const auto& parents = structure_.parents(v);
        nlohmann::json cpt = nlohmann::json::array();
        // sort entries by parent tokens for a stable file
        std::vector<std::pair<std::vector<std::string>, const Family::Entry*>> rows;
        for (const auto& [key, entry] : families_[v].table) {
            std::vector<std::string> toks;
            for (std::size_t k = 0; k < parents.size(); ++k) {
                ValueId pv;
                std::memcpy(&pv, key.data() + k * sizeof(ValueId), sizeof(ValueId));
                toks.push_back(pv == kNull ? std::string() : "\x01" + pool.token(pv));
            }
            rows.emplace_back(std::move(toks), &entry);
        }
        std::sort(rows.begin(), rows.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [toks, entry] : rows) {
            nlohmann::json e;
            nlohmann::json pv = nlohmann::json::array();
            for (const auto& t : toks)
                pv.push_back(t.empty() ? nlohmann::json(nullptr)
                                       : nlohmann::json(t.substr(1)));
            e["parents"] = pv;
            e["total"] = entry->total;
            std::vector<std::pair<std::string, std::uint32_t>> counts;
            bool has_null = false;
            std::uint32_t null_count = 0;
            for (const auto& [cv, c] : entry->counts) {
                if (cv == kNull) {
                    has_null = true;
                    null_count = c;
                } else {
                    counts.emplace_back(pool.token(cv), c);
                }
            }
            std::sort(counts.begin(), counts.end());
            nlohmann::json cj = nlohmann::json::array();
            if (has_null) cj.push_back({nlohmann::json(nullptr), null_count});
            for (const auto& [tok, c] : counts) cj.push_back({tok, c});
            e["counts"] = cj;
            cpt.push_back(std::move(e));
        }
        node["cpt"] = cpt;
        nodes.push_back(std::move(node));
    }
    j["nodes"] = nodes;
    return j;
}

BayesNet BayesNet::from_json(const nlohmann::json& j, const Schema& schema,
                             ValuePool& pool) {
    if (j.at("attributes").get<std::vector<std::string>>() != schema.names())
        throw std::runtime_error("model schema does not match relation schema");

    BayesNet bn;
    bn.smoothing_ = j.at("smoothing").get<double>();
    const std::size_t m = schema.arity();
    bn.structure_ = NetworkStructure(m);
    for (const auto& e : j.at("edges")) {
        auto p = schema.index_of(e.at(0).get<std::string>());
        auto c = schema.index_of(e.at(1).get<std::string>());
        if (!p || !c) throw std::runtime_error("model edge names unknown attribute");
        bn.structure_.add_edge(*p, *c);
    }
    if (!bn.structure_.is_acyclic())
        throw std::runtime_error("model structure has a cycle");

    bn.domains_.resize(m);
    bn.domain_sets_.resize(m);
    bn.families_.resize(m);
    for (const auto& node : j.at("nodes")) {
        auto vi = schema.index_of(node.at("attribute").get<std::string>());
        if (!vi) throw std::runtime_error("model node names unknown attribute");
        const std::size_t v = *vi;
        for (const auto& d : node.at("domain")) {
            ValueId id = cell_from_json(d, pool);
            if (bn.domain_sets_[v].insert(id).second) bn.domains_[v].push_back(id);
        }
        const auto& parents = bn.structure_.parents(v);
        for (const auto& e : node.at("cpt")) {
            const auto& pv = e.at("parents");
            if (pv.size() != parents.size())
                throw std::runtime_error("model CPT parent arity mismatch");
            Row key_row(m, kNull);
            for (std::size_t k = 0; k < parents.size(); ++k)
                key_row[parents[k]] = cell_from_json(pv[k], pool);
            auto& entry = bn.families_[v].table[pack_parent_values(key_row, parents)];
            entry.total = e.at("total").get<std::uint32_t>();
            for (const auto& c : e.at("counts"))
                entry.counts[cell_from_json(c.at(0), pool)] = c.at(1).get<std::uint32_t>();
        }
    }
    return bn;
}

}  // namespace bayesclean
