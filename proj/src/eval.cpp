#include "bayesclean/eval.hpp"

#include <chrono>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

namespace bayesclean {

nlohmann::json CleaningMetrics::to_json() const {
    return {{"values_corrected", values_corrected},
            {"false_positives", false_positives},
            {"missed", missed},
            {"overall_gain", overall_gain},
            {"correction_rate", correction_rate}};
}

CleaningMetrics score(const Relation& clean, const Relation& dirty,
                      const Relation& repaired, const GroundTruth& gt) {
    const std::size_t n = clean.size(), m = clean.arity();
    if (dirty.size() != n || repaired.size() != n || dirty.arity() != m ||
        repaired.arity() != m)
        throw std::invalid_argument("relations are not cell-aligned");

    std::unordered_set<std::uint64_t> dirty_cells;
    for (const Corruption& e : gt.entries) {
        if (e.row >= n || e.attr >= m)
            throw std::invalid_argument("ground truth coordinates out of range");
        dirty_cells.insert(static_cast<std::uint64_t>(e.row) * m + e.attr);
    }

    CleaningMetrics out;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const auto c = clean.cell(i, j);
            const auto d = dirty.cell(i, j);
            const auto rep = repaired.cell(i, j);
            if (dirty_cells.count(static_cast<std::uint64_t>(i) * m + j)) {
                if (rep == c)
                    ++out.values_corrected;
                else
                    ++out.missed;
            } else {
                if (rep != d) ++out.false_positives;
            }
        }
    }
    out.overall_gain = static_cast<std::int64_t>(out.values_corrected) -
                       static_cast<std::int64_t>(out.false_positives);
    out.correction_rate =
        gt.entries.empty()
            ? 0.0
            : static_cast<double>(out.values_corrected) / gt.entries.size();
    return out;
}

namespace {

struct PointRun {
    CleaningMetrics metrics;
    double seconds = 0.0;
};

PointRun run_point(const Relation& clean, const NoiseSpec& noise,
                   const CleanConfig& cfg) {
    auto [dirty, gt] = inject(clean, noise);
    auto t0 = std::chrono::steady_clock::now();
    auto [repaired, repairs] = clean_relation(dirty, cfg);
    auto t1 = std::chrono::steady_clock::now();
    PointRun run;
    run.metrics = score(clean, dirty, repaired, gt);
    run.seconds = std::chrono::duration<double>(t1 - t0).count();
    return run;
}

}  // namespace

SweepResult sweep_beta(const Relation& clean, const NoiseSpec& noise,
                       const std::vector<double>& betas, double alpha_ratio,
                       const CleanConfig& base) {
    SweepResult res;
    res.axis = "beta";
    for (double beta : betas) {
        CleanConfig cfg = base;
        cfg.error.beta = beta;
        cfg.error.alpha = alpha_ratio * beta;
        PointRun run = run_point(clean, noise, cfg);
        SweepPoint p;
        p.param = beta;
        p.rows = clean.size();
        p.tau = noise.tau;
        p.alpha = cfg.error.alpha;
        p.beta = beta;
        p.metrics = run.metrics;
        p.seconds = run.seconds;
        res.points.push_back(p);
    }
    return res;
}

SweepResult sweep_scale(const Relation& clean, const std::vector<double>& taus,
                        const std::vector<std::size_t>& sizes,
                        const NoiseSpec& noise, const CleanConfig& base) {
    SweepResult res;
    res.axis = sizes.size() == 1 && taus.size() > 1 ? "tau" : "n";
    for (std::size_t n : sizes) {
        if (n > clean.size())
            throw std::invalid_argument("sweep size exceeds the clean relation");
        std::vector<Row> prefix(clean.rows().begin(),
                                clean.rows().begin() + static_cast<std::ptrdiff_t>(n));
        Relation slice = clean.with_rows(std::move(prefix));
        for (double tau : taus) {
            NoiseSpec spec = noise;
            spec.tau = tau;
            PointRun run = run_point(slice, spec, base);
            SweepPoint p;
            p.param = res.axis == "tau" ? tau : static_cast<double>(n);
            p.rows = n;
            p.tau = tau;
            p.alpha = base.error.alpha;
            p.beta = base.error.beta;
            p.metrics = run.metrics;
            p.seconds = run.seconds;
            res.points.push_back(p);
        }
    }
    return res;
}

void write_sweep_csv(const SweepResult& res, std::ostream& out) {
    out << "axis,param,n,tau,alpha,beta,values_corrected,false_positives,missed,"
           "overall_gain,correction_rate,seconds\n";
    for (const SweepPoint& p : res.points) {
        out << res.axis << ',' << p.param << ',' << p.rows << ',' << p.tau << ','
            << p.alpha << ',' << p.beta << ',' << p.metrics.values_corrected << ','
            << p.metrics.false_positives << ',' << p.metrics.missed << ','
            << p.metrics.overall_gain << ',' << p.metrics.correction_rate << ','
            << p.seconds << '\n';
    }
}

}  // namespace bayesclean
