#include "staleracer/trace.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <unordered_map>

#include "staleracer/csv.hpp"
#include "staleracer/errors.hpp"

namespace staleracer {

std::string format_sig9(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

const Eigen::VectorXd& Trace::parameters_before(std::size_t j) const {
    if (!has_parameters()) throw InsufficientRecords("trace has no parameter snapshots");
    if (j >= records.size()) throw std::out_of_range("update index out of range");
    return j == 0 ? w0 : parameters[j - 1];
}

double empirical_gamma(const Trace& trace, const Objective& obj) {
    if (trace.records.empty()) throw InsufficientRecords("trace has no updates");
    if (!trace.has_parameters())
        throw InsufficientRecords("staleness coefficient needs parameter snapshots");

    double drift = 0.0;
    double reference = 0.0;
    // gradients at past versions recur across contributors; cache per version
    std::unordered_map<std::size_t, Eigen::VectorXd> grad_cache;
    const auto grad_at = [&](std::size_t version) -> const Eigen::VectorXd& {
        auto it = grad_cache.find(version);
        if (it == grad_cache.end())
            it = grad_cache.emplace(version, full_gradient(obj, trace.parameters_before(version)))
                     .first;
        return it->second;
    };

    for (std::size_t j = 0; j < trace.records.size(); ++j) {
        const auto& rec = trace.records[j];
        if (rec.staleness.empty()) continue;
        const Eigen::VectorXd& g_now = grad_at(j);
        const double g_now_sq = g_now.squaredNorm();
        for (std::int32_t s : rec.staleness) {
            reference += g_now_sq;
            if (s == 0) continue;
            drift += (g_now - grad_at(j - static_cast<std::size_t>(s))).squaredNorm();
        }
        if (grad_cache.size() > 4096) grad_cache.clear();
    }
    return reference > 0.0 ? drift / reference : 0.0;
}

double empirical_p0(const Trace& trace) {
    long fresh = 0;
    long total = 0;
    for (const auto& rec : trace.records)
        for (std::int32_t s : rec.staleness) {
            ++total;
            if (s == 0) ++fresh;
        }
    if (total == 0) throw InsufficientRecords("trace has no contributions");
    return static_cast<double>(fresh) / static_cast<double>(total);
}

void write_trace_csv(const Trace& trace, std::ostream& out, bool controller_columns) {
    out << "j,wallclock,loss,grad_norm_sq,staleness_mean,staleness_max,contributors";
    if (controller_columns) out << ",slot,K";
    out << "\n";
    for (std::size_t j = 0; j < trace.records.size(); ++j) {
        const auto& rec = trace.records[j];
        out << j << ',' << format_sig9(rec.wallclock) << ',';
        if (std::isfinite(rec.loss)) out << format_sig9(rec.loss);
        out << ',';
        if (std::isfinite(rec.grad_norm_sq)) out << format_sig9(rec.grad_norm_sq);
        out << ',';
        if (!rec.staleness.empty()) {
            double s = 0.0;
            std::int32_t mx = 0;
            for (std::int32_t v : rec.staleness) {
                s += v;
                mx = std::max(mx, v);
            }
            out << format_sig9(s / static_cast<double>(rec.staleness.size())) << ',' << mx;
        } else {
            out << ',';
        }
        out << ',';
        for (std::size_t i = 0; i < rec.contributors.size(); ++i) {
            if (i > 0) out << '|';
            out << rec.contributors[i];
        }
        if (controller_columns) out << ',' << rec.slot << ',' << rec.wait_count;
        out << "\n";
    }
}

}  // namespace staleracer
