#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "cyclosense/harness.hpp"

namespace cyclosense {

// Shortest round-trip representation: identical doubles give identical bytes.

void write_samples_csv(std::ostream& os, const SampleBuffer& buf, double fc) {
    fmt::print(os, "# fs_norm={:.1f}, fc={}\n", buf.sample_rate_norm, fc);
    os << "sample\n";
    for (double v : buf.samples) fmt::print(os, "{}\n", v);
}

void write_csd_csv(std::ostream& os, const CsdEstimate& csd) {
    os << "f,alpha,magnitude\n";
    for (std::size_t a = 0; a < csd.alpha_axis.size(); ++a) {
        for (std::size_t f = 0; f < csd.f_axis.size(); ++f) {
            fmt::print(os, "{},{},{}\n", csd.f_axis[f], csd.alpha_axis[a], csd.at(f, a));
        }
    }
}

void write_roc_csv(std::ostream& os, std::span<const RocCurve> curves) {
    os << "threshold,pf,pd,pm,error,rule,n_users\n";
    for (const RocCurve& c : curves) {
        for (const RocPoint& p : c.points) {
            fmt::print(os, "{},{},{},{},{},{},{}\n", p.threshold, p.pf_hat, p.pd_hat, p.pm_hat, p.error_hat, c.rule,
                       c.n_users);
        }
    }
}

void write_error_csv(std::ostream& os, std::span<const ErrorRow> rows) {
    os << "pf_target,rule,n,error\n";
    for (const ErrorRow& r : rows) {
        if (r.valid) {
            fmt::print(os, "{},{},{},{}\n", r.pf_target, r.rule, r.n, r.error);
        } else {
            fmt::print(os, "{},{},,\n", r.pf_target, r.rule);
        }
    }
}

void write_pso_csv(std::ostream& os, const PsoResult& run) {
    os << "iteration,gbest,gbest_fitness\n";
    for (std::size_t i = 0; i < run.history.size(); ++i) {
        fmt::print(os, "{},{},{}\n", i + 1, run.history[i], run.fitness_history[i]);
    }
}

void write_optn_csv(std::ostream& os, std::span<const OptimalNRow> rows) {
    os << "pf,n_opt,alpha_ratio,error\n";
    for (const OptimalNRow& r : rows) {
        if (r.valid) {
            fmt::print(os, "{},{},{},{}\n", r.pf, r.result.n_opt, r.result.alpha_ratio, r.result.error_at_opt);
        } else {
            fmt::print(os, "{},,,\n", r.pf);
        }
    }
}

}  // namespace cyclosense
