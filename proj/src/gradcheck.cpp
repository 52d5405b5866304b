#include "kansdf/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kansdf {

double gradcheck_rel_err(double analytic, double numeric) {
    const double denom = std::max({std::fabs(analytic), std::fabs(numeric), 1e-8});
    return std::fabs(analytic - numeric) / denom;
}

GradCheckReport gradcheck_compare(std::span<const GradCheckEntry> params,
                                  const std::vector<Tensor2>& analytic,
                                  const std::function<double()>& loss_only,
                                  GradCheckOptions opts) {
    GradCheckReport report;
    for (size_t p = 0; p < params.size(); ++p) {
        const auto& entry = params[p];
        Tensor2& value = entry.buf->value;
        const Tensor2& a = analytic[p];
        for (size_t i = 0; i < value.size(); ++i) {
            if (!std::isfinite(a.data[i])) {
                report.pass = false;
                report.max_rel_err = std::numeric_limits<double>::infinity();
                report.worst = entry.name + "[" + std::to_string(i) + "]: non-finite analytic gradient";
                return report;
            }
            const double saved = value.data[i];
            value.data[i] = saved + opts.h;
            const double lp = loss_only();
            value.data[i] = saved - opts.h;
            const double lm = loss_only();
            value.data[i] = saved;
            const double numeric = (lp - lm) / (2.0 * opts.h);
            if (!std::isfinite(numeric)) {
                report.pass = false;
                report.max_rel_err = std::numeric_limits<double>::infinity();
                report.worst = entry.name + "[" + std::to_string(i) + "]: non-finite numeric gradient";
                return report;
            }
            const double rel = gradcheck_rel_err(a.data[i], numeric);
            if (rel > report.max_rel_err) {
                report.max_rel_err = rel;
                report.worst = entry.name + "[" + std::to_string(i) + "]";
            }
        }
    }
    report.pass = report.max_rel_err < opts.tol;
    return report;
}

GradCheckReport gradcheck(const std::function<double()>& loss_and_grads,
                          std::span<const GradCheckEntry> params,
                          GradCheckOptions opts,
                          const std::function<double()>& loss_only) {
    for (const auto& entry : params) entry.buf->zero_grad();
    loss_and_grads();
    std::vector<Tensor2> analytic;
    analytic.reserve(params.size());
    for (const auto& entry : params) analytic.push_back(entry.buf->grad);
    const auto& eval = loss_only ? loss_only : loss_and_grads;
    return gradcheck_compare(params, analytic, eval, opts);
}

}  // namespace kansdf
