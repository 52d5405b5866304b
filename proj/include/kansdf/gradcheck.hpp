#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "kansdf/tensor.hpp"

namespace kansdf {

struct GradCheckEntry {
    std::string name;
    DualBuffer* buf = nullptr;
};

struct GradCheckReport {
    double max_rel_err = 0.0;
    bool pass = false;
    std::string worst;  // "name[index]" of the worst entry, or the failure reason
};

struct GradCheckOptions {
    double h = 1e-5;
    double tol = 1e-4;
};

// Relative error with the absolute floor in the denominator.
double gradcheck_rel_err(double analytic, double numeric);

// Central-difference check of analytic gradients.
//
// loss_and_grads must zero nothing itself: the harness zeroes all entries'
// grads, calls it once to collect analytic gradients, then perturbs each
// parameter entry and calls loss_only (defaults to loss_and_grads) twice per
// entry for the numeric estimate.  The checked fragment must be deterministic.
GradCheckReport gradcheck(const std::function<double()>& loss_and_grads,
                          std::span<const GradCheckEntry> params,
                          GradCheckOptions opts = {},
                          const std::function<double()>& loss_only = nullptr);

// Comparison stage only, for callers that already hold analytic gradients
// (used to verify that a corrupted gradient is rejected).
GradCheckReport gradcheck_compare(std::span<const GradCheckEntry> params,
                                  const std::vector<Tensor2>& analytic,
                                  const std::function<double()>& loss_only,
                                  GradCheckOptions opts = {});

}  // namespace kansdf
