#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "relwalk/tensor.hpp"

namespace relwalk {

struct FdReport {
  double max_rel_err = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

inline double rel_error(double a, double b, double floor = 1e-4) {
  double denom = std::max({std::fabs(a), std::fabs(b), floor});
  return std::fabs(a - b) / denom;
}

// Central finite differences against analytic gradients.
//   analytic: builds the graph from current parameter values, runs backward,
//             returns the loss; afterwards every param's grad slot is filled.
//   value:    returns the loss from current parameter values, no gradients.
inline FdReport fd_check(const std::vector<std::pair<std::string, Tensor*>>& params,
                         const std::function<double()>& analytic,
                         const std::function<double()>& value, double h = 1e-5,
                         double floor = 1e-4) {
  analytic();
  std::vector<std::vector<double>> saved;
  saved.reserve(params.size());
  for (const auto& [name, p] : params) saved.push_back(*p->grad);

  FdReport report;
  for (std::size_t k = 0; k < params.size(); ++k) {
    Tensor* p = params[k].second;
    for (std::size_t i = 0; i < p->numel(); ++i) {
      double keep = p->values[i];
      p->values[i] = keep + h;
      double up = value();
      p->values[i] = keep - h;
      double down = value();
      p->values[i] = keep;
      double fd = (up - down) / (2.0 * h);
      double err = rel_error(saved[k][i], fd, floor);
      if (err > report.max_rel_err) {
        report.max_rel_err = err;
        report.worst_param = params[k].first;
        report.worst_index = i;
        report.analytic = saved[k][i];
        report.numeric = fd;
      }
    }
  }
  return report;
}

}  // namespace relwalk
