#pragma once

#include <stdexcept>
#include <vector>

#include "mcast/channel.hpp"

namespace mcast {

/// Numerical failure inside the simplex (iteration cap, lost basis).
/// Distinct from an infeasible model, which is a normal outcome.
struct LpSolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class LpStatus { Optimal, Infeasible };

/// Optimal solution of
///   min sum_ij x_ij
///   s.t. sum_j r_ij x_ij >= req_i      for each group i
///        sum_i x_ij      <= 1          for each PRB j
///        x >= 0
/// The packing rows imply x <= 1.  Duals are reported in original units so
/// tests can verify the optimality certificate.
struct AllocationLpResult {
    LpStatus status = LpStatus::Infeasible;
    double objective = 0.0;
    std::vector<double> x;          // L x N row-major
    std::vector<double> dual_rate;  // length L
    std::vector<double> dual_prb;   // length N
    int iterations = 0;
};

AllocationLpResult solve_allocation_lp(const RateMatrix& rates,
                                       const std::vector<double>& req_kbps);
AllocationLpResult solve_allocation_lp(const RateMatrix& rates, double r_req_kbps);

}  // namespace mcast
