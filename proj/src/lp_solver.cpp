#include "mcast/lp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mcast {

namespace {

constexpr double kReducedCostTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kPhase1FeasTol = 1e-7;

// Two-phase revised simplex with a dense explicit basis inverse.  Every
// structural column touches exactly two rows (its rate row and its PRB row),
// which keeps pricing and FTRAN linear in the column count.
class AllocationSimplex {
  public:
    AllocationSimplex(const RateMatrix& rates, const std::vector<double>& req)
        : rates_(rates), req_(req), n_groups_(rates.rows), n_prbs_(rates.cols) {}

    AllocationLpResult solve();

  private:
    enum ColKind { kX, kSurplus, kSlack, kArtificial };

    struct ColRef {
        ColKind kind;
        int group;  // active-group index (kX, kSurplus, kArtificial)
        int prb;    // kX, kSlack
        double coef;  // scaled rate for kX
    };

    int n_cols() const { return static_cast<int>(cols_.size()); }

    // a_q has at most two nonzero entries; visitor receives (row, value).
    template <typename Fn>
    void for_col_entries(int q, Fn&& fn) const {
        const ColRef& c = cols_[q];
        switch (c.kind) {
            case kX:
                fn(c.group, c.coef);
                fn(n_active_ + c.prb, 1.0);
                break;
            case kSurplus:
                fn(c.group, -1.0);
                break;
            case kSlack:
                fn(n_active_ + c.prb, 1.0);
                break;
            case kArtificial:
                fn(c.group, 1.0);
                break;
        }
    }

    void compute_y(bool phase1);
    int choose_entering(bool phase1) const;
    void ftran(int q, std::vector<double>& w) const;
    int ratio_test(const std::vector<double>& w) const;
    void pivot(int q, int leave_row, const std::vector<double>& w);
    void refactor();
    void run_phase(bool phase1);
    void drive_out_artificials();
    double basic_cost(bool phase1) const;

    const RateMatrix& rates_;
    const std::vector<double>& req_;
    int n_groups_;
    int n_prbs_;

    std::vector<int> active_groups_;   // original group index per active row
    std::vector<double> scale_;        // per active row
    int n_active_ = 0;
    int m_ = 0;  // n_active_ + n_prbs_

    std::vector<ColRef> cols_;
    int first_artificial_ = 0;

    std::vector<double> b_;
    std::vector<double> binv_;  // m x m row-major
    std::vector<double> xb_;
    std::vector<int> basis_;
    std::vector<char> in_basis_;
    std::vector<double> y_;

    bool bland_ = false;
    int iterations_ = 0;
    int pivots_since_refactor_ = 0;
    int stall_ = 0;
};

void AllocationSimplex::compute_y(bool phase1) {
    std::fill(y_.begin(), y_.end(), 0.0);
    for (int k = 0; k < m_; ++k) {
        const ColRef& c = cols_[basis_[k]];
        double cost = 0.0;
        if (phase1) {
            if (c.kind == kArtificial) cost = 1.0;
        } else {
            if (c.kind == kX) cost = 1.0;
        }
        if (cost == 0.0) continue;
        const double* row = &binv_[static_cast<std::size_t>(k) * m_];
        for (int col = 0; col < m_; ++col) y_[col] += cost * row[col];
    }
}

int AllocationSimplex::choose_entering(bool phase1) const {
    int best = -1;
    double best_rc = -kReducedCostTol;
    for (int q = 0; q < n_cols(); ++q) {
        if (in_basis_[q]) continue;
        const ColRef& c = cols_[q];
        if (c.kind == kArtificial) continue;  // never re-enters
        double rc = (!phase1 && c.kind == kX) ? 1.0 : 0.0;
        switch (c.kind) {
            case kX:
                rc -= y_[c.group] * c.coef + y_[n_active_ + c.prb];
                break;
            case kSurplus:
                rc += y_[c.group];
                break;
            case kSlack:
                rc -= y_[n_active_ + c.prb];
                break;
            case kArtificial:
                break;
        }
        if (rc < -kReducedCostTol) {
            if (bland_) return q;  // smallest index wins
            if (rc < best_rc) {
                best_rc = rc;
                best = q;
            }
        }
    }
    return best;
}

void AllocationSimplex::ftran(int q, std::vector<double>& w) const {
    std::fill(w.begin(), w.end(), 0.0);
    for_col_entries(q, [&](int row, double val) {
        for (int k = 0; k < m_; ++k)
            w[k] += val * binv_[static_cast<std::size_t>(k) * m_ + row];
    });
}

int AllocationSimplex::ratio_test(const std::vector<double>& w) const {
    int leave = -1;
    double best_theta = std::numeric_limits<double>::infinity();
    for (int k = 0; k < m_; ++k) {
        if (w[k] <= kPivotTol) continue;
        const double theta = xb_[k] / w[k];
        if (theta < best_theta - 1e-12) {
            best_theta = theta;
            leave = k;
        } else if (theta <= best_theta + 1e-12 && leave >= 0) {
            if (bland_) {
                if (basis_[k] < basis_[leave]) leave = k;
            } else if (w[k] > w[leave]) {
                leave = k;  // larger pivot, better conditioned
            }
        }
    }
    return leave;
}

void AllocationSimplex::pivot(int q, int leave_row, const std::vector<double>& w) {
    const int r = leave_row;
    const double piv = w[r];
    const double theta = xb_[r] / piv;

    double* row_r = &binv_[static_cast<std::size_t>(r) * m_];
    for (int col = 0; col < m_; ++col) row_r[col] /= piv;
    for (int k = 0; k < m_; ++k) {
        if (k == r) continue;
        const double f = w[k];
        if (f == 0.0) continue;
        double* row_k = &binv_[static_cast<std::size_t>(k) * m_];
        for (int col = 0; col < m_; ++col) row_k[col] -= f * row_r[col];
        xb_[k] -= theta * f;
        if (xb_[k] < 0.0 && xb_[k] > -1e-9) xb_[k] = 0.0;
    }
    xb_[r] = theta;
    in_basis_[basis_[r]] = 0;
    in_basis_[q] = 1;
    basis_[r] = q;
    ++iterations_;
    ++pivots_since_refactor_;
}

void AllocationSimplex::refactor() {
    // Gauss-Jordan inverse of the current basis matrix.
    std::vector<double> bm(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int k = 0; k < m_; ++k)
        for_col_entries(basis_[k], [&](int row, double val) {
            bm[static_cast<std::size_t>(row) * m_ + k] = val;
        });
    std::vector<double> inv(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int k = 0; k < m_; ++k) inv[static_cast<std::size_t>(k) * m_ + k] = 1.0;

    for (int col = 0; col < m_; ++col) {
        int piv_row = col;
        double piv = std::abs(bm[static_cast<std::size_t>(col) * m_ + col]);
        for (int k = col + 1; k < m_; ++k) {
            const double v = std::abs(bm[static_cast<std::size_t>(k) * m_ + col]);
            if (v > piv) {
                piv = v;
                piv_row = k;
            }
        }
        if (piv < 1e-12) throw LpSolverError("singular basis during refactorization");
        if (piv_row != col) {
            for (int c2 = 0; c2 < m_; ++c2) {
                std::swap(bm[static_cast<std::size_t>(piv_row) * m_ + c2],
                          bm[static_cast<std::size_t>(col) * m_ + c2]);
                std::swap(inv[static_cast<std::size_t>(piv_row) * m_ + c2],
                          inv[static_cast<std::size_t>(col) * m_ + c2]);
            }
        }
        const double d = bm[static_cast<std::size_t>(col) * m_ + col];
        for (int c2 = 0; c2 < m_; ++c2) {
            bm[static_cast<std::size_t>(col) * m_ + c2] /= d;
            inv[static_cast<std::size_t>(col) * m_ + c2] /= d;
        }
        for (int k = 0; k < m_; ++k) {
            if (k == col) continue;
            const double f = bm[static_cast<std::size_t>(k) * m_ + col];
            if (f == 0.0) continue;
            for (int c2 = 0; c2 < m_; ++c2) {
                bm[static_cast<std::size_t>(k) * m_ + c2] -= f * bm[static_cast<std::size_t>(col) * m_ + c2];
                inv[static_cast<std::size_t>(k) * m_ + c2] -= f * inv[static_cast<std::size_t>(col) * m_ + c2];
            }
        }
    }
    binv_ = std::move(inv);
    // xb = Binv * b
    for (int k = 0; k < m_; ++k) {
        double v = 0.0;
        const double* row = &binv_[static_cast<std::size_t>(k) * m_];
        for (int col = 0; col < m_; ++col) v += row[col] * b_[col];
        xb_[k] = v < 0.0 && v > -1e-9 ? 0.0 : v;
    }
    pivots_since_refactor_ = 0;
}

double AllocationSimplex::basic_cost(bool phase1) const {
    double obj = 0.0;
    for (int k = 0; k < m_; ++k) {
        const ColRef& c = cols_[basis_[k]];
        if (phase1 ? c.kind == kArtificial : c.kind == kX) obj += xb_[k];
    }
    return obj;
}

void AllocationSimplex::run_phase(bool phase1) {
    const int iter_cap = 400 * m_ + 20 * n_cols() + 2000;
    double last_obj = basic_cost(phase1);
    std::vector<double> w(m_);
    while (true) {
        compute_y(phase1);
        const int q = choose_entering(phase1);
        if (q < 0) return;  // optimal for this phase
        ftran(q, w);
        const int r = ratio_test(w);
        if (r < 0) throw LpSolverError("unbounded direction in allocation LP");
        pivot(q, r, w);

        if (iterations_ > iter_cap) throw LpSolverError("simplex iteration cap exceeded");
        if (pivots_since_refactor_ >= 128) refactor();

        const double obj = basic_cost(phase1);
        if (obj > last_obj - 1e-12) {
            if (++stall_ > 100) bland_ = true;
        } else {
            stall_ = 0;
        }
        last_obj = obj;
    }
}

void AllocationSimplex::drive_out_artificials() {
    std::vector<double> w(m_);
    for (int k = 0; k < m_; ++k) {
        if (cols_[basis_[k]].kind != kArtificial) continue;
        // Row k of Binv*A is nonzero for some real column because the
        // surplus/slack columns alone span all rows.
        int enter = -1;
        double best = 1e-7;
        for (int q = 0; q < first_artificial_; ++q) {
            if (in_basis_[q]) continue;
            double coef = 0.0;
            for_col_entries(q, [&](int row, double val) {
                coef += val * binv_[static_cast<std::size_t>(k) * m_ + row];
            });
            if (std::abs(coef) > best) {
                best = std::abs(coef);
                enter = q;
                if (best > 0.1) break;
            }
        }
        if (enter < 0) throw LpSolverError("could not pivot out artificial variable");
        ftran(enter, w);
        // Degenerate pivot: xb_[k] is ~0, so the basis change keeps xb valid
        // even when w[k] < 0.
        const double piv = w[k];
        double* row_k = &binv_[static_cast<std::size_t>(k) * m_];
        for (int col = 0; col < m_; ++col) row_k[col] /= piv;
        const double theta = xb_[k] / piv;
        for (int k2 = 0; k2 < m_; ++k2) {
            if (k2 == k) continue;
            const double f = w[k2];
            if (f == 0.0) continue;
            double* row2 = &binv_[static_cast<std::size_t>(k2) * m_];
            for (int col = 0; col < m_; ++col) row2[col] -= f * row_k[col];
            xb_[k2] -= theta * f;
            if (xb_[k2] < 0.0 && xb_[k2] > -1e-9) xb_[k2] = 0.0;
        }
        xb_[k] = theta;
        in_basis_[basis_[k]] = 0;
        in_basis_[enter] = 1;
        basis_[k] = enter;
    }
}

AllocationLpResult AllocationSimplex::solve() {
    AllocationLpResult result;
    result.x.assign(static_cast<std::size_t>(n_groups_) * n_prbs_, 0.0);
    result.dual_rate.assign(n_groups_, 0.0);
    result.dual_prb.assign(n_prbs_, 0.0);

    // Groups already satisfied contribute nothing; groups with no positive
    // rate cannot be satisfied at all.
    double frac_lower_bound = 0.0;
    for (int i = 0; i < n_groups_; ++i) {
        if (req_[i] <= 0.0) continue;
        double rmax = 0.0;
        for (int j = 0; j < n_prbs_; ++j) rmax = std::max(rmax, rates_.at(i, j));
        if (rmax <= 0.0) return result;  // Infeasible
        frac_lower_bound += req_[i] / rmax;
        active_groups_.push_back(i);
        scale_.push_back(std::max(req_[i], rmax));
    }
    if (active_groups_.empty()) {
        result.status = LpStatus::Optimal;
        return result;
    }
    // Each group needs fractional PRB mass >= req/rmax even in isolation.
    if (frac_lower_bound > n_prbs_ + 1e-9) return result;  // Infeasible

    n_active_ = static_cast<int>(active_groups_.size());
    m_ = n_active_ + n_prbs_;

    // Columns with zero rate never appear in an optimal solution (dropping
    // one only loosens the packing row), so they are excluded outright.
    for (int g = 0; g < n_active_; ++g) {
        const int i = active_groups_[g];
        for (int j = 0; j < n_prbs_; ++j) {
            const double r = rates_.at(i, j);
            if (r > 0.0) cols_.push_back({kX, g, j, r / scale_[g]});
        }
    }
    for (int g = 0; g < n_active_; ++g) cols_.push_back({kSurplus, g, -1, 0.0});
    for (int j = 0; j < n_prbs_; ++j) cols_.push_back({kSlack, -1, j, 0.0});
    first_artificial_ = n_cols();
    for (int g = 0; g < n_active_; ++g) cols_.push_back({kArtificial, g, -1, 0.0});

    b_.assign(m_, 1.0);
    for (int g = 0; g < n_active_; ++g) b_[g] = req_[active_groups_[g]] / scale_[g];

    basis_.resize(m_);
    in_basis_.assign(n_cols(), 0);
    for (int g = 0; g < n_active_; ++g) {
        basis_[g] = first_artificial_ + g;
        in_basis_[basis_[g]] = 1;
    }
    for (int j = 0; j < n_prbs_; ++j) {
        basis_[n_active_ + j] = first_artificial_ - n_prbs_ + j;
        in_basis_[basis_[n_active_ + j]] = 1;
    }
    binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int k = 0; k < m_; ++k) binv_[static_cast<std::size_t>(k) * m_ + k] = 1.0;
    xb_ = b_;
    y_.resize(m_);

    run_phase(true);
    if (basic_cost(true) > kPhase1FeasTol) return result;  // Infeasible
    drive_out_artificials();

    bland_ = false;
    stall_ = 0;
    run_phase(false);

    result.status = LpStatus::Optimal;
    double obj = 0.0;
    for (int k = 0; k < m_; ++k) {
        const ColRef& c = cols_[basis_[k]];
        if (c.kind != kX) continue;
        const double v = std::clamp(xb_[k], 0.0, 1.0 + 1e-9);
        result.x[static_cast<std::size_t>(active_groups_[c.group]) * n_prbs_ + c.prb] = v;
        obj += v;
    }
    result.objective = obj;
    compute_y(false);
    for (int g = 0; g < n_active_; ++g) result.dual_rate[active_groups_[g]] = y_[g] / scale_[g];
    for (int j = 0; j < n_prbs_; ++j) result.dual_prb[j] = y_[n_active_ + j];
    result.iterations = iterations_;
    return result;
}

}  // namespace

AllocationLpResult solve_allocation_lp(const RateMatrix& rates,
                                       const std::vector<double>& req_kbps) {
    if (static_cast<int>(req_kbps.size()) != rates.rows)
        throw std::invalid_argument("solve_allocation_lp: requirement vector length mismatch");
    AllocationSimplex simplex(rates, req_kbps);
    return simplex.solve();
}

AllocationLpResult solve_allocation_lp(const RateMatrix& rates, double r_req_kbps) {
    return solve_allocation_lp(rates, std::vector<double>(rates.rows, r_req_kbps));
}

}  // namespace mcast
