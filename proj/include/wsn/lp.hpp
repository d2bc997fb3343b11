#pragma once

// Dense-inverse revised simplex for bounded-variable linear programs.
//
// Every row r carries a logical variable s_r with a_r x + s_r = rhs_r, bounded
// by the row sense (<=: s >= 0, >=: s <= 0, =: s = 0), so the all-logical basis
// is always available. Cold starts run a composite phase 1 followed by primal
// phase 2. Warm starts that are dual feasible but primal infeasible (changed
// right-hand sides, tightened bounds, appended rows) go through the dual
// simplex first.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <cstdint>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wsn::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { Minimize, Maximize };
enum class RowSense { LessEqual, Equal, GreaterEqual };

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

struct LinearProgram {
  Sense sense = Sense::Minimize;
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::string> col_names;
  std::vector<RowSense> row_sense;
  std::vector<double> rhs;
  std::vector<std::string> row_names;
  std::vector<Triplet> entries;  // row-major: rows are appended whole

  int num_cols() const { return static_cast<int>(cost.size()); }
  int num_rows() const { return static_cast<int>(rhs.size()); }

  int add_column(double c, double lo, double up, std::string name = {}) {
    cost.push_back(c);
    lower.push_back(lo);
    upper.push_back(up);
    col_names.push_back(std::move(name));
    return num_cols() - 1;
  }

  int add_row(RowSense s, double b, std::span<const std::pair<int, double>> coefs, std::string name = {}) {
    const int r = num_rows();
    row_sense.push_back(s);
    rhs.push_back(b);
    row_names.push_back(std::move(name));
    for (const auto& [col, v] : coefs) {
      if (v != 0.0) entries.push_back({r, col, v});
    }
    return r;
  }
  int add_row(RowSense s, double b, const std::vector<std::pair<int, double>>& coefs, std::string name = {}) {
    return add_row(s, b, std::span<const std::pair<int, double>>(coefs), std::move(name));
  }

  /// Precondition check: finite costs and rhs, lower <= upper, no empty rows,
  /// entries in range and row-major. Returns a description or empty.
  std::string check() const {
    const int n = num_cols(), m = num_rows();
    if (static_cast<int>(lower.size()) != n || static_cast<int>(upper.size()) != n) return "bound vectors size mismatch";
    if (static_cast<int>(row_sense.size()) != m) return "row sense size mismatch";
    for (int j = 0; j < n; ++j) {
      if (!std::isfinite(cost[j])) return "non-finite cost in column " + std::to_string(j);
      if (!(lower[j] <= upper[j])) return "lower > upper in column " + std::to_string(j);
      if (lower[j] == kInf || upper[j] == -kInf) return "infeasible infinite bound in column " + std::to_string(j);
    }
    for (int r = 0; r < m; ++r) {
      if (!std::isfinite(rhs[r])) return "non-finite rhs in row " + std::to_string(r);
    }
    std::vector<char> seen(m, 0);
    int last_row = -1;
    for (const auto& t : entries) {
      if (t.row < 0 || t.row >= m || t.col < 0 || t.col >= n) return "matrix entry out of range";
      if (t.row < last_row) return "matrix entries are not row-major";
      if (!std::isfinite(t.value)) return "non-finite matrix entry";
      last_row = t.row;
      seen[t.row] = 1;
    }
    for (int r = 0; r < m; ++r) {
      if (!seen[r]) return "empty row " + std::to_string(r) + (row_names[r].empty() ? "" : " (" + row_names[r] + ")");
    }
    return {};
  }
};

enum class VarStatus : std::uint8_t { Basic, AtLower, AtUpper, AtZero };

/// Status of every structural column followed by every row logical.
struct Basis {
  std::vector<VarStatus> status;
  bool empty() const { return status.empty(); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

inline const char* status_name(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
    case LpStatus::IterationLimit: return "IterationLimit";
  }
  return "?";
}

/// Duals follow the problem's own sense: for a minimization, <= rows have
/// duals <= 0 and >= rows duals >= 0 (signs reverse for a maximization).
struct LpSolution {
  LpStatus status = LpStatus::IterationLimit;
  std::vector<double> x;
  std::vector<double> duals;
  std::vector<double> reduced_costs;
  double objective = 0.0;
  long iterations = 0;
  Basis basis;
};

struct LpOptions {
  double primal_tol = 1e-9;     // relative to the problem's bound/rhs scale
  double dual_tol = 1e-9;       // relative to the cost scale
  double pivot_tol = 1e-9;
  long max_pivots = 0;          // 0: 50 * (rows + cols)
  int refactor_interval = 100;
  int bland_after = 200;
  bool scale = true;            // geometric row/column scaling by powers of two
};

namespace detail {

class Simplex {
 public:
  Simplex(const LinearProgram& lp, const LpOptions& opts) : lp_(lp), opts_(opts) {
    n_ = lp.num_cols();
    m_ = lp.num_rows();
    N_ = n_ + m_;
    // Column-major copy of A.
    col_start_.assign(n_ + 1, 0);
    for (const auto& t : lp.entries) ++col_start_[t.col + 1];
    for (int j = 0; j < n_; ++j) col_start_[j + 1] += col_start_[j];
    row_idx_.resize(lp.entries.size());
    val_.resize(lp.entries.size());
    std::vector<int> fill(col_start_.begin(), col_start_.end() - 1);
    for (const auto& t : lp.entries) {
      const int k = fill[t.col]++;
      row_idx_[k] = t.row;
      val_[k] = t.value;
    }
    const double sign = lp.sense == Sense::Maximize ? -1.0 : 1.0;
    c_.assign(N_, 0.0);
    lo_.assign(N_, 0.0);
    up_.assign(N_, 0.0);
    double cscale = 0.0, bscale = 0.0;
    for (int j = 0; j < n_; ++j) {
      c_[j] = sign * lp.cost[j];
      lo_[j] = lp.lower[j];
      up_[j] = lp.upper[j];
      cscale = std::max(cscale, std::abs(c_[j]));
    }
    for (int r = 0; r < m_; ++r) {
      const int k = n_ + r;
      switch (lp.row_sense[r]) {
        case RowSense::LessEqual: lo_[k] = 0.0; up_[k] = kInf; break;
        case RowSense::GreaterEqual: lo_[k] = -kInf; up_[k] = 0.0; break;
        case RowSense::Equal: lo_[k] = 0.0; up_[k] = 0.0; break;
      }
      bscale = std::max(bscale, std::abs(lp.rhs[r]));
    }
    // Structural tolerances scale with the column's own bounds, logicals with the rhs.
    tol_p_.assign(N_, 0.0);
    for (int j = 0; j < n_; ++j) {
      double mag = 0.0;
      if (std::isfinite(lo_[j])) mag = std::max(mag, std::abs(lo_[j]));
      if (std::isfinite(up_[j])) mag = std::max(mag, std::abs(up_[j]));
      tol_p_[j] = opts.primal_tol * (1.0 + mag);
    }
    for (int r = 0; r < m_; ++r) tol_p_[n_ + r] = opts.primal_tol * (1.0 + bscale);
    tol_d_.assign(N_, opts.dual_tol);
    for (int j = 0; j < n_; ++j) tol_d_[j] = opts.dual_tol * (1.0 + std::abs(c_[j]));
    max_pivots_ = opts.max_pivots > 0 ? opts.max_pivots : 50L * (m_ + n_) + 1000;
  }

  LpSolution run(const Basis* warm) {
    LpSolution sol;
    setup_basis(warm);
    refactor();
    LpStatus st;
    if (!primal_feasible()) {
      if (warm != nullptr && make_dual_feasible()) {
        st = dual_simplex();
        if (!c_saved_.empty()) {
          c_ = c_saved_;
          c_saved_.clear();
        }
        if (st == LpStatus::Infeasible) st = primal_phase1();  // confirm
      } else {
        st = primal_phase1();
      }
      if (st != LpStatus::Optimal) return finish(st);
    }
    st = primal_phase2();
    return finish(st);
  }

 private:
  const LinearProgram& lp_;
  LpOptions opts_;
  int n_ = 0, m_ = 0, N_ = 0;
  std::vector<int> col_start_, row_idx_;
  std::vector<double> val_;
  std::vector<double> c_, lo_, up_;
  std::vector<VarStatus> status_;
  std::vector<int> head_;      // basic variable at each position
  std::vector<double> binv_;   // m x m row-major
  std::vector<double> x_;      // all N values
  std::vector<double> y_;      // duals (internal min sense)
  std::vector<double> work_;
  std::vector<double> tol_p_;
  std::vector<double> tol_d_;
  std::vector<double> c_saved_;  // original costs while the dual runs perturbed
  long iters_ = 0, max_pivots_ = 0;
  int since_refactor_ = 0;

  // ----- basis bookkeeping -----

  VarStatus default_nonbasic(int j) const {
    if (std::isfinite(lo_[j])) return VarStatus::AtLower;
    if (std::isfinite(up_[j])) return VarStatus::AtUpper;
    return VarStatus::AtZero;
  }

  VarStatus sanitize(int j, VarStatus s) const {
    if (s == VarStatus::Basic) return s;
    if (s == VarStatus::AtLower && std::isfinite(lo_[j])) return s;
    if (s == VarStatus::AtUpper && std::isfinite(up_[j])) return s;
    if (s == VarStatus::AtZero && !std::isfinite(lo_[j]) && !std::isfinite(up_[j])) return s;
    return default_nonbasic(j);
  }

  void setup_basis(const Basis* warm) {
    status_.assign(N_, VarStatus::AtLower);
    head_.clear();
    bool ok = false;
    if (warm != nullptr && !warm->status.empty()) {
      // A basis saved before rows were appended is extended with basic logicals.
      const auto& ws = warm->status;
      const int old_m = static_cast<int>(ws.size()) - n_;
      if (old_m >= 0 && old_m <= m_) {
        for (int j = 0; j < n_; ++j) status_[j] = sanitize(j, ws[j]);
        for (int r = 0; r < m_; ++r) {
          status_[n_ + r] = r < old_m ? sanitize(n_ + r, ws[n_ + r]) : VarStatus::Basic;
        }
        int basics = 0;
        for (auto s : status_) basics += s == VarStatus::Basic;
        ok = basics == m_;
      }
    }
    if (!ok) {
      for (int j = 0; j < n_; ++j) status_[j] = default_nonbasic(j);
      for (int r = 0; r < m_; ++r) status_[n_ + r] = VarStatus::Basic;
    }
    // Logicals first so the inversion starts from cheap unit columns.
    for (int r = 0; r < m_; ++r) {
      if (status_[n_ + r] == VarStatus::Basic) head_.push_back(n_ + r);
    }
    for (int j = 0; j < n_; ++j) {
      if (status_[j] == VarStatus::Basic) head_.push_back(j);
    }
    x_.assign(N_, 0.0);
  }

  double nonbasic_value(int j) const {
    switch (status_[j]) {
      case VarStatus::AtLower: return lo_[j];
      case VarStatus::AtUpper: return up_[j];
      default: return 0.0;
    }
  }

  // out = B^{-1} a_j
  void ftran(int j, std::vector<double>& out) const {
    out.assign(m_, 0.0);
    if (j >= n_) {
      const int r = j - n_;
      for (int i = 0; i < m_; ++i) out[i] = binv_[static_cast<std::size_t>(i) * m_ + r];
      return;
    }
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
      const int r = row_idx_[k];
      const double v = val_[k];
      for (int i = 0; i < m_; ++i) out[i] += binv_[static_cast<std::size_t>(i) * m_ + r] * v;
    }
  }

  double dot_column(const std::vector<double>& row, int j) const {
    if (j >= n_) return row[j - n_];
    double s = 0.0;
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) s += row[row_idx_[k]] * val_[k];
    return s;
  }

  // Invert the basis; dependent basic columns are swapped for logicals.
  void refactor() {
    since_refactor_ = 0;
    const std::size_t mm = static_cast<std::size_t>(m_) * m_;
    binv_.assign(mm, 0.0);
    for (int i = 0; i < m_; ++i) binv_[static_cast<std::size_t>(i) * m_ + i] = 1.0;
    std::vector<int> pivot_row(m_, -1);
    std::vector<char> row_used(m_, 0);
    std::vector<double> v(m_);
    std::vector<int> dependent;
    for (int k = 0; k < m_; ++k) {
      const int j = head_[k];
      // v = T a_j where T is the running transform (binv_).
      std::fill(v.begin(), v.end(), 0.0);
      double colmax = 0.0;
      if (j >= n_) {
        const int r = j - n_;
        for (int i = 0; i < m_; ++i) v[i] = binv_[static_cast<std::size_t>(i) * m_ + r];
        colmax = 1.0;
      } else {
        for (int q = col_start_[j]; q < col_start_[j + 1]; ++q) {
          const int r = row_idx_[q];
          const double a = val_[q];
          colmax = std::max(colmax, std::abs(a));
          for (int i = 0; i < m_; ++i) v[i] += binv_[static_cast<std::size_t>(i) * m_ + r] * a;
        }
      }
      int p = -1;
      double best = 0.0;
      for (int i = 0; i < m_; ++i) {
        if (!row_used[i] && std::abs(v[i]) > best) {
          best = std::abs(v[i]);
          p = i;
        }
      }
      if (p < 0 || best <= 1e-11 * std::max(1.0, colmax)) {
        dependent.push_back(k);
        continue;
      }
      eliminate(p, v);
      row_used[p] = 1;
      pivot_row[k] = p;
    }
    if (!dependent.empty()) {
      for (int k : dependent) {
        int r = 0;
        while (row_used[r]) ++r;
        const int out = head_[k];
        status_[out] = default_nonbasic(out);
        head_[k] = n_ + r;
        status_[n_ + r] = VarStatus::Basic;
        // T e_r = e_r for a row never used as a pivot.
        std::fill(v.begin(), v.end(), 0.0);
        for (int i = 0; i < m_; ++i) v[i] = binv_[static_cast<std::size_t>(i) * m_ + r];
        eliminate(r, v);
        row_used[r] = 1;
        pivot_row[k] = r;
      }
    }
    // Row k of B^{-1} is row pivot_row[k] of T.
    std::vector<double> perm(mm);
    for (int k = 0; k < m_; ++k) {
      std::copy_n(binv_.begin() + static_cast<std::ptrdiff_t>(pivot_row[k]) * m_, m_,
                  perm.begin() + static_cast<std::ptrdiff_t>(k) * m_);
    }
    binv_.swap(perm);
    compute_primal();
  }

  void eliminate(int p, const std::vector<double>& v) {
    double* rowp = &binv_[static_cast<std::size_t>(p) * m_];
    const double inv = 1.0 / v[p];
    for (int c = 0; c < m_; ++c) rowp[c] *= inv;
    for (int i = 0; i < m_; ++i) {
      if (i == p || v[i] == 0.0) continue;
      double* rowi = &binv_[static_cast<std::size_t>(i) * m_];
      const double f = v[i];
      for (int c = 0; c < m_; ++c) {
        if (rowp[c] != 0.0) rowi[c] -= f * rowp[c];
      }
    }
  }

  void compute_primal() {
    std::vector<double> r(lp_.rhs.begin(), lp_.rhs.end());
    for (int j = 0; j < N_; ++j) {
      if (status_[j] == VarStatus::Basic) continue;
      const double xv = nonbasic_value(j);
      x_[j] = xv;
      if (xv == 0.0) continue;
      if (j >= n_) {
        r[j - n_] -= xv;
      } else {
        for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) r[row_idx_[k]] -= val_[k] * xv;
      }
    }
    for (int i = 0; i < m_; ++i) {
      const double* row = &binv_[static_cast<std::size_t>(i) * m_];
      double s = 0.0;
      for (int c = 0; c < m_; ++c) s += row[c] * r[c];
      x_[head_[i]] = s;
    }
  }

  void compute_duals(const std::vector<double>& cb) {
    y_.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      if (cb[i] == 0.0) continue;
      const double* row = &binv_[static_cast<std::size_t>(i) * m_];
      for (int c = 0; c < m_; ++c) y_[c] += cb[i] * row[c];
    }
  }

  double reduced_cost(int j, const std::vector<double>& cost) const {
    return cost[j] - dot_column(y_, j);
  }

  double infeasibility(int j) const {
    const double v = x_[j];
    if (v < lo_[j] - tol_p_[j]) return lo_[j] - v;
    if (v > up_[j] + tol_p_[j]) return v - up_[j];
    return 0.0;
  }

  bool primal_feasible() const {
    for (int i = 0; i < m_; ++i) {
      if (infeasibility(head_[i]) > 0.0) return false;
    }
    return true;
  }

  // Basis change: position r leaves, column j enters with alpha = B^{-1} a_j.
  void pivot(int r, int j, const std::vector<double>& alpha) {
    double* rowr = &binv_[static_cast<std::size_t>(r) * m_];
    const double inv = 1.0 / alpha[r];
    for (int c = 0; c < m_; ++c) rowr[c] *= inv;
    for (int i = 0; i < m_; ++i) {
      if (i == r || alpha[i] == 0.0) continue;
      double* rowi = &binv_[static_cast<std::size_t>(i) * m_];
      const double f = alpha[i];
      for (int c = 0; c < m_; ++c) {
        if (rowr[c] != 0.0) rowi[c] -= f * rowr[c];
      }
    }
    head_[r] = j;
    status_[j] = VarStatus::Basic;
    ++iters_;
    if (++since_refactor_ >= opts_.refactor_interval) refactor();
  }

  // ----- pricing -----

  // Entering candidate for cost vector `cost`; returns -1 when none.
  int price(const std::vector<double>& cost, bool phase1, bool bland, double& d_out) const {
    int best = -1;
    double best_score = 0.0;
    for (int j = 0; j < N_; ++j) {
      const VarStatus s = status_[j];
      if (s == VarStatus::Basic) continue;
      if (lo_[j] == up_[j]) continue;
      const double d = reduced_cost(j, cost);
      const double tol = phase1 ? opts_.dual_tol : tol_d_[j];
      double score = 0.0;
      if (s == VarStatus::AtLower) {
        if (d < -tol) score = -d;
      } else if (s == VarStatus::AtUpper) {
        if (d > tol) score = d;
      } else if (std::abs(d) > tol) {
        score = std::abs(d);
      }
      if (score <= 0.0) continue;
      if (bland) {
        d_out = d;
        return j;
      }
      if (score > best_score) {
        best_score = score;
        best = j;
        d_out = d;
      }
    }
    return best;
  }

  // ----- primal simplex -----

  struct Step {
    double t = kInf;
    int leave = -1;  // basis position, -1 for a bound flip / unbounded
    VarStatus leave_to = VarStatus::AtLower;
  };

  // Harris two-pass ratio test. In phase 1, infeasible basics may move toward
  // (and stop at) the bound they violate.
  Step ratio_test(int q, double dir, const std::vector<double>& alpha, bool phase1, bool bland) const {
    Step st;
    auto room_of = [&](int i, double& room, VarStatus& to) -> bool {
      const double a = alpha[i];
      if (std::abs(a) <= opts_.pivot_tol) return false;
      const int b = head_[i];
      const double delta = -dir * a;  // change of x_b per unit step
      const double v = x_[b];
      if (phase1 && v < lo_[b] - tol_p_[b]) {
        if (delta <= 0) return false;
        room = lo_[b] - v;
        to = VarStatus::AtLower;
        return true;
      }
      if (phase1 && v > up_[b] + tol_p_[b]) {
        if (delta >= 0) return false;
        room = v - up_[b];
        to = VarStatus::AtUpper;
        return true;
      }
      if (delta < 0) {
        if (!std::isfinite(lo_[b])) return false;
        room = std::max(0.0, v - lo_[b]);
        to = VarStatus::AtLower;
      } else {
        if (!std::isfinite(up_[b])) return false;
        room = std::max(0.0, up_[b] - v);
        to = VarStatus::AtUpper;
      }
      return true;
    };
    double tmax = kInf;
    for (int i = 0; i < m_; ++i) {
      double room;
      VarStatus to;
      if (!room_of(i, room, to)) continue;
      tmax = std::min(tmax, (room + tol_p_[head_[i]]) / std::abs(alpha[i]));
    }
    const double flip = up_[q] - lo_[q];
    if (tmax < kInf) {
      double best_a = 0.0;
      double best_t = kInf;
      int best_var = std::numeric_limits<int>::max();
      for (int i = 0; i < m_; ++i) {
        double room;
        VarStatus to;
        if (!room_of(i, room, to)) continue;
        const double t = room / std::abs(alpha[i]);
        if (t > tmax) continue;
        const double a = std::abs(alpha[i]);
        bool take;
        if (bland) {
          take = t < best_t - 1e-15 || (t <= best_t + 1e-15 && head_[i] < best_var);
        } else {
          take = a > best_a;
        }
        if (take) {
          best_a = a;
          best_t = t;
          best_var = head_[i];
          st.leave = i;
          st.leave_to = to;
          st.t = t;
        }
      }
    }
    if (std::isfinite(flip) && flip <= st.t) {
      st.t = flip;
      st.leave = -1;
    }
    return st;
  }

  void apply_step(int q, double dir, const std::vector<double>& alpha, const Step& st) {
    const double t = st.t;
    if (t != 0.0) {
      for (int i = 0; i < m_; ++i) {
        if (alpha[i] != 0.0) x_[head_[i]] -= dir * t * alpha[i];
      }
      x_[q] += dir * t;
    }
    if (st.leave < 0) {
      status_[q] = dir > 0 ? VarStatus::AtUpper : VarStatus::AtLower;
      x_[q] = nonbasic_value(q);
      return;
    }
    const int out = head_[st.leave];
    status_[out] = (lo_[out] == up_[out]) ? VarStatus::AtLower : st.leave_to;
    x_[out] = nonbasic_value(out);
    pivot(st.leave, q, alpha);
  }

  LpStatus primal_loop(bool phase1) {
    std::vector<double> cost(N_, 0.0), cb(m_), alpha;
    int degenerate = 0;
    for (;;) {
      if (iters_ >= max_pivots_) return LpStatus::IterationLimit;
      bool any_infeasible = false;
      if (phase1) {
        std::fill(cost.begin(), cost.end(), 0.0);
        for (int i = 0; i < m_; ++i) {
          const int b = head_[i];
          if (x_[b] < lo_[b] - tol_p_[b]) {
            cost[b] = -1.0;
            any_infeasible = true;
          } else if (x_[b] > up_[b] + tol_p_[b]) {
            cost[b] = 1.0;
            any_infeasible = true;
          }
        }
        if (!any_infeasible) return LpStatus::Optimal;
      }
      const std::vector<double>& cvec = phase1 ? cost : c_;
      for (int i = 0; i < m_; ++i) cb[i] = cvec[head_[i]];
      compute_duals(cb);
      const bool bland = degenerate >= opts_.bland_after;
      double d = 0.0;
      // Phase-1 costs are +-1, so the cost-scaled tolerance does not apply.
      const int q = price(cvec, phase1, bland, d);
      if (q < 0) return phase1 ? LpStatus::Infeasible : LpStatus::Optimal;
      const double dir = status_[q] == VarStatus::AtUpper ? -1.0 : (status_[q] == VarStatus::AtLower ? 1.0 : (d < 0 ? 1.0 : -1.0));
      ftran(q, alpha);
      Step st = ratio_test(q, dir, alpha, phase1, bland);
      if (!std::isfinite(st.t)) {
        if (phase1) {
          // Cannot happen with bounded phase-1 objective; refactor and retry.
          refactor();
          continue;
        }
        return LpStatus::Unbounded;
      }
      degenerate = st.t <= 1e-12 ? degenerate + 1 : 0;
      apply_step(q, dir, alpha, st);
    }
  }

  LpStatus primal_phase1() {
    const LpStatus st = primal_loop(true);
    if (st == LpStatus::Infeasible) {
      // Clean factorization before declaring infeasibility.
      refactor();
      if (primal_feasible()) return LpStatus::Optimal;
      const LpStatus again = primal_loop(true);
      return again;
    }
    return st;
  }

  LpStatus primal_phase2() {
    for (int attempt = 0; attempt < 3; ++attempt) {
      LpStatus st = primal_loop(false);
      if (st != LpStatus::Optimal) return st;
      refactor();
      if (primal_feasible()) return LpStatus::Optimal;
      st = primal_loop(true);
      if (st != LpStatus::Optimal) return st;
    }
    return LpStatus::Optimal;
  }

  // ----- dual simplex -----

  bool make_dual_feasible() {
    std::vector<double> cb(m_);
    for (int i = 0; i < m_; ++i) cb[i] = c_[head_[i]];
    compute_duals(cb);
    bool flipped = false;
    for (int j = 0; j < N_; ++j) {
      const VarStatus s = status_[j];
      if (s == VarStatus::Basic || lo_[j] == up_[j]) continue;
      const double d = reduced_cost(j, c_);
      if (s == VarStatus::AtLower && d < -tol_d_[j]) {
        if (!std::isfinite(up_[j])) return false;
        status_[j] = VarStatus::AtUpper;
        flipped = true;
      } else if (s == VarStatus::AtUpper && d > tol_d_[j]) {
        if (!std::isfinite(lo_[j])) return false;
        status_[j] = VarStatus::AtLower;
        flipped = true;
      } else if (s == VarStatus::AtZero && std::abs(d) > tol_d_[j]) {
        return false;
      }
    }
    if (flipped) compute_primal();
    return true;
  }

  LpStatus dual_simplex() {
    std::vector<double> cb(m_), rho(m_), alpha_row(N_, 0.0), alpha;
    int degenerate = 0;
    for (;;) {
      if (iters_ >= max_pivots_) return LpStatus::IterationLimit;
      const bool bland = degenerate >= opts_.bland_after;
      // Leaving row: largest bound violation.
      int r = -1;
      double worst = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double inf = infeasibility(head_[i]);
        if (inf <= 0.0) continue;
        if (bland) {
          if (r < 0 || head_[i] < head_[r]) r = i;
        } else if (inf > worst) {
          worst = inf;
          r = i;
        }
      }
      if (r < 0) return LpStatus::Optimal;
      const int leaving = head_[r];
      const bool below = x_[leaving] < lo_[leaving];
      const double target = below ? lo_[leaving] : up_[leaving];
      for (int i = 0; i < m_; ++i) cb[i] = c_[head_[i]];
      compute_duals(cb);
      std::copy_n(binv_.begin() + static_cast<std::ptrdiff_t>(r) * m_, m_, rho.begin());
      // Entering: dual ratio test (Harris two-pass).
      double tmax = kInf;
      auto eligible = [&](int j, double a) {
        const VarStatus s = status_[j];
        if (std::abs(a) <= opts_.pivot_tol) return false;
        if (s == VarStatus::AtZero) return true;
        const bool inc = s == VarStatus::AtLower;
        // x_r moves by -a per unit increase of x_j.
        return below ? (inc ? a < 0 : a > 0) : (inc ? a > 0 : a < 0);
      };
      std::vector<int> cand;
      for (int j = 0; j < N_; ++j) {
        const VarStatus s = status_[j];
        if (s == VarStatus::Basic || lo_[j] == up_[j]) continue;
        const double a = dot_column(rho, j);
        alpha_row[j] = a;
        if (!eligible(j, a)) continue;
        const double dj = reduced_cost(j, c_);
        const double d = s == VarStatus::AtZero ? std::abs(dj) : std::max(0.0, s == VarStatus::AtLower ? dj : -dj);
        work_d(j) = d;
        cand.push_back(j);
        tmax = std::min(tmax, (d + tol_d_[j]) / std::abs(a));
      }
      if (cand.empty()) return LpStatus::Infeasible;
      int q = -1;
      double best_a = 0.0, best_t = kInf;
      for (int j : cand) {
        const double a = std::abs(alpha_row[j]);
        const double t = work_d(j) / a;
        if (t > tmax) continue;
        bool take;
        if (bland) {
          take = q < 0 || t < best_t - 1e-15;
        } else {
          take = a > best_a;
        }
        if (take) {
          q = j;
          best_a = a;
          best_t = t;
        }
      }
      if (q < 0) q = cand.front();
      ftran(q, alpha);
      if (std::abs(alpha[r]) <= opts_.pivot_tol) {
        refactor();
        continue;
      }
      const double dq = (x_[leaving] - target) / alpha[r];
      for (int i = 0; i < m_; ++i) {
        if (alpha[i] != 0.0) x_[head_[i]] -= dq * alpha[i];
      }
      x_[q] += dq;
      degenerate = work_d(q) <= tol_d_[q] ? degenerate + 1 : 0;
      if (degenerate == kPerturbAfter && c_saved_.empty()) perturb_costs();
      status_[leaving] = (lo_[leaving] == up_[leaving]) ? VarStatus::AtLower
                         : below ? VarStatus::AtLower : VarStatus::AtUpper;
      x_[leaving] = target;
      pivot(r, q, alpha);
    }
  }

  static constexpr int kPerturbAfter = 10;

  // Pushes every nonbasic reduced cost away from zero in its feasible direction.
  void perturb_costs() {
    c_saved_ = c_;
    for (int j = 0; j < N_; ++j) {
      const VarStatus s = status_[j];
      if (s == VarStatus::Basic || lo_[j] == up_[j]) continue;
      const double frac = std::fmod(0.6180339887498949 * (j + 1), 1.0);
      const double delta = 1e-6 * (1.0 + std::abs(c_[j])) * (0.5 + frac);
      if (s == VarStatus::AtLower) c_[j] += delta;
      else if (s == VarStatus::AtUpper) c_[j] -= delta;
    }
  }

  double& work_d(int j) {
    if (work_.size() != static_cast<std::size_t>(N_)) work_.assign(N_, 0.0);
    return work_[j];
  }

  // ----- result -----

  LpSolution finish(LpStatus st) {
    LpSolution sol;
    sol.status = st;
    sol.iterations = iters_;
    if (st == LpStatus::Optimal) refactor();
    std::vector<double> cb(m_);
    for (int i = 0; i < m_; ++i) cb[i] = c_[head_[i]];
    compute_duals(cb);
    const double sign = lp_.sense == Sense::Maximize ? -1.0 : 1.0;
    sol.x.assign(x_.begin(), x_.begin() + n_);
    sol.duals.resize(m_);
    for (int r = 0; r < m_; ++r) sol.duals[r] = sign * y_[r];
    sol.reduced_costs.resize(n_);
    for (int j = 0; j < n_; ++j) {
      sol.reduced_costs[j] = status_[j] == VarStatus::Basic ? 0.0 : sign * reduced_cost(j, c_);
    }
    double obj = 0.0;
    for (int j = 0; j < n_; ++j) obj += lp_.cost[j] * sol.x[j];
    sol.objective = obj;
    sol.basis.status = status_;
    return sol;
  }
};

struct Scaling {
  std::vector<double> row, col;
  bool identity = true;
};

// Alternating geometric-mean passes, rounded to powers of two so that scaling
// and unscaling are exact.
inline Scaling geometric_scaling(const LinearProgram& lp) {
  const int n = lp.num_cols(), m = lp.num_rows();
  Scaling s;
  s.row.assign(m, 1.0);
  s.col.assign(n, 1.0);
  double lo = kInf, hi = 0.0;
  for (const auto& t : lp.entries) {
    lo = std::min(lo, std::abs(t.value));
    hi = std::max(hi, std::abs(t.value));
  }
  if (lp.entries.empty() || hi / lo < 16.0) return s;
  std::vector<double> mn, mx;
  for (int pass = 0; pass < 6; ++pass) {
    mn.assign(m, kInf);
    mx.assign(m, 0.0);
    for (const auto& t : lp.entries) {
      const double v = std::abs(t.value) * s.col[t.col];
      mn[t.row] = std::min(mn[t.row], v);
      mx[t.row] = std::max(mx[t.row], v);
    }
    for (int r = 0; r < m; ++r) {
      if (mx[r] > 0.0) s.row[r] = 1.0 / std::sqrt(mn[r] * mx[r]);
    }
    mn.assign(n, kInf);
    mx.assign(n, 0.0);
    for (const auto& t : lp.entries) {
      const double v = std::abs(t.value) * s.row[t.row];
      mn[t.col] = std::min(mn[t.col], v);
      mx[t.col] = std::max(mx[t.col], v);
    }
    for (int j = 0; j < n; ++j) {
      if (mx[j] > 0.0) s.col[j] = 1.0 / std::sqrt(mn[j] * mx[j]);
    }
  }
  auto pow2 = [](double v) { return std::exp2(std::round(std::log2(v))); };
  for (auto& v : s.row) v = pow2(v);
  for (auto& v : s.col) v = pow2(v);
  s.identity = std::all_of(s.row.begin(), s.row.end(), [](double v) { return v == 1.0; }) &&
               std::all_of(s.col.begin(), s.col.end(), [](double v) { return v == 1.0; });
  return s;
}

// Row activities and bounds within `tol` relative to each row's magnitude.
inline bool feasible_in(const LinearProgram& lp, const std::vector<double>& x, double tol) {
  const int m = lp.num_rows();
  std::vector<double> act(m, 0.0), mag(m, 0.0);
  for (const auto& t : lp.entries) {
    act[t.row] += t.value * x[t.col];
    mag[t.row] = std::max(mag[t.row], std::abs(t.value * x[t.col]));
  }
  for (int r = 0; r < m; ++r) {
    const double slack = tol * (1.0 + std::max(mag[r], std::abs(lp.rhs[r])));
    if (lp.row_sense[r] != RowSense::GreaterEqual && act[r] > lp.rhs[r] + slack) return false;
    if (lp.row_sense[r] != RowSense::LessEqual && act[r] < lp.rhs[r] - slack) return false;
  }
  for (int j = 0; j < lp.num_cols(); ++j) {
    const double slack = tol * (1.0 + std::abs(x[j]));
    if (x[j] < lp.lower[j] - slack || x[j] > lp.upper[j] + slack) return false;
  }
  return true;
}

}  // namespace detail

/// Solves `lp`. A warm basis from an earlier solve of a problem with the same
/// columns (and the same or fewer rows) is reused when it is still valid.
inline LpSolution solve_lp(const LinearProgram& lp, const LpOptions& opts = {}, const Basis* warm = nullptr) {
  if (const std::string err = lp.check(); !err.empty()) {
    throw std::invalid_argument("solve_lp: " + err);
  }
  if (!opts.scale) {
    detail::Simplex simplex(lp, opts);
    return simplex.run(warm);
  }
  const auto sc = detail::geometric_scaling(lp);
  if (sc.identity) {
    detail::Simplex simplex(lp, opts);
    return simplex.run(warm);
  }
  // x = S x', row i multiplied by R_i; duals y = R y', reduced costs d = d' / S.
  LinearProgram scaled;
  scaled.sense = lp.sense;
  scaled.cost.resize(lp.num_cols());
  scaled.lower.resize(lp.num_cols());
  scaled.upper.resize(lp.num_cols());
  scaled.col_names.resize(lp.num_cols());
  for (int j = 0; j < lp.num_cols(); ++j) {
    scaled.cost[j] = lp.cost[j] * sc.col[j];
    scaled.lower[j] = lp.lower[j] / sc.col[j];
    scaled.upper[j] = lp.upper[j] / sc.col[j];
  }
  scaled.row_sense = lp.row_sense;
  scaled.rhs.resize(lp.num_rows());
  scaled.row_names.resize(lp.num_rows());
  for (int r = 0; r < lp.num_rows(); ++r) scaled.rhs[r] = lp.rhs[r] * sc.row[r];
  scaled.entries = lp.entries;
  for (auto& t : scaled.entries) t.value *= sc.row[t.row] * sc.col[t.col];
  detail::Simplex simplex(scaled, opts);
  LpSolution sol = simplex.run(warm);
  for (int j = 0; j < lp.num_cols(); ++j) {
    sol.x[j] *= sc.col[j];
    sol.reduced_costs[j] /= sc.col[j];
  }
  for (int r = 0; r < lp.num_rows(); ++r) sol.duals[r] *= sc.row[r];
  double obj = 0.0;
  for (int j = 0; j < lp.num_cols(); ++j) obj += lp.cost[j] * sol.x[j];
  sol.objective = obj;
  if (sol.status == LpStatus::Optimal && !detail::feasible_in(lp, sol.x, 1e-7)) {
    detail::Simplex plain(lp, opts);
    return plain.run(warm);
  }
  return sol;
}

struct TaggedDual {
  std::string tag;
  double value = 0.0;
};

/// Row duals grouped by constraint family. Row tags look like
/// `eq6/j=...,c=...,p=...`; the prefix selects the family.
struct TaggedDuals {
  std::map<std::string, std::vector<TaggedDual>> by_family;

  const std::vector<TaggedDual>& family(const std::string& name) const {
    auto it = by_family.find(name);
    if (it == by_family.end()) throw std::out_of_range("no dual family '" + name + "'");
    return it->second;
  }
};

inline std::string family_of_tag(const std::string& tag) {
  static const std::map<std::string, std::string> names{
      {"eq6", "supply"},           {"eq7", "demand"},     {"eq8", "origin-balance"},
      {"eq9", "destination-balance"}, {"eq10", "processing"}, {"eq11", "storage"},
  };
  const auto slash = tag.find('/');
  const std::string prefix = tag.substr(0, slash);
  auto it = names.find(prefix);
  return it == names.end() ? prefix : it->second;
}

inline TaggedDuals extract_row_duals(const LpSolution& sol, const std::vector<std::string>& row_tags) {
  if (sol.status != LpStatus::Optimal) throw std::invalid_argument("extract_row_duals: solution is not optimal");
  if (row_tags.size() != sol.duals.size()) throw std::invalid_argument("extract_row_duals: tag count does not match rows");
  TaggedDuals out;
  for (std::size_t r = 0; r < row_tags.size(); ++r) {
    const auto& tag = row_tags[r];
    if (tag.empty() || tag.find('/') == std::string::npos) {
      throw std::invalid_argument("extract_row_duals: row " + std::to_string(r) + " has no tag family");
    }
    out.by_family[family_of_tag(tag)].push_back({tag, sol.duals[r]});
  }
  return out;
}

/// Writes `lp` in CPLEX LP text format. Names are the row/column tags with
/// characters the format rejects replaced by '_'.
inline void write_lp_format(std::ostream& os, const LinearProgram& lp) {
  auto clean = [](const std::string& name, char prefix, int index) {
    if (name.empty()) return std::string(1, prefix) + std::to_string(index);
    std::string out = name;
    for (char& ch : out) {
      if (!(std::isalnum(static_cast<unsigned char>(ch)) || std::strchr("!\"#$%&()/,.;?@_`'{}|~", ch))) ch = '_';
    }
    if (std::isdigit(static_cast<unsigned char>(out[0])) || out[0] == '.') out.insert(out.begin(), prefix);
    return out;
  };
  auto num = [](double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
  };
  std::vector<std::string> cols(lp.num_cols());
  for (int j = 0; j < lp.num_cols(); ++j) cols[j] = clean(lp.col_names[j], 'x', j);
  auto term = [&](double v, int j, bool first) {
    std::string t;
    if (v < 0) t = first ? "- " : " - ";
    else t = first ? "" : " + ";
    return t + num(std::abs(v)) + " " + cols[j];
  };
  os << (lp.sense == Sense::Maximize ? "Maximize\n" : "Minimize\n") << " obj:";
  bool first = true;
  for (int j = 0; j < lp.num_cols(); ++j) {
    if (lp.cost[j] == 0.0) continue;
    os << " " << term(lp.cost[j], j, first);
    first = false;
  }
  if (first) os << " 0 " << (lp.num_cols() > 0 ? cols[0] : std::string("x0"));
  os << "\nSubject To\n";
  std::size_t k = 0;
  for (int r = 0; r < lp.num_rows(); ++r) {
    os << " " << clean(lp.row_names[r], 'r', r) << ":";
    first = true;
    for (; k < lp.entries.size() && lp.entries[k].row == r; ++k) {
      os << " " << term(lp.entries[k].value, lp.entries[k].col, first);
      first = false;
    }
    switch (lp.row_sense[r]) {
      case RowSense::LessEqual: os << " <= "; break;
      case RowSense::GreaterEqual: os << " >= "; break;
      case RowSense::Equal: os << " = "; break;
    }
    os << num(lp.rhs[r]) << "\n";
  }
  os << "Bounds\n";
  for (int j = 0; j < lp.num_cols(); ++j) {
    const double lo = lp.lower[j], up = lp.upper[j];
    if (lo == 0.0 && up == kInf) continue;
    if (lo == up) {
      os << " " << cols[j] << " = " << num(lo) << "\n";
    } else if (!std::isfinite(lo) && !std::isfinite(up)) {
      os << " " << cols[j] << " free\n";
    } else {
      os << " " << (std::isfinite(lo) ? num(lo) : std::string("-inf")) << " <= " << cols[j] << " <= "
         << (std::isfinite(up) ? num(up) : std::string("+inf")) << "\n";
    }
  }
  os << "End\n";
}

}  // namespace wsn::lp
