#pragma once

#include <vector>

#include <Eigen/Dense>

namespace hullmeter::detail {

// Dense revised simplex for   min c.x  s.t.  A x = b, x >= 0   with b >= 0.
// Columns can be appended between solves; the current basis stays feasible
// so later solves warm-start in phase 2. Artificial variables are indexed
// after the structural columns and never re-enter once phase 1 is done.
class Simplex {
 public:
  enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

  explicit Simplex(Eigen::VectorXd b);

  int rows() const { return static_cast<int>(b_.size()); }
  int cols() const { return static_cast<int>(columns_.size()); }

  int add_column(Eigen::VectorXd column, double cost);
  Status solve(int max_pivots = 100000);

  double objective() const;
  // Value of structural variable j (0 when nonbasic).
  double value(int j) const;
  // Simplex multipliers y = c_B B^{-1} of the last optimal basis.
  Eigen::VectorXd duals() const;
  int pivots() const { return pivots_; }

 private:
  bool is_artificial(int var) const { return var >= cols(); }
  double cost_of(int var, bool phase1) const;
  Eigen::VectorXd column_of(int var) const;
  Eigen::VectorXd multipliers(bool phase1) const;
  Status iterate(bool phase1, int max_pivots);
  void pivot(int row, int var, const Eigen::VectorXd& alpha);
  void refactor();
  void drive_out_artificials();

  Eigen::VectorXd b_;
  std::vector<Eigen::VectorXd> columns_;
  std::vector<double> costs_;
  std::vector<int> basis_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
  bool phase1_done_ = false;
  int pivots_ = 0;
  int since_refactor_ = 0;
};

// max t  s.t.  sum_k w_k r_k = t R,  sum_k w_k = 1,  w, t >= 0.
// The optimum t* is the largest shrink factor with t* R in the convex hull of
// the supplied vectors; the dual l (with l.R = 1) attains max_k l.r_k = t*.
class HullLp {
 public:
  explicit HullLp(const Eigen::VectorXd& target);

  void add_point(const Eigen::VectorXd& r);
  bool solve();

  double shrink() const { return lp_.value(0); }
  Eigen::VectorXd direction() const;
  // Convex weights of the supplied points, in insertion order.
  std::vector<double> weights() const;
  int points() const { return lp_.cols() - 1; }

 private:
  int n_;
  Simplex lp_;
};

}  // namespace hullmeter::detail
