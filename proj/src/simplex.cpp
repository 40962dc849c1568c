#include "simplex.hpp"

#include <cmath>
#include <limits>

#include "hullmeter/error.hpp"

namespace hullmeter::detail {

namespace {
constexpr double kReducedCostTol = 1e-11;
constexpr double kPivotTol = 1e-9;
constexpr int kRefactorEvery = 50;
constexpr int kDegenerateStreak = 64;
}  // namespace

Simplex::Simplex(Eigen::VectorXd b) : b_(std::move(b)) {
  if ((b_.array() < 0.0).any()) throw ValidationError("simplex right-hand side must be nonnegative");
  const int m = rows();
  basis_.resize(m);
  for (int i = 0; i < m; ++i) basis_[i] = i;  // shifted by cols() when read
  binv_ = Eigen::MatrixXd::Identity(m, m);
  xb_ = b_;
}

int Simplex::add_column(Eigen::VectorXd column, double cost) {
  if (column.size() != rows()) throw ValidationError("simplex column has wrong length");
  // Artificial indices are cols() + row; shift them to stay past the new column.
  for (auto& v : basis_)
    if (v >= cols()) ++v;
  columns_.push_back(std::move(column));
  costs_.push_back(cost);
  return cols() - 1;
}

double Simplex::cost_of(int var, bool phase1) const {
  if (is_artificial(var)) return phase1 ? 1.0 : 0.0;
  return phase1 ? 0.0 : costs_[var];
}

Eigen::VectorXd Simplex::column_of(int var) const {
  if (is_artificial(var)) return Eigen::VectorXd::Unit(rows(), var - cols());
  return columns_[var];
}

Eigen::VectorXd Simplex::multipliers(bool phase1) const {
  Eigen::VectorXd cb(rows());
  for (int i = 0; i < rows(); ++i) cb[i] = cost_of(basis_[i], phase1);
  return binv_.transpose() * cb;
}

void Simplex::refactor() {
  const int m = rows();
  Eigen::MatrixXd bmat(m, m);
  for (int i = 0; i < m; ++i) bmat.col(i) = column_of(basis_[i]);
  binv_ = bmat.partialPivLu().inverse();
  xb_ = binv_ * b_;
  for (int i = 0; i < m; ++i)
    if (xb_[i] < 0.0 && xb_[i] > -1e-9) xb_[i] = 0.0;
  since_refactor_ = 0;
}

void Simplex::pivot(int row, int var, const Eigen::VectorXd& alpha) {
  const double theta = xb_[row] / alpha[row];
  xb_ -= theta * alpha;
  xb_[row] = theta;
  for (int i = 0; i < rows(); ++i)
    if (xb_[i] < 0.0 && xb_[i] > -1e-12) xb_[i] = 0.0;
  const Eigen::RowVectorXd prow = binv_.row(row) / alpha[row];
  for (int i = 0; i < rows(); ++i)
    if (i != row) binv_.row(i) -= alpha[i] * prow;
  binv_.row(row) = prow;
  basis_[row] = var;
  ++pivots_;
  if (++since_refactor_ >= kRefactorEvery) refactor();
}

Simplex::Status Simplex::iterate(bool phase1, int max_pivots) {
  const int m = rows();
  std::vector<char> in_basis(cols() + m, 0);
  for (int v : basis_) in_basis[v] = 1;
  int degenerate = 0;
  for (int it = 0; it < max_pivots; ++it) {
    const Eigen::VectorXd y = multipliers(phase1);
    const bool bland = degenerate >= kDegenerateStreak;
    int entering = -1;
    double best = -kReducedCostTol;
    for (int j = 0; j < cols(); ++j) {
      if (in_basis[j]) continue;
      const double d = cost_of(j, phase1) - y.dot(columns_[j]);
      if (d < best) {
        entering = j;
        best = d;
        if (bland) break;
      }
    }
    if (entering < 0) return Status::Optimal;

    const Eigen::VectorXd alpha = binv_ * columns_[entering];
    int leave = -1;
    double ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      double r;
      if (!phase1 && is_artificial(basis_[i]) && std::abs(alpha[i]) > kPivotTol)
        r = 0.0;
      else if (alpha[i] > kPivotTol)
        r = std::max(0.0, xb_[i]) / alpha[i];
      else
        continue;
      const bool better =
          leave < 0 || r < ratio - 1e-14 || (std::abs(r - ratio) <= 1e-14 && basis_[i] < basis_[leave]);
      if (better) {
        ratio = r;
        leave = i;
      }
    }
    if (leave < 0) return Status::Unbounded;
    degenerate = ratio <= 1e-14 ? degenerate + 1 : 0;
    in_basis[basis_[leave]] = 0;
    in_basis[entering] = 1;
    pivot(leave, entering, alpha);
  }
  return Status::IterationLimit;
}

void Simplex::drive_out_artificials() {
  for (int i = 0; i < rows(); ++i) {
    if (!is_artificial(basis_[i])) continue;
    for (int j = 0; j < cols(); ++j) {
      bool basic = false;
      for (int v : basis_) basic = basic || v == j;
      if (basic) continue;
      const Eigen::VectorXd alpha = binv_ * columns_[j];
      if (std::abs(alpha[i]) > 1e-7) {
        pivot(i, j, alpha);
        break;
      }
    }
  }
}

Simplex::Status Simplex::solve(int max_pivots) {
  refactor();
  if (!phase1_done_) {
    const Status s = iterate(true, max_pivots);
    if (s != Status::Optimal) return s;
    double infeas = 0.0;
    for (int i = 0; i < rows(); ++i)
      if (is_artificial(basis_[i])) infeas += xb_[i];
    if (infeas > 1e-8) return Status::Infeasible;
    phase1_done_ = true;
  }
  drive_out_artificials();
  return iterate(false, max_pivots);
}

double Simplex::objective() const {
  double s = 0.0;
  for (int i = 0; i < rows(); ++i)
    if (!is_artificial(basis_[i])) s += costs_[basis_[i]] * xb_[i];
  return s;
}

double Simplex::value(int j) const {
  for (int i = 0; i < rows(); ++i)
    if (basis_[i] == j) return xb_[i];
  return 0.0;
}

Eigen::VectorXd Simplex::duals() const { return multipliers(false); }

HullLp::HullLp(const Eigen::VectorXd& target)
    : n_(static_cast<int>(target.size())), lp_(Eigen::VectorXd::Unit(target.size() + 1, target.size())) {
  Eigen::VectorXd t(n_ + 1);
  t.head(n_) = -target;
  t[n_] = 0.0;
  lp_.add_column(std::move(t), -1.0);
}

void HullLp::add_point(const Eigen::VectorXd& r) {
  if (r.size() != n_) throw ValidationError("hull point has wrong length");
  Eigen::VectorXd c(n_ + 1);
  c.head(n_) = r;
  c[n_] = 1.0;
  lp_.add_column(std::move(c), 0.0);
}

bool HullLp::solve() { return lp_.solve() == Simplex::Status::Optimal; }

Eigen::VectorXd HullLp::direction() const { return lp_.duals().head(n_); }

std::vector<double> HullLp::weights() const {
  std::vector<double> w(points());
  for (int k = 0; k < points(); ++k) w[k] = lp_.value(k + 1);
  return w;
}

}  // namespace hullmeter::detail
