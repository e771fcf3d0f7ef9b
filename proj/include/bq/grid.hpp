#pragma once

#include <functional>
#include <vector>

#include "bq/types.hpp"

namespace bq {

struct GridSpec {
  int n = 2;
  std::vector<double> umin;
  std::vector<double> h;
  std::vector<int> count;  // nodes per axis

  int nodes() const;
  int index(const std::vector<int>& c) const;
  std::vector<int> coords(int idx) const;
  Eigen::VectorXd point(int idx) const;
  int neighbor(int idx, int axis, int offset) const;  // −1 if outside
  bool interior(int idx, int margin) const;
};

GridSpec make_grid(int n, double umin, double h, int count);

// Derivative of a node field along axis, central in the interior and one-sided at the ends.
std::vector<CMat> fd_derivative(const GridSpec& g, const std::vector<CMat>& f, int axis, int order);

using AxisDeriv = std::function<CVec(const Eigen::VectorXd& u, const CVec& y, int axis)>;

CVec rk4_step(const AxisDeriv& f, const Eigen::VectorXd& u, const CVec& y, int axis, double h);

// Integrates along axis_order[0] from node 0, then along each later axis from every reached node.
std::vector<CVec> sweep_rk4(const GridSpec& g, const CVec& base, const AxisDeriv& f,
                            const std::vector<int>& axis_order, int threads = 1);

std::vector<int> default_order(int n);
std::vector<int> reversed_order(int n);

}  // namespace bq
