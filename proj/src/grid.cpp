#include "bq/grid.hpp"

#include "bq/parallel.hpp"

namespace bq {

int GridSpec::nodes() const {
  int t = 1;
  for (int c : count) t *= c;
  return t;
}

int GridSpec::index(const std::vector<int>& c) const {
  int idx = 0;
  for (int a = n - 1; a >= 0; --a) idx = idx * count[a] + c[a];
  return idx;
}

std::vector<int> GridSpec::coords(int idx) const {
  std::vector<int> c(n);
  for (int a = 0; a < n; ++a) {
    c[a] = idx % count[a];
    idx /= count[a];
  }
  return c;
}

Eigen::VectorXd GridSpec::point(int idx) const {
  const auto c = coords(idx);
  Eigen::VectorXd u(n);
  for (int a = 0; a < n; ++a) u(a) = umin[a] + c[a] * h[a];
  return u;
}

int GridSpec::neighbor(int idx, int axis, int offset) const {
  auto c = coords(idx);
  c[axis] += offset;
  if (c[axis] < 0 || c[axis] >= count[axis]) return -1;
  return index(c);
}

bool GridSpec::interior(int idx, int margin) const {
  const auto c = coords(idx);
  for (int a = 0; a < n; ++a)
    if (c[a] < margin || c[a] >= count[a] - margin) return false;
  return true;
}

GridSpec make_grid(int n, double umin, double h, int count) {
  if (count < 2 || h <= 0) throw Error(Errc::InvalidArgument, "grid needs >= 2 nodes per axis and h > 0");
  GridSpec g;
  g.n = n;
  g.umin.assign(n, umin);
  g.h.assign(n, h);
  g.count.assign(n, count);
  return g;
}

std::vector<CMat> fd_derivative(const GridSpec& g, const std::vector<CMat>& f, int axis, int order) {
  const int N = g.count[axis];
  const double h = g.h[axis];
  std::vector<CMat> d(f.size());
  if (order == 4 && N < 5) order = 2;
  if (N < 3) order = 1;
  for (int idx = 0; idx < g.nodes(); ++idx) {
    const int i = g.coords(idx)[axis];
    auto at = [&](int k) -> const CMat& { return f[g.neighbor(idx, axis, k - i)]; };
    if (order == 1) {
      d[idx] = (i + 1 < N) ? CMat((at(i + 1) - at(i)) / h) : CMat((at(i) - at(i - 1)) / h);
    } else if (order == 2) {
      if (i == 0) d[idx] = (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2 * h);
      else if (i == N - 1) d[idx] = (3.0 * at(N - 1) - 4.0 * at(N - 2) + at(N - 3)) / (2 * h);
      else d[idx] = (at(i + 1) - at(i - 1)) / (2 * h);
    } else {
      const double s = 12 * h;
      if (i == 0) d[idx] = (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) - 3.0 * at(4)) / s;
      else if (i == 1) d[idx] = (-3.0 * at(0) - 10.0 * at(1) + 18.0 * at(2) - 6.0 * at(3) + at(4)) / s;
      else if (i == N - 1)
        d[idx] = (25.0 * at(N - 1) - 48.0 * at(N - 2) + 36.0 * at(N - 3) - 16.0 * at(N - 4) + 3.0 * at(N - 5)) / s;
      else if (i == N - 2)
        d[idx] = (3.0 * at(N - 1) + 10.0 * at(N - 2) - 18.0 * at(N - 3) + 6.0 * at(N - 4) - at(N - 5)) / s;
      else d[idx] = (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2)) / s;
    }
  }
  return d;
}

CVec rk4_step(const AxisDeriv& f, const Eigen::VectorXd& u, const CVec& y, int axis, double h) {
  Eigen::VectorXd um = u, ue = u;
  um(axis) += 0.5 * h;
  ue(axis) += h;
  const CVec k1 = f(u, y, axis);
  const CVec k2 = f(um, y + 0.5 * h * k1, axis);
  const CVec k3 = f(um, y + 0.5 * h * k2, axis);
  const CVec k4 = f(ue, y + h * k3, axis);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

std::vector<CVec> sweep_rk4(const GridSpec& g, const CVec& base, const AxisDeriv& f,
                            const std::vector<int>& axis_order, int threads) {
  std::vector<CVec> out(g.nodes());
  out[0] = base;
  std::vector<int> frontier{0};
  for (int axis : axis_order) {
    std::vector<std::vector<int>> lines(frontier.size());
    parallel_for(static_cast<int>(frontier.size()), threads, [&](int li) {
      int idx = frontier[li];
      lines[li].push_back(idx);
      for (int k = 1; k < g.count[axis]; ++k) {
        const int nxt = g.neighbor(idx, axis, 1);
        out[nxt] = rk4_step(f, g.point(idx), out[idx], axis, g.h[axis]);
        idx = nxt;
        lines[li].push_back(idx);
      }
    });
    std::vector<int> next;
    for (const auto& l : lines) next.insert(next.end(), l.begin(), l.end());
    frontier.swap(next);
  }
  return out;
}

std::vector<int> default_order(int n) {
  std::vector<int> o(n);
  for (int i = 0; i < n; ++i) o[i] = i;
  return o;
}

std::vector<int> reversed_order(int n) {
  std::vector<int> o(n);
  for (int i = 0; i < n; ++i) o[i] = n - 1 - i;
  return o;
}

}  // namespace bq
