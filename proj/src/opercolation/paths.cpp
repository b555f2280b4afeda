#include "cpi/opercolation/paths.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cpi/core.hpp"

namespace cpi {

LevelSets open_reach(const PercField& field, const std::vector<int>& sources, int level) {
  if (level < 0 || level > field.n_max()) throw WindowError("open_reach: level outside the field");
  LevelSets out;
  out.first_level = level;
  std::vector<int> cur;
  for (int m : sources) {
    if (!PercField::on_lattice(m, level)) throw InvalidArgument("open_reach: source off the lattice");
    if (field.open(m, level)) cur.push_back(m);
  }
  std::sort(cur.begin(), cur.end());
  cur.erase(std::unique(cur.begin(), cur.end()), cur.end());
  for (int n = level;; ++n) {
    out.rightmost.push_back(cur.empty() ? kNoParticle : cur.back());
    out.sites.push_back(cur);
    if (n == field.n_max()) break;
    std::vector<int> next;
    for (int m : cur) {
      for (int d : {-1, 1}) {
        if (field.open(m + d, n + 1) && (next.empty() || next.back() < m + d)) next.push_back(m + d);
      }
    }
    cur = std::move(next);
  }
  return out;
}

bool percolates_to(const PercField& field, int m, int n, int height) {
  if (height < n) return false;
  if (height > field.n_max()) throw WindowError("percolates_to: height beyond the field");
  const LevelSets ls = open_reach(field, {m}, n);
  return !ls.at(height).empty();
}

std::optional<BlockPath> find_path(const PercField& field, int start, int height,
                                   const std::function<bool(int, int)>& allowed, bool prefer_outer_left) {
  if (height > field.n_max()) throw WindowError("find_path: height beyond the field");
  auto ok = [&](int m, int n) { return field.open(m, n) && allowed(m, n); };
  if (!ok(start, 0)) return std::nullopt;
  // Forward DP over reachable cells, then backtrack from the outermost end.
  std::vector<std::vector<int>> levels{{start}};
  for (int n = 0; n < height; ++n) {
    std::vector<int> next;
    for (int m : levels.back()) {
      for (int d : {-1, 1}) {
        if (ok(m + d, n + 1) && (next.empty() || next.back() < m + d)) next.push_back(m + d);
      }
    }
    if (next.empty()) return std::nullopt;
    levels.push_back(std::move(next));
  }
  BlockPath path(static_cast<std::size_t>(height + 1));
  int m = prefer_outer_left ? levels.back().front() : levels.back().back();
  path[static_cast<std::size_t>(height)] = m;
  for (int n = height - 1; n >= 0; --n) {
    const auto& lv = levels[static_cast<std::size_t>(n)];
    const int a = prefer_outer_left ? m - 1 : m + 1;
    const int b = prefer_outer_left ? m + 1 : m - 1;
    m = std::binary_search(lv.begin(), lv.end(), a) ? a : b;
    path[static_cast<std::size_t>(n)] = m;
  }
  return path;
}

GammaResult gamma_event(const PercField& field, double beta, int i) {
  if (i < 0 || i > field.n_max()) throw WindowError("gamma_event: level outside the field");
  if (field.m_max() < i + 2) {
    std::ostringstream os;
    os << "gamma_event: field half-width " << field.m_max() << " below i + 2 = " << i + 2;
    throw WindowError(os.str());
  }
  GammaResult r;
  r.left = find_path(field, -2, i, [beta](int m, int n) { return m < -beta * n; }, true);
  r.right = find_path(field, 2, i, [beta](int m, int n) { return m > beta * n; }, false);
  r.holds = r.left.has_value() && r.right.has_value();
  return r;
}

}  // namespace cpi
