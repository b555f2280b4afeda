#include "cpi/opercolation/closure.hpp"

#include <cmath>
#include <ostream>

#include <json.hpp>

#include "cpi/core.hpp"

namespace cpi {

std::vector<ClosureRow> closure_estimate(std::span<const PercField> fields, int k, int max_r,
                                         std::int64_t min_trials) {
  if (k < 0 || max_r < 1) throw InvalidArgument("closure_estimate: need k >= 0 and max_r >= 1");
  const int gap = 2 * k + 2;
  std::vector<ClosureRow> rows;
  for (int r = 1; r <= max_r; ++r) {
    ClosureRow row;
    row.r = r;
    const int span = (r - 1) * gap;
    for (const PercField& f : fields) {
      for (int n = 0; n <= f.n_max(); n += gap) {
        // Start on the lattice parity of this level; next group starts past this one.
        for (int m = -f.m_max() + ((f.m_max() + n) % 2); m + span <= f.m_max(); m += span + gap) {
          bool all_closed = true;
          for (int j = 0; j < r && all_closed; ++j) all_closed = !f.open(m + j * gap, n);
          row.count += all_closed;
          ++row.trials;
        }
      }
    }
    if (row.trials < min_trials) {
      throw InvalidArgument("closure_estimate: ensemble too small for r = " + std::to_string(r));
    }
    const Proportion p = proportion(row.count, row.trials);
    row.freq = p.freq;
    row.eps_hat = std::pow(p.freq, 1.0 / r);
    row.ci_lo = std::pow(p.ci.lo, 1.0 / r);
    row.ci_hi = std::pow(p.ci.hi, 1.0 / r);
    rows.push_back(row);
  }
  return rows;
}

void write_closure_json(std::ostream& out, const std::vector<ClosureRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    arr.push_back({{"r", r.r},
                   {"count", r.count},
                   {"trials", r.trials},
                   {"freq", r.freq},
                   {"eps_hat", r.eps_hat},
                   {"ci_lo", r.ci_lo},
                   {"ci_hi", r.ci_hi}});
  }
  out << arr.dump(2) << '\n';
}

}  // namespace cpi
