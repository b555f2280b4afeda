#include "cpi/opercolation/field.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "cpi/core.hpp"
#include "cpi/random.hpp"

namespace cpi {

PercField::PercField(int m_max, int n_max, std::string source)
    : m_max_(m_max), n_max_(n_max), source_(std::move(source)) {
  if (m_max < 0 || n_max < 0) throw InvalidArgument("field: negative dimensions");
  cells_.assign(static_cast<std::size_t>(2 * m_max + 1) * static_cast<std::size_t>(n_max + 1), 0);
}

void PercField::set(int m, int n, bool open) {
  if (!on_lattice(m, n)) throw InvalidArgument("field: cell off the lattice (m + n odd)");
  if (!in_range(m, n)) throw WindowError("field: cell outside the field");
  cells_[index(m, n)] = open ? 1 : 0;
}

std::int64_t PercField::cell_count() const {
  std::int64_t c = 0;
  for (int n = 0; n <= n_max_; ++n) {
    for (int m = -m_max_; m <= m_max_; ++m) c += on_lattice(m, n);
  }
  return c;
}

std::int64_t PercField::open_count() const {
  std::int64_t c = 0;
  for (int n = 0; n <= n_max_; ++n) {
    for (int m = -m_max_; m <= m_max_; ++m) c += open(m, n);
  }
  return c;
}

PercField sample_field(double p, int m_max, int n_max, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("sample_field: p outside [0, 1]");
  std::ostringstream src;
  src.precision(17);
  src << "bernoulli(" << p << ", " << seed << ")";
  PercField f(m_max, n_max, src.str());
  for (int n = 0; n <= n_max; ++n) {
    for (int m = -m_max; m <= m_max; ++m) {
      if (!PercField::on_lattice(m, n)) continue;
      CounterStream s(stream_key(seed, StreamKind::kPercolation, m, n));
      f.set(m, n, s.next_bernoulli(p));
    }
  }
  return f;
}

void write_field_csv(std::ostream& out, const PercField& f) {
  out << "m,n,open\n";
  for (int n = 0; n <= f.n_max(); ++n) {
    for (int m = -f.m_max(); m <= f.m_max(); ++m) {
      if (PercField::on_lattice(m, n)) out << m << ',' << n << ',' << (f.open(m, n) ? 1 : 0) << '\n';
    }
  }
}

}  // namespace cpi
