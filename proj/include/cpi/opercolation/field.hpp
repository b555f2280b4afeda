#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cpi {

/// 0/1 field on the cells (m, n) of Lambda with |m| <= m_max, 0 <= n <= n_max
/// and m + n even. Off-parity and out-of-range cells read as closed.
class PercField {
 public:
  PercField() = default;
  PercField(int m_max, int n_max, std::string source = "explicit");

  [[nodiscard]] int m_max() const { return m_max_; }
  [[nodiscard]] int n_max() const { return n_max_; }
  [[nodiscard]] const std::string& source() const { return source_; }

  [[nodiscard]] static bool on_lattice(int m, int n) { return ((m + n) % 2 + 2) % 2 == 0 && n >= 0; }
  [[nodiscard]] bool in_range(int m, int n) const {
    return n >= 0 && n <= n_max_ && m >= -m_max_ && m <= m_max_;
  }
  [[nodiscard]] bool open(int m, int n) const {
    return in_range(m, n) && on_lattice(m, n) && cells_[index(m, n)] != 0;
  }
  /// Throws for off-lattice or out-of-range cells.
  void set(int m, int n, bool open);

  /// Number of lattice cells and of open ones.
  [[nodiscard]] std::int64_t cell_count() const;
  [[nodiscard]] std::int64_t open_count() const;

  friend bool operator==(const PercField&, const PercField&) = default;

 private:
  [[nodiscard]] std::size_t index(int m, int n) const {
    return static_cast<std::size_t>(n) * static_cast<std::size_t>(2 * m_max_ + 1) +
           static_cast<std::size_t>(m + m_max_);
  }

  int m_max_ = 0;
  int n_max_ = 0;
  std::string source_;
  std::vector<std::uint8_t> cells_;
};

/// Independent Bernoulli(p) cells; cell (m, n) draws from its own keyed
/// stream, so enlarging the field keeps existing cells.
PercField sample_field(double p, int m_max, int n_max, std::uint64_t seed);

/// CSV `m,n,open` over lattice cells, n-major.
void write_field_csv(std::ostream& out, const PercField& f);

}  // namespace cpi
