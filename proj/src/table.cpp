#include "maxstable/table.hpp"

#include "maxstable/errors.hpp"

namespace maxstable {

Table Table::from_rows(const std::vector<std::vector<double>>& rows) {
  Table t(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != t.cols_) throw UsageError("ragged table rows");
    for (std::size_t c = 0; c < t.cols_; ++c) t(r, c) = rows[r][c];
  }
  return t;
}

std::vector<double> Table::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

std::vector<std::vector<double>> Table::to_rows() const {
  std::vector<std::vector<double>> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r].assign(row(r).begin(), row(r).end());
  return out;
}

}  // namespace maxstable
