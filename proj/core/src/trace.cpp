#include "karcher/trace.hpp"

#include <algorithm>
#include <stdexcept>

namespace karcher {

void IterationTrace::append(std::int64_t index, double error,
                            std::int64_t wall_ns) {
  if (!indices_.empty() && index <= indices_.back())
    throw std::logic_error("trace indices must be strictly increasing");
  indices_.push_back(index);
  errors_.push_back(error);
  wall_ns_.push_back(wall_ns);
}

void IterationTrace::retain(std::int64_t index, const SpdMatrix& iterate) {
  iterates_.emplace_back(index, iterate);
}

void IterationTrace::mark_aborted(std::string reason) {
  aborted_ = true;
  abort_reason_ = std::move(reason);
}

double IterationTrace::error_at(std::int64_t index) const {
  const auto it = std::lower_bound(indices_.begin(), indices_.end(), index);
  if (it == indices_.end() || *it != index)
    throw std::out_of_range("no error recorded at requested index");
  return errors_[static_cast<std::size_t>(it - indices_.begin())];
}

double IterationTrace::final_error() const {
  if (errors_.empty()) throw std::out_of_range("empty trace");
  return errors_.back();
}

std::int64_t IterationTrace::final_index() const {
  if (indices_.empty()) throw std::out_of_range("empty trace");
  return indices_.back();
}

}  // namespace karcher
