#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "karcher/matrix.hpp"

namespace karcher {

struct TraceMeta {
  std::string scheme;
  std::uint64_t seed = 0;
  std::string measure_digest;
};

/// Indexed record of an iteration: an error (Thompson distance to a
/// reference point) at every appended index, full iterates retained
/// sparsely. Indices are strictly increasing.
class IterationTrace {
 public:
  void append(std::int64_t index, double error, std::int64_t wall_ns = 0);
  void retain(std::int64_t index, const SpdMatrix& iterate);
  void mark_aborted(std::string reason);

  const std::vector<std::int64_t>& indices() const { return indices_; }
  const std::vector<double>& errors() const { return errors_; }
  const std::vector<std::int64_t>& wall_ns() const { return wall_ns_; }
  const std::vector<std::pair<std::int64_t, SpdMatrix>>& iterates() const {
    return iterates_;
  }
  bool aborted() const { return aborted_; }
  const std::string& abort_reason() const { return abort_reason_; }

  TraceMeta& meta() { return meta_; }
  const TraceMeta& meta() const { return meta_; }

  std::size_t steps() const { return indices_.size(); }
  /// Error recorded at exactly this index; throws if absent.
  double error_at(std::int64_t index) const;
  double final_error() const;
  std::int64_t final_index() const;

 private:
  std::vector<std::int64_t> indices_;
  std::vector<double> errors_;
  std::vector<std::int64_t> wall_ns_;
  std::vector<std::pair<std::int64_t, SpdMatrix>> iterates_;
  TraceMeta meta_;
  bool aborted_ = false;
  std::string abort_reason_;
};

}  // namespace karcher
