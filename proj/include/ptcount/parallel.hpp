#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

namespace ptcount {

/// Text checkpoint of completed partitions. The first line names the
/// workload; each further line is "<label> <c0>,<c1>,..." holding the
/// partition's per-bin counts, where labels look like "lo..hi".
class Checkpoint {
 public:
  /// Loads any existing file at `path`. A file written for a different
  /// workload is rejected; a torn final line is ignored.
  Checkpoint(std::string path, std::string workload);

  const std::vector<std::uint64_t>* find(const std::string& label) const;
  std::size_t completed_count() const { return done_.size(); }
  void record(const std::string& label, const std::vector<std::uint64_t>& counts);

 private:
  std::string path_;
  std::map<std::string, std::vector<std::uint64_t>> done_;
  std::mutex mu_;
};

struct RunOptions {
  int threads = 1;
  Checkpoint* checkpoint = nullptr;
};

/// Runs `work(i)` for every partition not already in the checkpoint and
/// returns the elementwise sum of the per-partition count vectors. Results
/// are merged in partition order, so the total is independent of the number
/// of workers and of which partitions were resumed.
std::vector<std::uint64_t> run_partitions(const std::vector<std::string>& labels, std::size_t width,
                                          const std::function<std::vector<std::uint64_t>(std::size_t)>& work,
                                          const RunOptions& options);

}  // namespace ptcount
