#include "ptcount/parallel.hpp"

#include <atomic>
#include <charconv>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "ptcount/integer.hpp"

namespace ptcount {

namespace {

const std::string kHeaderPrefix = "# ptcount checkpoint: ";

std::vector<std::uint64_t> parse_counts(const std::string& text, const std::string& path) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    std::uint64_t v = 0;
    const char* b = text.data() + pos;
    const char* e = text.data() + comma;
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e) throw InvalidInput("corrupt checkpoint '" + path + "'");
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

}  // namespace

Checkpoint::Checkpoint(std::string path, std::string workload) : path_(std::move(path)) {
  std::ifstream in(path_, std::ios::binary);
  if (in) {
    std::string contents((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    // Drop a torn trailing line from an interrupted write.
    const auto last_nl = contents.rfind('\n');
    contents.resize(last_nl == std::string::npos ? 0 : last_nl + 1);
    std::istringstream lines(contents);
    std::string line;
    bool first = true;
    while (std::getline(lines, line)) {
      if (first) {
        if (line != kHeaderPrefix + workload) {
          throw InvalidInput("checkpoint '" + path_ + "' belongs to a different workload");
        }
        first = false;
        continue;
      }
      const auto space = line.find(' ');
      if (space == std::string::npos) throw InvalidInput("corrupt checkpoint '" + path_ + "'");
      done_[line.substr(0, space)] = parse_counts(line.substr(space + 1), path_);
    }
    if (first) {
      std::ofstream out(path_, std::ios::binary | std::ios::trunc);
      out << kHeaderPrefix << workload << '\n';
    } else {
      std::ofstream out(path_, std::ios::binary | std::ios::trunc);
      out << contents;
    }
  } else {
    std::ofstream out(path_, std::ios::binary);
    if (!out) throw InvalidInput("cannot create checkpoint '" + path_ + "'");
    out << kHeaderPrefix << workload << '\n';
  }
}

const std::vector<std::uint64_t>* Checkpoint::find(const std::string& label) const {
  const auto it = done_.find(label);
  return it == done_.end() ? nullptr : &it->second;
}

void Checkpoint::record(const std::string& label, const std::vector<std::uint64_t>& counts) {
  std::lock_guard lock(mu_);
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  out << label << ' ';
  for (std::size_t i = 0; i < counts.size(); ++i) out << (i ? "," : "") << counts[i];
  out << '\n';
  out.flush();
  done_[label] = counts;
}

std::vector<std::uint64_t> run_partitions(const std::vector<std::string>& labels, std::size_t width,
                                          const std::function<std::vector<std::uint64_t>(std::size_t)>& work,
                                          const RunOptions& options) {
  if (options.threads < 1) throw InvalidInput("thread count must be at least 1");
  if (options.checkpoint != nullptr) {
    const std::set<std::string> known(labels.begin(), labels.end());
    for (const auto& label : labels) {
      const auto* c = options.checkpoint->find(label);
      if (c != nullptr && c->size() != width) throw InvalidInput("checkpoint entry '" + label + "' has wrong width");
    }
    std::size_t matched = 0;
    for (const auto& label : known) matched += options.checkpoint->find(label) != nullptr;
    if (matched != options.checkpoint->completed_count()) {
      throw InvalidInput("checkpoint lists partitions this run does not have");
    }
  }

  std::vector<std::vector<std::uint64_t>> results(labels.size());
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto* c = options.checkpoint ? options.checkpoint->find(labels[i]) : nullptr;
    if (c != nullptr) {
      results[i] = *c;
    } else {
      pending.push_back(i);
    }
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t k = next.fetch_add(1);
      if (k >= pending.size()) return;
      const std::size_t i = pending[k];
      try {
        auto counts = work(i);
        if (counts.size() != width) throw std::logic_error("partition returned wrong number of bins");
        if (options.checkpoint != nullptr) options.checkpoint->record(labels[i], counts);
        results[i] = std::move(counts);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        failed.store(true);
      }
    }
  };
  const std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(options.threads), std::max<std::size_t>(pending.size(), 1));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  std::vector<std::uint64_t> total(width, 0);
  for (const auto& r : results) {
    for (std::size_t j = 0; j < width; ++j) total[j] += r[j];
  }
  return total;
}

}  // namespace ptcount
