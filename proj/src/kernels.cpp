#include "ptcount/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace ptcount::kernels {

namespace {

bool cpu_has(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(PTCOUNT_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(PTCOUNT_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const detail::KernelTable* table_for(Isa isa) {
  switch (isa) {
#if defined(PTCOUNT_HAVE_AVX2)
    case Isa::avx2:
      return &detail::avx2_table;
#endif
#if defined(PTCOUNT_HAVE_NEON)
    case Isa::neon:
      return &detail::neon_table;
#endif
    default:
      return &detail::scalar_table;
  }
}

Isa initial_isa() {
  if (const char* env = std::getenv("PTCOUNT_KERNELS")) {
    const std::string want(env);
    for (Isa isa : available_isas()) {
      if (isa_name(isa) == want) return isa;
    }
  }
  const auto all = available_isas();
  return all.back();
}

struct State {
  std::atomic<Isa> isa;
  std::atomic<const detail::KernelTable*> table;
  State() : isa(initial_isa()), table(table_for(isa.load())) {}
};

State& state() {
  static State s;
  return s;
}

const detail::KernelTable& active() { return *state().table.load(std::memory_order_relaxed); }

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
    if (cpu_has(isa)) out.push_back(isa);
  }
  return out;
}

Isa active_isa() { return state().isa.load(); }

void set_active_isa(Isa isa) {
  if (!cpu_has(isa)) throw std::invalid_argument("kernel variant unavailable: " + std::string(isa_name(isa)));
  state().isa.store(isa);
  state().table.store(table_for(isa));
}

void affine_row(std::int64_t base, std::span<const std::int64_t> table, std::span<std::int64_t> out) {
  if (out.size() < table.size()) throw std::invalid_argument("affine_row output too small");
  active().affine_row(base, table.data(), table.size(), out.data());
}

void hash_row(std::span<const std::int64_t> keys, unsigned shift, std::span<std::uint64_t> out) {
  if (out.size() < keys.size()) throw std::invalid_argument("hash_row output too small");
  if (shift < 1 || shift > 63) throw std::invalid_argument("hash shift out of range");
  active().hash_row(keys.data(), keys.size(), shift, out.data());
}

std::size_t find_equal(std::int64_t base, std::span<const std::int64_t> table, std::int64_t target,
                       std::span<std::uint32_t> hits) {
  if (hits.size() < table.size()) throw std::invalid_argument("find_equal hit buffer too small");
  return active().find_equal(base, table.data(), table.size(), target, hits.data());
}

}  // namespace ptcount::kernels
