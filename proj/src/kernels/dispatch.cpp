#include <atomic>
#include <cstdlib>

#include "bbga/kernels.hpp"

namespace bbga::kernels {
namespace {

const KernelTable* resolve(std::string_view name) noexcept {
  if (name == "scalar") return &scalar_table();
  if (name == "avx2") return avx2_table();
  if (name == "auto" || name.empty()) {
    if (const KernelTable* t = avx2_table()) return t;
    return &scalar_table();
  }
  return nullptr;
}

const KernelTable* initial() noexcept {
  const char* env = std::getenv("BBGA_KERNELS");
  if (env != nullptr) {
    if (const KernelTable* t = resolve(env)) return t;
  }
  return resolve("auto");
}

std::atomic<const KernelTable*>& slot() noexcept {
  static std::atomic<const KernelTable*> table{initial()};
  return table;
}

}  // namespace

const KernelTable& active() noexcept {
  return *slot().load(std::memory_order_acquire);
}

bool select(std::string_view name) noexcept {
  const KernelTable* t = resolve(name);
  if (t == nullptr) return false;
  slot().store(t, std::memory_order_release);
  return true;
}

}  // namespace bbga::kernels
