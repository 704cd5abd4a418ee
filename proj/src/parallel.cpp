#include "kyfan/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace kyfan {

int worker_count() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("KYFAN_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1) return std::min<int>(cap, static_cast<int>(hw));
    } catch (const std::exception&) {
    }
  }
  return static_cast<int>(hw);
}

}  // namespace kyfan
