#include "dimer/experiments/parallel.hpp"

#include <cstdlib>
#include <string>

namespace dimer::experiments {

int thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("DIMERSIM_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
      // ignore a malformed value
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace dimer::experiments
