#include "synthratings/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace synthratings {
namespace {
int default_threads() {
#ifdef _OPENMP
  static const int n = omp_get_max_threads();
  return n;
#else
  return 1;
#endif
}
}  // namespace

void set_thread_limit(int threads) {
#ifdef _OPENMP
  omp_set_num_threads(threads > 0 ? threads : default_threads());
#else
  (void)threads;
#endif
}

void apply_thread_limit_from_env() {
  const char* env = std::getenv("SYNTHRATINGS_THREADS");
  if (env == nullptr || *env == '\0') return;
  try {
    set_thread_limit(std::stoi(env));
  } catch (const std::exception&) {
    // unparsable values fall back to the default
  }
}

int thread_limit() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace synthratings
