#ifndef LIFTSYS_PARALLEL_HPP
#define LIFTSYS_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace liftsys {

// Runs fn(i) for i in [0, n) across OpenMP threads. Each index must write
// only to its own slot, so the result does not depend on the schedule.
// The first exception (lowest index) is rethrown on the calling thread.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  std::exception_ptr first_error;
  std::size_t first_index = n;
  std::mutex guard;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (static_cast<std::size_t>(i) < first_index) {
        first_index = static_cast<std::size_t>(i);
        first_error = std::current_exception();
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

template <class Fn>
void serial_for(std::size_t n, Fn&& fn) {
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Restricts OpenMP regions to one thread while alive; used to compare the
// parallel kernels against their serial runs.
class SerialScope {
 public:
  SerialScope() : saved_(max_threads()) { set_threads(1); }
  ~SerialScope() { set_threads(saved_); }
  SerialScope(const SerialScope&) = delete;
  SerialScope& operator=(const SerialScope&) = delete;

 private:
  static void set_threads([[maybe_unused]] int n) {
#ifdef _OPENMP
    omp_set_num_threads(n);
#endif
  }
  int saved_;
};

}  // namespace liftsys

#endif  // LIFTSYS_PARALLEL_HPP
