#pragma once

#include <cstdint>
#include <exception>
#include <type_traits>
#include <vector>

namespace rlab::detail {

// values[i] = fn(i) over an OpenMP loop; the first exception is rethrown.
template <class Fn>
auto parallel_map(std::size_t count, Fn&& fn) {
  std::vector<std::invoke_result_t<Fn&, std::size_t>> out(count);
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(rlab_parallel_map_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace rlab::detail
