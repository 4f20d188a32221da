#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace stacky {

// Worker count: STACKY_THREADS if set (>= 1), else hardware concurrency.
int thread_count();

// Evaluates fn(i) for i in [0, count) and returns results in index order, so
// output never depends on scheduling.
template <class T>
std::vector<T> parallel_map(std::size_t count, const std::function<T(std::size_t)>& fn);

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

template <class T>
std::vector<T> parallel_map(std::size_t count, const std::function<T(std::size_t)>& fn) {
    std::vector<T> out(count);
    parallel_for(count, [&](std::size_t i) { out[i] = fn(i); });
    return out;
}

}  // namespace stacky
