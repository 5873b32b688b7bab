#pragma once

#include <cstddef>
#include <functional>

namespace stz {

// 0 means "use the hardware concurrency".
void set_thread_count(int n);
int thread_count();

// Runs f(0), ..., f(n-1) on up to thread_count() threads. Each index must
// write only its own output slot. If several calls throw, the exception of
// the smallest index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

} // namespace stz
