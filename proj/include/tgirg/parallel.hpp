#pragma once

#include <cstddef>
#include <functional>

namespace tgirg {

/// Worker count: GIRG_THREADS if set and positive, else hardware concurrency (at least 1).
unsigned thread_count();

/// Calls fn(i) for every i in [0, count) using up to thread_count() threads.
/// Work items are handed out dynamically; callers write results by index.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace tgirg
