#pragma once

#include <functional>

namespace catkit {

/// Worker count: hardware concurrency capped by the CATKIT_THREADS environment
/// variable (0 or unset = auto). Read once per process.
int thread_cap();

/// Runs fn(0..n-1) across up to thread_cap() workers. Each index writes its
/// own slot, so results are identical for any worker count; callers reduce in
/// index order afterwards.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace catkit
