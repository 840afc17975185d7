#include "catkit/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace catkit {

int thread_cap() {
    static const int cap = [] {
        int hw = static_cast<int>(std::thread::hardware_concurrency());
        if (hw < 1) hw = 1;
        if (const char* env = std::getenv("CATKIT_THREADS")) {
            const int v = std::atoi(env);
            if (v > 0) return std::min(v, hw);
        }
        return hw;
    }();
    return cap;
}

void parallel_for(int n, const std::function<void(int)>& fn) {
    const int workers = std::min(thread_cap(), n);
    if (workers <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto body = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
    for (auto& t : pool) t.join();
}

}  // namespace catkit
