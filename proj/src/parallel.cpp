#include "aniso/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace aniso {

namespace {
std::atomic<int> g_threads{1};
}

void set_thread_count(int n) { g_threads = std::max(1, n); }

int thread_count() { return g_threads; }

void parallel_rows(int n, const std::function<void(int)>& body) {
    const int workers = std::min(thread_count(), n);
    if (workers <= 1) {
        for (int r = 0; r < n; ++r) body(r);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        const int begin = static_cast<int>(static_cast<long long>(n) * w / workers);
        const int end = static_cast<int>(static_cast<long long>(n) * (w + 1) / workers);
        pool.emplace_back([begin, end, &body] {
            for (int r = begin; r < end; ++r) body(r);
        });
    }
    for (auto& t : pool) t.join();
}

double ordered_sum(const std::vector<double>& partials) {
    double s = 0.0;
    for (double p : partials) s += p;
    return s;
}

}  // namespace aniso
