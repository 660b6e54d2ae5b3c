#include "clf/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace clf::par {

int thread_cap() {
    if (const char* env = std::getenv("CEGIS_CLF_THREADS")) {
        try {
            return std::max(1, std::stoi(env));
        } catch (...) {
            return 1;
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void for_each_chunk(std::int64_t n_chunks, const std::function<void(std::int64_t)>& fn) {
    if (n_chunks <= 0) return;
    const int workers = static_cast<int>(std::min<std::int64_t>(thread_cap(), n_chunks));
    if (workers <= 1) {
        for (std::int64_t k = 0; k < n_chunks; ++k) fn(k);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::int64_t k = next.fetch_add(1, std::memory_order_relaxed);
            if (k >= n_chunks) break;
            try {
                fn(k);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                break;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers) - 1);
    for (int t = 1; t < workers; ++t) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace clf::par
