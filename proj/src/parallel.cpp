#include "winding/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace winding {

std::size_t worker_count() {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("WINDING_THREADS")) {
        try {
            long cap = std::stol(env);
            if (cap > 0) n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
        } catch (const std::exception&) {
            // ignore malformed values
        }
    }
    return n;
}

namespace {
thread_local bool inside_worker = false;
} // namespace

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    // Nested calls run inline on the calling worker.
    const std::size_t workers = inside_worker ? 1 : std::min(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::atomic<std::size_t> next{0};
    // Small chunks balance uneven iterations; each index is still written
    // by exactly one worker.
    const std::size_t chunk = std::max<std::size_t>(1, n / (workers * 16));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            inside_worker = true;
            try {
                for (;;) {
                    const std::size_t begin = next.fetch_add(chunk);
                    if (begin >= n) break;
                    const std::size_t end = std::min(n, begin + chunk);
                    for (std::size_t i = begin; i < end; ++i) body(i);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                next.store(n);
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace winding
