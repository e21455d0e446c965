#include "mlsde/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mlsde {

void parallel_for(std::int64_t count, int workers,
                  const std::function<void(std::int64_t)>& body) {
    if (count <= 0) return;
    if (workers <= 1 || count == 1) {
        for (std::int64_t i = 0; i < count; ++i) body(i);
        return;
    }

    int n_threads = static_cast<int>(std::min<std::int64_t>(workers, count));
    // Chunk size is a function of count only; assignment of chunks to threads
    // is dynamic and does not influence results.
    std::int64_t chunk = std::clamp<std::int64_t>(count / 64, 1, 4096);
    std::atomic<std::int64_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr error;

    auto run = [&] {
        for (;;) {
            std::int64_t begin = next.fetch_add(chunk);
            if (begin >= count) return;
            std::int64_t end = std::min(begin + chunk, count);
            try {
                for (std::int64_t i = begin; i < end; ++i) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads) - 1);
    for (int t = 1; t < n_threads; ++t) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace mlsde
