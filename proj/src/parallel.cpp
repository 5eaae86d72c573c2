#include "geoweb/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace geoweb {

int thread_count()
{
    int requested = 0;
    if (const char* env = std::getenv("GEOWEB_THREADS")) requested = std::atoi(env);
    if (requested <= 0) requested = static_cast<int>(std::thread::hardware_concurrency());
    return std::max(1, requested);
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn, int threads)
{
    const auto workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, threads)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = count;
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
}

} // namespace geoweb
