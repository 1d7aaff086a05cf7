#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace compass::detail {

// Splits [0, rows) into contiguous bands, one per hardware thread, and calls
// fn(begin, end) for each band. Bands never overlap, so callers that write
// only to their own rows need no synchronisation. The first exception thrown
// by any band is rethrown on the calling thread.
template <typename Fn>
void parallel_rows(int rows, Fn&& fn) {
    const int workers =
        std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, std::max(rows, 1));
    if (workers == 1) {
        fn(0, rows);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        const int band = (rows + workers - 1) / workers;
        for (int begin = 0; begin < rows; begin += band) {
            const int end = std::min(rows, begin + band);
            pool.emplace_back([&, begin, end] {
                try {
                    fn(begin, end);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                }
            });
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

}  // namespace compass::detail
