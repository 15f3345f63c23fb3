#ifndef GRFORGE_PARALLEL_H
#define GRFORGE_PARALLEL_H

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace grforge {

/*
  Runs body(0) ... body(count - 1) on up to `jobs` threads. If any call
  throws, the exception of the lowest failing index is rethrown after all
  workers finish, so error reporting does not depend on scheduling.
*/
inline void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)> &body) {
    const std::size_t workers = std::min<std::size_t>(std::max(jobs, 1), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next {0};
    std::vector<std::exception_ptr> errors(count);
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < workers; ++t)
        threads.emplace_back(work);
    for (std::thread &t : threads)
        t.join();
    for (const std::exception_ptr &error : errors)
        if (error)
            std::rethrow_exception(error);
}

}

#endif
