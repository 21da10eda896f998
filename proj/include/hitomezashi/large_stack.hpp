#pragma once

// Certificates recurse once per column a loop spans, and loops in random
// patterns can span tens of thousands of columns. Work on such trees runs on
// threads with a large (lazily committed) stack.

#include <pthread.h>

#include <exception>
#include <functional>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <utility>

namespace hitomezashi::detail {

inline constexpr std::size_t kLargeStackBytes = std::size_t{1} << 30;

inline bool& on_large_stack_flag() noexcept {
    thread_local bool flag = false;
    return flag;
}

class LargeStackThread {
public:
    explicit LargeStackThread(std::function<void()> body) : body_(std::move(body)) {
        pthread_attr_t attr;
        pthread_attr_init(&attr);
        pthread_attr_setstacksize(&attr, kLargeStackBytes);
        const int rc = pthread_create(&thread_, &attr, &LargeStackThread::entry, this);
        pthread_attr_destroy(&attr);
        if (rc != 0) {
            throw std::runtime_error("cannot start worker thread");
        }
    }
    LargeStackThread(const LargeStackThread&) = delete;
    LargeStackThread& operator=(const LargeStackThread&) = delete;
    ~LargeStackThread() {
        if (!joined_) {
            pthread_join(thread_, nullptr);
        }
    }

    // Waits for the body and rethrows anything it threw.
    void join() {
        if (joined_) {
            return;
        }
        pthread_join(thread_, nullptr);
        joined_ = true;
        if (error_) {
            std::rethrow_exception(std::exchange(error_, nullptr));
        }
    }

private:
    static void* entry(void* self) {
        auto* t = static_cast<LargeStackThread*>(self);
        on_large_stack_flag() = true;
        try {
            t->body_();
        } catch (...) {
            t->error_ = std::current_exception();
        }
        return nullptr;
    }

    std::function<void()> body_;
    pthread_t thread_{};
    bool joined_ = false;
    std::exception_ptr error_;
};

// f() on a large stack: directly when already on one, else on a new thread.
template <typename F>
auto on_large_stack(F&& f) -> std::invoke_result_t<F&> {
    if (on_large_stack_flag()) {
        return f();
    }
    std::optional<std::invoke_result_t<F&>> result;
    LargeStackThread t([&] { result.emplace(f()); });
    t.join();
    return std::move(*result);
}

} // namespace hitomezashi::detail
