#pragma once

// Coroutine plumbing for structured agent programs. A program body is a
// tree of lazily started `Proc` coroutines; every round the innermost one
// suspends on a `RoundAwaiter` after publishing its action.

#include <coroutine>
#include <exception>
#include <utility>

#include "rdv/agent.hpp"
#include "rdv/error.hpp"

namespace rdv::detail {

struct Driver {
  Observation obs;
  Action action = Action::stay();
  std::coroutine_handle<> suspended;
  bool finished = false;
};

class Proc {
 public:
  struct promise_type;
  using Handle = std::coroutine_handle<promise_type>;

  struct promise_type {
    std::coroutine_handle<> continuation;
    Driver* driver = nullptr;

    Proc get_return_object() { return Proc(Handle::from_promise(*this)); }
    std::suspend_always initial_suspend() noexcept { return {}; }

    struct FinalAwaiter {
      bool await_ready() noexcept { return false; }
      std::coroutine_handle<> await_suspend(Handle h) noexcept {
        auto& p = h.promise();
        if (p.continuation) return p.continuation;
        p.driver->finished = true;
        return std::noop_coroutine();
      }
      void await_resume() noexcept {}
    };
    FinalAwaiter final_suspend() noexcept { return {}; }
    void return_void() noexcept {}
    void unhandled_exception() { throw; }
  };

  Proc(Proc&& o) noexcept : h_(std::exchange(o.h_, {})) {}
  Proc& operator=(Proc&& o) noexcept {
    if (this != &o) {
      if (h_) h_.destroy();
      h_ = std::exchange(o.h_, {});
    }
    return *this;
  }
  ~Proc() {
    if (h_) h_.destroy();
  }

  // Awaiting a Proc runs it as a subroutine of the awaiting coroutine.
  bool await_ready() const noexcept { return false; }
  std::coroutine_handle<> await_suspend(Handle parent) noexcept {
    h_.promise().driver = parent.promise().driver;
    h_.promise().continuation = parent;
    return h_;
  }
  void await_resume() const noexcept {}

  // Starts a top-level body; returns once it has published its first action.
  void start(Driver& d) {
    h_.promise().driver = &d;
    d.suspended = h_;
    h_.resume();
  }

 private:
  explicit Proc(Handle h) : h_(h) {}
  Handle h_;
};

// Publishes an action and resumes with the next observation.
struct RoundAwaiter {
  Driver* driver;
  Action action;

  bool await_ready() const noexcept { return false; }
  void await_suspend(std::coroutine_handle<> h) noexcept {
    driver->action = action;
    driver->suspended = h;
  }
  Observation await_resume() const noexcept { return driver->obs; }
};

inline Action resume_round(Driver& d, Observation obs) {
  if (d.finished) throw Error("structured program finished");
  d.obs = obs;
  d.suspended.resume();
  if (d.finished) throw Error("structured program finished");
  return d.action;
}

}  // namespace rdv::detail
