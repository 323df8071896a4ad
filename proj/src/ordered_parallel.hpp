// Order-preserving parallel map over a stream.
#pragma once

#include <condition_variable>
#include <deque>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

namespace scenaug::detail {

// Pulls inputs on the calling thread, runs `work` on `jobs` threads, and
// hands results to `emit` strictly in input order on a dedicated thread.
// In-flight items are bounded, so memory stays O(jobs) regardless of stream
// length. jobs <= 1 runs everything inline; the emitted sequence is
// identical at any degree, which is what makes output bytes independent of
// parallelism.
template <class In, class Out>
void ordered_pipeline(const std::function<std::optional<In>()>& pull,
                      const std::function<Out(In&)>& work,
                      const std::function<void(Out&)>& emit, int jobs) {
  if (jobs <= 1) {
    while (auto in = pull()) {
      Out out = work(*in);
      emit(out);
    }
    return;
  }

  struct Shared {
    std::mutex m;
    std::condition_variable cv_feed, cv_work, cv_emit;
    std::deque<std::pair<std::size_t, In>> queue;
    std::map<std::size_t, Out> done;
    std::size_t next_issue = 0;
    std::size_t next_emit = 0;
    bool feeding_done = false;
    std::exception_ptr error;
  } sh;
  const std::size_t window = static_cast<std::size_t>(jobs) * 4 + 8;

  auto fail = [&sh](std::exception_ptr e) {
    std::lock_guard lk(sh.m);
    if (!sh.error) sh.error = std::move(e);
    sh.cv_feed.notify_all();
    sh.cv_work.notify_all();
    sh.cv_emit.notify_all();
  };

  auto worker = [&]() {
    for (;;) {
      std::unique_lock lk(sh.m);
      sh.cv_work.wait(lk, [&] { return sh.error || !sh.queue.empty() || sh.feeding_done; });
      if (sh.error) return;
      if (sh.queue.empty()) {
        if (sh.feeding_done) return;
        continue;
      }
      auto [idx, in] = std::move(sh.queue.front());
      sh.queue.pop_front();
      lk.unlock();
      try {
        Out out = work(in);
        lk.lock();
        sh.done.emplace(idx, std::move(out));
        sh.cv_emit.notify_one();
      } catch (...) {
        fail(std::current_exception());
        return;
      }
    }
  };

  auto emitter = [&]() {
    for (;;) {
      std::unique_lock lk(sh.m);
      sh.cv_emit.wait(lk, [&] {
        return sh.error || sh.done.count(sh.next_emit) != 0 ||
               (sh.feeding_done && sh.next_emit == sh.next_issue);
      });
      if (sh.error) return;
      auto it = sh.done.find(sh.next_emit);
      if (it == sh.done.end()) return;  // feeding done and everything emitted
      Out out = std::move(it->second);
      sh.done.erase(it);
      ++sh.next_emit;
      lk.unlock();
      sh.cv_feed.notify_one();
      try {
        emit(out);
      } catch (...) {
        fail(std::current_exception());
        return;
      }
    }
  };

  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (int i = 0; i < jobs; ++i) workers.emplace_back(worker);
  std::thread emit_thread(emitter);

  while (auto in = pull()) {
    std::unique_lock lk(sh.m);
    sh.cv_feed.wait(lk, [&] { return sh.error || sh.next_issue - sh.next_emit < window; });
    if (sh.error) break;
    sh.queue.emplace_back(sh.next_issue++, std::move(*in));
    sh.cv_work.notify_one();
  }
  {
    std::lock_guard lk(sh.m);
    sh.feeding_done = true;
    sh.cv_work.notify_all();
    sh.cv_emit.notify_all();
  }
  for (std::thread& t : workers) t.join();
  {
    // Workers are gone; wake the emitter for the final drain.
    std::lock_guard lk(sh.m);
    sh.cv_emit.notify_all();
  }
  emit_thread.join();
  if (sh.error) std::rethrow_exception(sh.error);
}

}  // namespace scenaug::detail
