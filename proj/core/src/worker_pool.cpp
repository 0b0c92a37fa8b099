#include "pairhmm/worker_pool.hpp"

#include <stdexcept>
#include <utility>

namespace pairhmm {

WorkerPool::WorkerPool(unsigned workers) {
  if (workers == 0) throw std::invalid_argument("worker pool needs at least one worker");
  threads_.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) threads_.emplace_back([this, w] { worker_loop(w); });
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard lock(mu_);
    stop_ = true;
  }
  work_cv_.notify_all();
  for (auto& t : threads_) t.join();
}

void WorkerPool::parallel_for(std::size_t count, const Task& task) {
  if (count == 0) return;
  std::unique_lock lock(mu_);
  task_ = &task;
  count_ = count;
  next_ = 0;
  running_ = 0;
  failure_ = nullptr;
  ++generation_;
  work_cv_.notify_all();
  done_cv_.wait(lock, [this] { return next_ >= count_ && running_ == 0; });
  task_ = nullptr;
  if (failure_) std::rethrow_exception(std::exchange(failure_, nullptr));
}

void WorkerPool::worker_loop(unsigned worker) {
  std::size_t seen = 0;
  std::unique_lock lock(mu_);
  while (true) {
    work_cv_.wait(lock, [&] { return stop_ || (generation_ != seen && task_ != nullptr && next_ < count_); });
    if (stop_) return;
    while (task_ != nullptr && next_ < count_) {
      const std::size_t index = next_++;
      ++running_;
      const Task* task = task_;
      lock.unlock();
      try {
        (*task)(index, worker);
      } catch (...) {
        lock.lock();
        if (!failure_) failure_ = std::current_exception();
        next_ = count_;
        lock.unlock();
      }
      lock.lock();
      --running_;
    }
    seen = generation_;
    if (running_ == 0) done_cv_.notify_all();
  }
}

}  // namespace pairhmm
