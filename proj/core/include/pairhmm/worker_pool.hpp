#pragma once

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace pairhmm {

/// Fixed set of worker threads executing one indexed task set at a time.
class WorkerPool {
 public:
  using Task = std::function<void(std::size_t task, unsigned worker)>;

  explicit WorkerPool(unsigned workers);
  ~WorkerPool();

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  unsigned size() const noexcept { return static_cast<unsigned>(threads_.size()); }

  /// Runs task(i, worker) for every i in [0, count) and blocks until all have
  /// finished. The first exception thrown by a task is rethrown here.
  void parallel_for(std::size_t count, const Task& task);

 private:
  void worker_loop(unsigned worker);

  std::mutex mu_;
  std::condition_variable work_cv_;
  std::condition_variable done_cv_;
  const Task* task_ = nullptr;
  std::size_t count_ = 0;
  std::size_t next_ = 0;
  std::size_t running_ = 0;
  std::size_t generation_ = 0;
  bool stop_ = false;
  std::exception_ptr failure_;
  std::vector<std::thread> threads_;
};

}  // namespace pairhmm
