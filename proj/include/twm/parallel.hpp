#pragma once

namespace twm {

/// Thread count used by the OpenMP kernels. Defaults to TWM_THREADS, then the OpenMP runtime default.
int thread_count();
void set_thread_count(int threads);

}  // namespace twm
