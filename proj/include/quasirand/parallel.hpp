#pragma once

namespace quasirand {

// Worker count for parallel kernels: QUASIRAND_THREADS when set to a
// positive integer, otherwise the OpenMP default.
int worker_count();

}  // namespace quasirand
