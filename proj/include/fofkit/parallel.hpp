#pragma once

namespace fofkit {

/// Number of worker threads kernels will use.
int thread_count();

/// Caps the worker threads used by all parallel kernels. Values < 1 reset to
/// the OpenMP default.
void set_thread_count(int n);

/// Applies FOFKIT_THREADS from the environment, if set. Returns the count in
/// effect afterwards.
int apply_thread_env();

}  // namespace fofkit
