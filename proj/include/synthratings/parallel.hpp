#pragma once

namespace synthratings {

/// Caps the worker count used by every parallel kernel; 0 restores the
/// OpenMP default. apply_thread_limit_from_env reads SYNTHRATINGS_THREADS.
void set_thread_limit(int threads);
void apply_thread_limit_from_env();
int thread_limit();

}  // namespace synthratings
