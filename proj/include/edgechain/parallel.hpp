#pragma once

namespace edgechain {

/// Selects the OpenMP path or the serial reference path of a data-parallel loop.
/// Both paths run the same per-item code, so results are bitwise identical.
enum class Execution { parallel, serial };

/// Number of OpenMP workers used by parallel paths.
int worker_count();
void set_worker_count(int n);

}  // namespace edgechain
