#pragma once

#include <cstddef>
#include <functional>

namespace pdmp {

/// Worker count from PDMP_WORKERS, else 1.
std::size_t defaultWorkerCount();

/// Runs body(i) for i in [0, count) on up to `workers` threads. Each index
/// runs exactly once; the first exception thrown is rethrown after joining.
void parallelFor(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& body);

}  // namespace pdmp
