#pragma once

#include <cstddef>
#include <functional>

namespace actlab {

// Execution policy for the data-parallel kernels. Serial is the reference
// path; parallel uses OpenMP when compiled in and degrades to serial
// otherwise. Both paths must produce bitwise identical results: bodies write
// only to their own index slot and any reduction happens afterwards in index
// order.
enum class Exec { serial, parallel };

// Runs body(i) for i in [0, count). Exceptions thrown by bodies are captured
// per index and the one with the lowest index is rethrown, so failure
// behavior does not depend on thread scheduling.
void for_each_index(std::size_t count, Exec exec, const std::function<void(std::size_t)>& body);

}  // namespace actlab
