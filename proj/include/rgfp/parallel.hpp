#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace rgfp {

// Worker cap used by grid evaluations; 0 means hardware concurrency.
void set_max_threads(int n);
int max_threads();

// Evaluates fn(i) for i in [0, n) on up to max_threads() workers. Results are stored by index, so
// the output does not depend on scheduling.
std::vector<double> parallel_map(size_t n, const std::function<double(size_t)>& fn);

}  // namespace rgfp
