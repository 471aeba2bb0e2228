#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace webscatter {

using cplx = std::complex<double>;

constexpr double kPi = 3.141592653589793238462643383279502884;

// Thrown when a resolvent is requested at (or too close to) an eigenvalue
// of the central block.
struct PoleError : std::runtime_error {
  int eigen_index;
  PoleError(int j, const std::string& what)
      : std::runtime_error(what), eigen_index(j) {}
};

// Thrown when a sample lands too close to a pole of U(k,omega); callers
// switch to residue machinery or drop the sample.
struct NearPoleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Coefficient recovery produced inconsistent data (negative value under a
// square root, singular Marchenko system, ...).
struct ReconstructionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Gauss-Legendre nodes/weights on [x1, x2].
void gauss_legendre(int n, double x1, double x2, std::vector<double>& nodes,
                    std::vector<double>& weights);

// Runs fn(i) for i in [0, n). Work is split into contiguous blocks over at
// most `threads` workers; callers must write results by index so the output
// is deterministic regardless of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  int threads = 0);

// Resolves the worker count: explicit value, else WEBSCATTER_THREADS, else 1.
int resolve_threads(int requested);

}  // namespace webscatter
