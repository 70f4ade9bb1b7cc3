#pragma once

// Dense kernels shared by the power iteration and the opinion recursions.
//
// Each kernel exists in a serial reference form and an OpenMP form. Both
// accumulate every output row in the same order (ascending column index), so
// their results are bit-identical; the serial form is kept for tests and for
// the benchmark baseline.

#include <span>

#include "fjmm/types.hpp"

namespace fjmm::kernels {

enum class Backend { kSerial, kParallel };

/// Backend used by the library-level wrappers below. Defaults to kParallel
/// when built with OpenMP.
Backend default_backend() noexcept;
void set_default_backend(Backend backend) noexcept;

/// Returns true when the library was compiled with OpenMP.
bool parallel_available() noexcept;

// y = A x
void gemv_serial(const Matrix& a, const Vector& x, Vector& y);
void gemv_parallel(const Matrix& a, const Vector& x, Vector& y);
void gemv(const Matrix& a, const Vector& x, Vector& y);

// y = sum_k A_k x_k + c. All A_k are n x n; xs.size() == as.size().
void lagged_sum_serial(std::span<const Matrix> as, std::span<const Vector> xs,
                       const Vector& c, Vector& y);
void lagged_sum_parallel(std::span<const Matrix> as, std::span<const Vector> xs,
                         const Vector& c, Vector& y);
void lagged_sum(std::span<const Matrix> as, std::span<const Vector> xs, const Vector& c,
                Vector& y);

}  // namespace fjmm::kernels
