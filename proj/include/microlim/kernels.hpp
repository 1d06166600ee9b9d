#pragma once

// Data-parallel inner loops. Each kernel has a serial reference and an OpenMP variant; both
// evaluate the same expression per site, so for a given input they agree bit for bit.

#include <cstddef>
#include <span>
#include <stdexcept>

namespace microlim::kernels {

template <class T>
struct WalkWeights {
  T plus{};   // weight of u_{m+1}
  T zero{};   // weight of u_m
  T minus{};  // weight of u_{m-1}
};

enum class BoundaryKind { Periodic, Dirichlet };

template <class T>
struct BoundaryPolicy {
  BoundaryKind kind = BoundaryKind::Periodic;
  T left{};
  T right{};
};

namespace detail {

template <class T>
inline T walk_site(std::span<const T> in, std::size_t m, std::size_t left, std::size_t right,
                   const WalkWeights<T>& w) {
  return w.plus * in[right] + w.zero * in[m] + w.minus * in[left];
}

template <class T>
inline void check_sizes(std::span<const T> in, std::span<T> out) {
  if (in.size() != out.size() || in.size() < 3) throw std::invalid_argument("walk kernel: size mismatch");
}

}  // namespace detail

// One synchronous update u^{k+1}_m = p+ u_{m+1} + p0 u_m + p- u_{m-1}.
template <class T>
void walk_step_serial(std::span<const T> in, std::span<T> out, const WalkWeights<T>& w,
                      const BoundaryPolicy<T>& bc) {
  detail::check_sizes(in, out);
  const std::size_t n = in.size();
  if (bc.kind == BoundaryKind::Periodic) {
    out[0] = detail::walk_site(in, 0, n - 1, 1, w);
    for (std::size_t m = 1; m + 1 < n; ++m) out[m] = detail::walk_site(in, m, m - 1, m + 1, w);
    out[n - 1] = detail::walk_site(in, n - 1, n - 2, 0, w);
  } else {
    out[0] = bc.left;
    for (std::size_t m = 1; m + 1 < n; ++m) out[m] = detail::walk_site(in, m, m - 1, m + 1, w);
    out[n - 1] = bc.right;
  }
}

template <class T>
void walk_step_parallel(std::span<const T> in, std::span<T> out, const WalkWeights<T>& w,
                        const BoundaryPolicy<T>& bc) {
  detail::check_sizes(in, out);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(in.size());
  const bool periodic = bc.kind == BoundaryKind::Periodic;
#pragma omp parallel for schedule(static) if (n > 2048)
  for (std::ptrdiff_t m = 1; m < n - 1; ++m) {
    const auto i = static_cast<std::size_t>(m);
    out[i] = detail::walk_site(in, i, i - 1, i + 1, w);
  }
  if (periodic) {
    out[0] = detail::walk_site(in, 0, in.size() - 1, 1, w);
    out[in.size() - 1] = detail::walk_site(in, in.size() - 1, in.size() - 2, 0, w);
  } else {
    out[0] = bc.left;
    out[in.size() - 1] = bc.right;
  }
}

// a_m = coupling * (u_{m+1} - 2 u_m + u_{m-1}), coupling = c^2/dx^2 = k/M.
// With fixed ends the first and last sites are clamped and get zero acceleration.
inline void chain_accel_serial(std::span<const double> u, std::span<double> a, double coupling, bool periodic) {
  const std::size_t n = u.size();
  if (a.size() != n || n < 3) throw std::invalid_argument("chain kernel: size mismatch");
  for (std::size_t m = 1; m + 1 < n; ++m) a[m] = coupling * (u[m + 1] - 2.0 * u[m] + u[m - 1]);
  if (periodic) {
    a[0] = coupling * (u[1] - 2.0 * u[0] + u[n - 1]);
    a[n - 1] = coupling * (u[0] - 2.0 * u[n - 1] + u[n - 2]);
  } else {
    a[0] = 0.0;
    a[n - 1] = 0.0;
  }
}

inline void chain_accel_parallel(std::span<const double> u, std::span<double> a, double coupling, bool periodic) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(u.size());
  if (static_cast<std::ptrdiff_t>(a.size()) != n || n < 3) throw std::invalid_argument("chain kernel: size mismatch");
#pragma omp parallel for schedule(static) if (n > 4096)
  for (std::ptrdiff_t m = 1; m < n - 1; ++m) a[m] = coupling * (u[m + 1] - 2.0 * u[m] + u[m - 1]);
  const auto last = static_cast<std::size_t>(n - 1);
  if (periodic) {
    a[0] = coupling * (u[1] - 2.0 * u[0] + u[last]);
    a[last] = coupling * (u[0] - 2.0 * u[last] + u[last - 1]);
  } else {
    a[0] = 0.0;
    a[last] = 0.0;
  }
}

}  // namespace microlim::kernels
