#ifndef STARGL_TENSOR_HPP_
#define STARGL_TENSOR_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "stargl/types.hpp"

namespace stargl {

// 4-D complex tensor R with axes (antenna m, pilot i, phase j, amplitude k).
// Storage is flat with the antenna axis fastest:
//   index = m + M*(i + N_p*(j + N*k)).
// This type deliberately knows nothing about channels; the CSI-free
// inference path works exclusively on it.
struct Tensor4C {
  int m = 0, n_p = 0, n = 0, k_amp = 0;
  std::vector<cxd> data;

  Tensor4C() = default;
  Tensor4C(int m_, int n_p_, int n_, int k_amp_)
      : m(m_), n_p(n_p_), n(n_), k_amp(k_amp_),
        data(static_cast<std::size_t>(m_) * n_p_ * n_ * k_amp_) {}

  std::size_t size() const { return data.size(); }

  std::size_t flat(int mm, int i, int j, int k) const {
    return static_cast<std::size_t>(mm) +
           static_cast<std::size_t>(m) *
               (static_cast<std::size_t>(i) +
                static_cast<std::size_t>(n_p) *
                    (static_cast<std::size_t>(j) + static_cast<std::size_t>(n) * k));
  }

  cxd& operator()(int mm, int i, int j, int k) { return data[flat(mm, i, j, k)]; }
  const cxd& operator()(int mm, int i, int j, int k) const { return data[flat(mm, i, j, k)]; }

  bool same_shape(const Tensor4C& o) const {
    return m == o.m && n_p == o.n_p && n == o.n && k_amp == o.k_amp;
  }

  std::string shape_string() const {
    return std::to_string(m) + "x" + std::to_string(n_p) + "x" + std::to_string(n) + "x" +
           std::to_string(k_amp);
  }
};

struct ReceivedPilotTensor {
  Tensor4C r;
  std::uint64_t noise_seed = 0;
};

// Real feature view: the complex antenna axis of length M becomes 2M real
// channels, real parts first then imaginary parts. Downstream stages are
// real-valued; this stacking preserves the linear structure for PCA.
inline void real_antenna_fiber(const Tensor4C& t, int i, int j, int k, double* out /* 2M */) {
  for (int mm = 0; mm < t.m; ++mm) {
    const cxd& v = t(mm, i, j, k);
    out[mm] = v.real();
    out[t.m + mm] = v.imag();
  }
}

}  // namespace stargl

#endif  // STARGL_TENSOR_HPP_
