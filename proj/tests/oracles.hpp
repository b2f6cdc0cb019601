#pragma once

// Independent reference computations for the tests: plain loops over
// std::vector, no library calls beyond element access.

#include <cmath>
#include <complex>
#include <vector>

#include "fhlab/graded.hpp"

namespace oracle {

using C = std::complex<double>;
using Mat = std::vector<std::vector<C>>;

inline Mat to_mat(const fhlab::GradedElement& a) {
  const std::size_t r = a.trunc()[0], c = a.trunc()[1];
  Mat m(r, std::vector<C>(c));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m[i][j] = a[i * c + j];
  return m;
}

inline Mat mul(const Mat& a, const Mat& b) {
  Mat out(a.size(), std::vector<C>(b[0].size(), 0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < b[0].size(); ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

inline Mat adjoint(const Mat& a) {
  Mat out(a[0].size(), std::vector<C>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) out[j][i] = std::conj(a[i][j]);
  return out;
}

inline C trace(const Mat& a) {
  C t = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) t += a[i][i];
  return t;
}

inline double max_diff(const Mat& a, const Mat& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) m = std::max(m, std::abs(a[i][j] - b[i][j]));
  return m;
}

inline double max_diff(const fhlab::GradedElement& a, const fhlab::GradedElement& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_diff(const fhlab::GradedElement& a, const Mat& b) { return max_diff(to_mat(a), b); }

}  // namespace oracle
