#ifndef MLNS_SCALAR_HPP
#define MLNS_SCALAR_HPP

#include <complex>
#include <concepts>
#include <type_traits>

namespace mlns {

/// The solvers are generic over the scalar field: real or complex double
/// precision. Real-field runs use real arithmetic throughout, never complex
/// numbers with zero imaginary parts.
template <class T>
concept Scalar =
    std::same_as<T, double> || std::same_as<T, std::complex<double>>;

template <class T>
inline constexpr bool is_complex_v = false;
template <class T>
inline constexpr bool is_complex_v<std::complex<T>> = true;

inline double conj(double x) { return x; }
inline std::complex<double> conj(const std::complex<double>& z) {
  return std::conj(z);
}

inline double real_part(double x) { return x; }
inline double real_part(const std::complex<double>& z) { return z.real(); }

/// |z|^2 without the square root.
inline double abs2(double x) { return x * x; }
inline double abs2(const std::complex<double>& z) { return std::norm(z); }

}  // namespace mlns

#endif  // MLNS_SCALAR_HPP
