#pragma once

#include <fsasc/errors.hpp>
#include <fsasc/rng.hpp>
#include <fsasc/tensor_poly.hpp>

#include <Eigen/QR>

#include <string>
#include <vector>

namespace fsasc::test {

inline Vector gaussian_vector(Rng& rng, int size) {
  Vector v(size);
  for (int i = 0; i < size; ++i) v[i] = rng.normal();
  return v;
}

inline Vector unit_vector(Rng& rng, int size) {
  Vector v = gaussian_vector(rng, size);
  return v / v.norm();
}

/// Haar-ish orthogonal matrix from the QR factor of a Gaussian matrix.
inline Matrix random_orthogonal(Rng& rng, int size) {
  Matrix g(size, size);
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c) g(r, c) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(size, size);
}

inline HomoPoly random_poly(Rng& rng, int ambient, int degree) {
  auto basis = MonomialBasis::get(ambient, degree);
  return HomoPoly(basis, gaussian_vector(rng, static_cast<int>(basis->size())));
}

/// Collects warnings for the lifetime of the object.
class WarningCapture {
public:
  WarningCapture() {
    previous_ = set_warning_handler([this](std::string_view m) { messages.emplace_back(m); });
  }
  ~WarningCapture() { set_warning_handler(previous_); }
  WarningCapture(const WarningCapture&) = delete;
  WarningCapture& operator=(const WarningCapture&) = delete;

  std::vector<std::string> messages;

private:
  WarningHandler previous_;
};

}  // namespace fsasc::test
