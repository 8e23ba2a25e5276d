#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace fsasc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;
using MatrixRef = Eigen::Ref<const Eigen::MatrixXd>;

/// Number of distinct degree-n monomials in D variables, C(n+D-1, n).
/// Throws CapacityError if the value does not fit in 64 bits.
std::uint64_t monomial_count(int ambient_dim, int degree);

/// Ordered list of the exponent multi-indices of all degree-n monomials in D
/// variables. Ordering is lexicographic descending in (a_1, ..., a_D), so for
/// D=3, n=2 the monomials are x1^2, x1x2, x1x3, x2^2, x2x3, x3^2.
///
/// Bases are immutable. `get` hands out shared instances from a process-wide
/// cache, which also carries the partial-derivative maps used by gradients.
class MonomialBasis {
public:
  /// One entry of the sparse map d/dx_i: coefficient `source` of the degree-n
  /// basis contributes `multiplier * c[source]` to entry `target` of the
  /// degree-(n-1) basis.
  struct DerivativeTerm {
    int source;
    int target;
    int multiplier;
  };

  MonomialBasis(int ambient_dim, int degree);

  static std::shared_ptr<const MonomialBasis> get(int ambient_dim, int degree);

  int ambient_dim() const noexcept { return ambient_dim_; }
  int degree() const noexcept { return degree_; }
  std::size_t size() const noexcept { return size_; }

  std::span<const std::uint8_t> exponent(std::size_t k) const {
    return {exponents_.data() + k * ambient_dim_, static_cast<std::size_t>(ambient_dim_)};
  }

  /// Basis of degree n-1 in the same variables; null when degree is 0.
  const std::shared_ptr<const MonomialBasis>& lower() const noexcept { return lower_; }

  std::span<const DerivativeTerm> derivative_terms(int variable) const {
    return derivatives_[static_cast<std::size_t>(variable)];
  }

  /// Veronese embedding of a single point.
  Vector embed(const VectorRef& x) const;

  /// Row j of the result is the embedding of row j of `points`.
  Matrix embed_rows(const MatrixRef& points) const;

private:
  int ambient_dim_;
  int degree_;
  std::size_t size_;
  std::vector<std::uint8_t> exponents_;
  std::shared_ptr<const MonomialBasis> lower_;
  std::vector<std::vector<DerivativeTerm>> derivatives_;
};

/// Homogeneous polynomial p(x) = c^T nu_n(x) over a fixed MonomialBasis.
class HomoPoly {
public:
  HomoPoly(std::shared_ptr<const MonomialBasis> basis, Vector coeffs);

  const MonomialBasis& basis() const noexcept { return *basis_; }
  const std::shared_ptr<const MonomialBasis>& basis_ptr() const noexcept { return basis_; }
  const Vector& coeffs() const noexcept { return coeffs_; }
  int ambient_dim() const noexcept { return basis_->ambient_dim(); }
  int degree() const noexcept { return basis_->degree(); }
  bool is_zero() const { return coeffs_.isZero(0.0); }

  double eval(const VectorRef& x) const;
  Vector gradient(const VectorRef& x) const;

  /// Gradients at every row of `points`, as an N x D matrix.
  Matrix gradients(const MatrixRef& points) const;

  /// D x M_{n-1}(D) matrix J with grad p(x) = J nu_{n-1}(x).
  const Matrix& jacobian_map() const noexcept { return jacobian_; }

private:
  std::shared_ptr<const MonomialBasis> basis_;
  Vector coeffs_;
  Matrix jacobian_;
};

/// D x M_n(D) matrix G(x) with grad p(x) = G(x) c for every p over `basis`.
Matrix gradient_operator(const MonomialBasis& basis, const VectorRef& x);

Vector veronese_embed(const VectorRef& x, const MonomialBasis& basis);
double eval_poly(const HomoPoly& p, const VectorRef& x);
Vector grad_poly(const HomoPoly& p, const VectorRef& x);

}  // namespace fsasc
