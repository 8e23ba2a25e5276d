#include "fsasc/tensor_poly.hpp"

#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "fsasc/errors.hpp"

namespace fsasc {
namespace {

// Hard cap on basis size; a dense Veronese matrix beyond this is not useful.
constexpr std::uint64_t kMaxBasisSize = 1u << 22;

std::uint64_t binomial_checked(std::uint64_t top, std::uint64_t k) {
  if (k > top - k) k = top - k;
  unsigned __int128 result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // result * (top - k + i) / i is exact at every step (it is C(top-k+i, i)).
    result = result * (top - k + i) / i;
    if (result > std::numeric_limits<std::uint64_t>::max())
      throw CapacityError("monomial count C(" + std::to_string(top) + ", " +
                          std::to_string(k) + ") exceeds 64-bit range");
  }
  return static_cast<std::uint64_t>(result);
}

void enumerate(int var, int remaining, int dim, std::vector<std::uint8_t>& current,
               std::vector<std::uint8_t>& out) {
  if (var == dim - 1) {
    current[var] = static_cast<std::uint8_t>(remaining);
    out.insert(out.end(), current.begin(), current.end());
    return;
  }
  for (int a = remaining; a >= 0; --a) {
    current[var] = static_cast<std::uint8_t>(a);
    enumerate(var + 1, remaining - a, dim, current, out);
  }
}

}  // namespace

std::uint64_t monomial_count(int ambient_dim, int degree) {
  require(ambient_dim >= 1, "monomial_count: ambient dimension must be >= 1");
  require(degree >= 1, "monomial_count: degree must be >= 1");
  return binomial_checked(static_cast<std::uint64_t>(degree) + ambient_dim - 1,
                          static_cast<std::uint64_t>(degree));
}

MonomialBasis::MonomialBasis(int ambient_dim, int degree)
    : ambient_dim_(ambient_dim), degree_(degree) {
  require(ambient_dim >= 1, "MonomialBasis: ambient dimension must be >= 1");
  require(degree >= 0 && degree <= 255, "MonomialBasis: degree out of range");
  const auto count = degree == 0 ? std::uint64_t{1}
                                 : binomial_checked(static_cast<std::uint64_t>(degree) + ambient_dim - 1,
                                                    static_cast<std::uint64_t>(degree));
  if (count > kMaxBasisSize)
    throw CapacityError("MonomialBasis: " + std::to_string(count) + " monomials is too many");
  size_ = static_cast<std::size_t>(count);

  exponents_.reserve(size_ * ambient_dim_);
  std::vector<std::uint8_t> current(ambient_dim_, 0);
  enumerate(0, degree, ambient_dim, current, exponents_);

  derivatives_.resize(ambient_dim_);
  if (degree_ == 0) return;

  lower_ = get(ambient_dim_, degree_ - 1);
  std::map<std::vector<std::uint8_t>, int> lower_index;
  for (std::size_t k = 0; k < lower_->size(); ++k) {
    auto e = lower_->exponent(k);
    lower_index.emplace(std::vector<std::uint8_t>(e.begin(), e.end()), static_cast<int>(k));
  }
  std::vector<std::uint8_t> reduced(ambient_dim_);
  for (std::size_t k = 0; k < size_; ++k) {
    auto e = exponent(k);
    for (int i = 0; i < ambient_dim_; ++i) {
      if (e[i] == 0) continue;
      std::copy(e.begin(), e.end(), reduced.begin());
      --reduced[i];
      derivatives_[i].push_back({static_cast<int>(k), lower_index.at(reduced), e[i]});
    }
  }
}

std::shared_ptr<const MonomialBasis> MonomialBasis::get(int ambient_dim, int degree) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const MonomialBasis>> cache;
  const auto key = std::make_pair(ambient_dim, degree);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  // Built outside the lock: construction recursively asks for the lower degree.
  auto basis = std::make_shared<const MonomialBasis>(ambient_dim, degree);
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(basis)).first->second;
}

Vector MonomialBasis::embed(const VectorRef& x) const {
  if (x.size() != ambient_dim_)
    throw ContractError("veronese_embed: point has dimension " + std::to_string(x.size()) +
                        ", basis expects " + std::to_string(ambient_dim_));
  const int stride = degree_ + 1;
  std::vector<double> powers(static_cast<std::size_t>(ambient_dim_) * stride);
  for (int i = 0; i < ambient_dim_; ++i) {
    double v = 1.0;
    for (int e = 0; e <= degree_; ++e) {
      powers[i * stride + e] = v;
      v *= x[i];
    }
  }
  Vector out(static_cast<Eigen::Index>(size_));
  for (std::size_t k = 0; k < size_; ++k) {
    const auto* e = exponents_.data() + k * ambient_dim_;
    double prod = 1.0;
    for (int i = 0; i < ambient_dim_; ++i) prod *= powers[i * stride + e[i]];
    out[static_cast<Eigen::Index>(k)] = prod;
  }
  return out;
}

Matrix MonomialBasis::embed_rows(const MatrixRef& points) const {
  if (points.cols() != ambient_dim_)
    throw ContractError("embed_rows: points have dimension " + std::to_string(points.cols()) +
                        ", basis expects " + std::to_string(ambient_dim_));
  Matrix out(points.rows(), static_cast<Eigen::Index>(size_));
  for (Eigen::Index j = 0; j < points.rows(); ++j) out.row(j) = embed(points.row(j).transpose()).transpose();
  return out;
}

HomoPoly::HomoPoly(std::shared_ptr<const MonomialBasis> basis, Vector coeffs)
    : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
  require(basis_ != nullptr, "HomoPoly: null basis");
  require(basis_->degree() >= 1, "HomoPoly: degree must be >= 1");
  if (static_cast<std::size_t>(coeffs_.size()) != basis_->size())
    throw ContractError("HomoPoly: " + std::to_string(coeffs_.size()) +
                        " coefficients for a basis of size " + std::to_string(basis_->size()));
  const auto& lower = *basis_->lower();
  jacobian_ = Matrix::Zero(basis_->ambient_dim(), static_cast<Eigen::Index>(lower.size()));
  for (int i = 0; i < basis_->ambient_dim(); ++i)
    for (const auto& t : basis_->derivative_terms(i)) jacobian_(i, t.target) += t.multiplier * coeffs_[t.source];
}

double HomoPoly::eval(const VectorRef& x) const { return coeffs_.dot(basis_->embed(x)); }

Vector HomoPoly::gradient(const VectorRef& x) const {
  if (x.size() != ambient_dim())
    throw ContractError("grad_poly: point dimension does not match polynomial");
  return jacobian_ * basis_->lower()->embed(x);
}

Matrix HomoPoly::gradients(const MatrixRef& points) const {
  return basis_->lower()->embed_rows(points) * jacobian_.transpose();
}

Matrix gradient_operator(const MonomialBasis& basis, const VectorRef& x) {
  require(basis.degree() >= 1, "gradient_operator: degree must be >= 1");
  const Vector lower = basis.lower()->embed(x);
  Matrix g = Matrix::Zero(basis.ambient_dim(), static_cast<Eigen::Index>(basis.size()));
  for (int i = 0; i < basis.ambient_dim(); ++i)
    for (const auto& t : basis.derivative_terms(i)) g(i, t.source) += t.multiplier * lower[t.target];
  return g;
}

Vector veronese_embed(const VectorRef& x, const MonomialBasis& basis) { return basis.embed(x); }
double eval_poly(const HomoPoly& p, const VectorRef& x) { return p.eval(x); }
Vector grad_poly(const HomoPoly& p, const VectorRef& x) { return p.gradient(x); }

}  // namespace fsasc
