#include "cppc/conic_program.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cppc {

double LinearForm::eval(const Vector& v) const {
  double s = 0.0;
  for (const auto& [k, c] : terms) s += c * v(static_cast<Eigen::Index>(k));
  return s;
}

bool BlockSpec::entry_nonneg(std::size_t i, std::size_t j) const {
  if (!nonneg) return false;
  if (sign_mask.empty()) return true;
  return sign_mask.at(i) && sign_mask.at(j);
}

std::size_t ConicProgram::add_block(BlockSpec spec) {
  if (spec.order < 1) throw std::invalid_argument("ConicProgram: block order must be at least 1");
  if (!spec.sign_mask.empty() && spec.sign_mask.size() != spec.order)
    throw std::invalid_argument("ConicProgram: sign mask length differs from block order");
  block_offset_.push_back(num_vars_);
  num_vars_ += spec.order * (spec.order + 1) / 2;
  blocks_.push_back(std::move(spec));
  return blocks_.size() - 1;
}

std::size_t ConicProgram::add_scalar(bool nonneg) {
  scalar_offset_.push_back(num_vars_++);
  scalars_.push_back(ScalarSpec{nonneg});
  return scalars_.size() - 1;
}

std::size_t ConicProgram::entry_var(std::size_t b, std::size_t i, std::size_t j) const {
  const std::size_t n = blocks_.at(b).order;
  if (i >= n || j >= n) throw std::out_of_range("ConicProgram: block entry out of range");
  if (i > j) std::swap(i, j);
  // Row-major upper triangle.
  return block_offset_[b] + i * n - i * (i - 1) / 2 + (j - i);
}

void ConicProgram::add_frobenius(LinearForm& form, std::size_t b, const Matrix& c) const {
  const std::size_t n = blocks_.at(b).order;
  if (static_cast<std::size_t>(c.rows()) != n || static_cast<std::size_t>(c.cols()) != n)
    throw std::invalid_argument("ConicProgram: coefficient matrix has wrong order");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
      const double coef = i == j ? c(ii, ii) : c(ii, jj) + c(jj, ii);
      if (coef != 0.0) form.add(entry_var(b, i, j), coef);
    }
}

void ConicProgram::add_equality(LinearForm form, double rhs) {
  eq_forms_.push_back(std::move(form));
  eq_rhs_.push_back(rhs);
}

Vector ConicProgram::objective_vector() const {
  Vector c = Vector::Zero(static_cast<Eigen::Index>(num_vars_));
  for (const auto& [k, coef] : objective_.terms) c(static_cast<Eigen::Index>(k)) += coef;
  return c;
}

Matrix ConicProgram::equality_matrix() const {
  Matrix a = Matrix::Zero(static_cast<Eigen::Index>(eq_forms_.size()), static_cast<Eigen::Index>(num_vars_));
  for (std::size_t r = 0; r < eq_forms_.size(); ++r)
    for (const auto& [k, coef] : eq_forms_[r].terms) a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) += coef;
  return a;
}

Vector ConicProgram::equality_vector() const {
  return Eigen::Map<const Vector>(eq_rhs_.data(), static_cast<Eigen::Index>(eq_rhs_.size()));
}

SymMatrix ConicProgram::block_value(const Vector& v, std::size_t b) const {
  const std::size_t n = blocks_.at(b).order;
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v(static_cast<Eigen::Index>(entry_var(b, i, j)));
  return SymMatrix(m);
}

double ConicProgram::objective_value(const Vector& v) const { return objective_.eval(v) + objective_constant; }

void ConicProgram::validate() const {
  if (num_vars_ == 0) throw std::invalid_argument("ConicProgram: no variables");
  auto check_form = [&](const LinearForm& f) {
    for (const auto& [k, coef] : f.terms) {
      if (k >= num_vars_) throw std::invalid_argument("ConicProgram: form references an undeclared variable");
      if (!std::isfinite(coef)) throw std::invalid_argument("ConicProgram: non-finite coefficient");
    }
  };
  check_form(objective_);
  if (!std::isfinite(objective_constant)) throw std::invalid_argument("ConicProgram: non-finite objective constant");
  for (std::size_t r = 0; r < eq_forms_.size(); ++r) {
    check_form(eq_forms_[r]);
    if (!std::isfinite(eq_rhs_[r])) throw std::invalid_argument("ConicProgram: non-finite right-hand side");
  }
}

KktResiduals kkt_residuals(const ConicProgram& p, const Vector& v) {
  if (static_cast<std::size_t>(v.size()) != p.num_vars()) throw std::invalid_argument("kkt_residuals: dimension mismatch");
  KktResiduals r;
  for (std::size_t k = 0; k < p.num_equalities(); ++k)
    r.equality = std::max(r.equality, std::abs(p.equality(k).eval(v) - p.equality_rhs(k)));
  for (std::size_t b = 0; b < p.num_blocks(); ++b) {
    const auto& spec = p.block(b);
    const SymMatrix m = p.block_value(v, b);
    if (spec.psd) r.cone_violation = std::max(r.cone_violation, -jacobi_eigen(m.dense()).values(0));
    for (std::size_t i = 0; i < spec.order; ++i)
      for (std::size_t j = i; j < spec.order; ++j)
        if (spec.entry_nonneg(i, j)) r.cone_violation = std::max(r.cone_violation, -m(i, j));
  }
  for (std::size_t s = 0; s < p.num_scalars(); ++s)
    if (p.scalar(s).nonneg) r.cone_violation = std::max(r.cone_violation, -p.scalar_value(v, s));
  r.objective = p.objective_value(v);
  return r;
}

}  // namespace cppc
